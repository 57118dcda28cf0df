#include "cylq/pptt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cylq {

namespace {

FiberParams pptt_fiber(double hbar) { return FiberParams(kTwoPi, 0.0, hbar); }

double max_diff(const CircleOperator& lhs, const CircleOperator& rhs) { return max_abs(lhs.matrix() - rhs.matrix()); }

void require_window(const PpttFunction& f, int N, const char* who) {
  if (N < 0) throw std::invalid_argument(std::string(who) + ": negative band");
  if (f.p_range() < N) throw std::invalid_argument(std::string(who) + ": momentum range does not cover the band");
  if (f.mode_band() < 2 * N) throw std::invalid_argument(std::string(who) + ": angular grid too coarse for the band");
}

}  // namespace

ThetaGrid::ThetaGrid(int M) : M_(M) {
  if (M < 1) throw std::invalid_argument("ThetaGrid: M must be positive");
}

PpttFunction::PpttFunction(const ThetaGrid& grid, int p_range, double hbar) : grid_(grid), P_(p_range), hbar_(hbar) {
  if (p_range < 0) throw std::invalid_argument("PpttFunction: negative momentum range");
  if (!(hbar > 0.0)) throw std::invalid_argument("PpttFunction: hbar must be positive");
  v_ = CMatrix::Zero(grid.size(), 2 * p_range + 1);
}

PpttFunction PpttFunction::sample(const ThetaGrid& grid, int p_range, double hbar,
                                  const std::function<cplx(double theta, double p)>& f) {
  PpttFunction out(grid, p_range, hbar);
  for (int j = 0; j < grid.size(); ++j) {
    for (int n = -p_range; n <= p_range; ++n) out.at(j, n) = f(grid.node(j), n * hbar);
  }
  return out;
}

CMatrix PpttFunction::angular_modes() const {
  const int M = grid_.size();
  const int B = mode_band();
  CMatrix modes = CMatrix::Zero(2 * B + 1, 2 * P_ + 1);
  for (int mu = -B; mu <= B; ++mu) {
    for (int j = 0; j < M; ++j) {
      const cplx e = phase_pi(-mu, grid_.node(j) / kPi);
      modes.row(mu + B) += e * v_.row(j);
    }
  }
  return modes / static_cast<double>(M);
}

double PpttFunction::max_abs_diff(const PpttFunction& other) const {
  if (other.grid_.size() != grid_.size() || other.P_ != P_) throw std::invalid_argument("PpttFunction: shapes differ");
  return max_abs(v_ - other.v_);
}

CVector pptt_quantizer_apply(const PpttQuantizerIndex& idx, const ThetaGrid& grid, std::span<const cplx> phi) {
  const int M = grid.size();
  if (static_cast<int>(phi.size()) != M) throw std::invalid_argument("pptt_quantizer_apply: sample count does not match grid");
  CVector out(M);
  // 2 theta - alpha_j = alpha_{s - j} with s = (2 theta + 2 pi) M / 2 pi.
  const double s_real = (2.0 * idx.theta + kTwoPi) / grid.step();
  const double s_round = std::nearbyint(s_real);
  if (std::abs(s_real - s_round) <= 1e-12 * std::max(1.0, std::abs(s_real))) {
    const long s = static_cast<long>(s_round);
    for (int j = 0; j < M; ++j) {
      const long i = ((s - j) % M + M) % M;
      out(j) = phase_pi(2L * idx.n, (grid.node(j) - idx.theta) / kPi) * phi[i];
    }
    return out;
  }
  const CircleGrid shifted(kTwoPi, M);
  const ModeSpectrum modes = dft_circle(shifted, phi);
  for (int j = 0; j < M; ++j) {
    const double arg = 2.0 * idx.theta - grid.node(j) + kPi;
    out(j) = phase_pi(2L * idx.n, (grid.node(j) - idx.theta) / kPi) * eval_modes(modes, kTwoPi, arg);
  }
  return out;
}

CircleOperator pptt_quantizer_matrix(const PpttQuantizerIndex& idx, int N, double hbar) {
  if (N < 0) throw std::invalid_argument("pptt_quantizer_matrix: negative band");
  if (std::abs(idx.n) > N) throw std::invalid_argument("pptt_quantizer_matrix: |2n| exceeds 2N");
  CircleOperator op(pptt_fiber(hbar), N);
  const double x = 2.0 * idx.theta;
  for (int m = std::max(-N, 2 * idx.n - N); m <= std::min(N, 2 * idx.n + N); ++m) {
    op.entry(2 * idx.n - m, m) = half_turn_phase(2L * m - 2L * idx.n, x, kTwoPi);
  }
  return op;
}

PpttSpectrum pptt_fourier(const PpttFunction& f, int tau_count) {
  if (tau_count < 2 * f.p_range() + 1) throw std::invalid_argument("pptt_fourier: tau grid too coarse for the momentum range");
  const CMatrix modes = f.angular_modes();
  PpttSpectrum spec;
  spec.tau_count = tau_count;
  spec.mode_band = f.mode_band();
  spec.p_range = f.p_range();
  spec.hbar = f.hbar();
  spec.values = CMatrix::Zero(tau_count, 2 * spec.mode_band + 1);
  for (int l = 0; l < tau_count; ++l) {
    for (int n = -f.p_range(); n <= f.p_range(); ++n) {
      const cplx e = phase_pi(-n, spec.tau(l) / kPi);
      for (int mu = -spec.mode_band; mu <= spec.mode_band; ++mu) {
        spec.values(l, mu + spec.mode_band) += kTwoPi * e * modes(mu + spec.mode_band, n + f.p_range());
      }
    }
  }
  return spec;
}

PpttFunction pptt_inverse_fourier(const PpttSpectrum& spec, const ThetaGrid& grid) {
  PpttFunction out(grid, spec.p_range, spec.hbar);
  const double dtau = kTwoPi / spec.tau_count;
  const double scale = dtau / (kTwoPi * kTwoPi);
  for (int n = -spec.p_range; n <= spec.p_range; ++n) {
    // Mode coefficients 2 pi f_mu(n) by the tau quadrature.
    CVector mode(2 * spec.mode_band + 1);
    mode.setZero();
    for (int l = 0; l < spec.tau_count; ++l) mode += phase_pi(n, spec.tau(l) / kPi) * spec.values.row(l).transpose();
    for (int j = 0; j < grid.size(); ++j) {
      cplx sum{};
      for (int mu = -spec.mode_band; mu <= spec.mode_band; ++mu) {
        sum += mode(mu + spec.mode_band) * phase_pi(mu, grid.node(j) / kPi);
      }
      out.at(j, n) = scale * sum;
    }
  }
  return out;
}

CircleOperator pptt_quantize(const PpttFunction& f, int N) {
  require_window(f, N, "pptt_quantize");
  const CMatrix modes = f.angular_modes();
  const int B = f.mode_band();
  CircleOperator op(pptt_fiber(f.hbar()), N);
  for (int mr = -N; mr <= N; ++mr) {
    for (int mc = -N; mc <= N; ++mc) {
      if ((mr + mc) % 2 != 0) continue;
      op.entry(mr, mc) = modes(mr - mc + B, (mr + mc) / 2 + f.p_range());
    }
  }
  return op;
}

PpttFunction pptt_dequantize(const CircleOperator& op, const ThetaGrid& grid, int p_range) {
  if (!(op.fiber() == pptt_fiber(op.fiber().hbar))) throw std::invalid_argument("pptt_dequantize: requires a = 2 pi, k = 0");
  const int N = op.band();
  if (p_range > N) throw std::invalid_argument("pptt_dequantize: momentum range exceeds the band");
  PpttFunction out(grid, p_range, op.fiber().hbar);
  for (int j = 0; j < grid.size(); ++j) {
    for (int n = -p_range; n <= p_range; ++n) {
      const CircleOperator omega = pptt_quantizer_matrix({grid.node(j), n}, N, op.fiber().hbar);
      out.at(j, n) = (op.matrix() * omega.matrix()).trace();
    }
  }
  return out;
}

double BridgeReport::max_difference() const {
  return std::max({direct_vs_doubled, direct_vs_folded, doubled_vs_folded});
}

BridgeReport bridge_equivalence(const PpttFunction& f, int N) {
  require_window(f, N, "bridge_equivalence");
  const int M = f.grid().size();
  if (M % 2 != 0) throw std::invalid_argument("bridge_equivalence: the fold needs an even angular grid");
  const FiberParams fp = pptt_fiber(f.hbar());

  CircleOperator direct = pptt_quantize(f, N);

  // Doubled range: sum_n (1/4pi) int_{-2pi}^{2pi} dx f(x/2, n) Omega(x, 2n), x = 2 theta_j.
  CircleOperator doubled(fp, N);
  for (int n = -N; n <= N; ++n) {
    for (int j = 0; j < M; ++j) {
      const cplx v = f.at(j, n);
      if (v == cplx{}) continue;
      doubled.matrix() += v * quantizer_matrix({2.0 * f.grid().node(j), 2 * n}, fp, N).matrix();
    }
  }
  doubled.matrix() /= static_cast<double>(M);

  // Fold onto [0, 2pi): F(x, 2n) = (1/2a)[f(x/2, n) + f((x + a)/2, n)] at x_i = 4 pi i / M,
  // where x_i / 2 = theta_{i + M/2} and (x_i + a)/2 = theta_i (mod 2 pi).
  CircleOperator folded(fp, N);
  const double dx = 2.0 * kTwoPi / M;
  for (int n = -N; n <= N; ++n) {
    for (int i = 0; i < M / 2; ++i) {
      const cplx F = (f.at(i + M / 2, n) + f.at(i, n)) / (2.0 * fp.a);
      if (F == cplx{}) continue;
      folded.matrix() += (dx * F) * quantizer_matrix({dx * i, 2 * n}, fp, N).matrix();
    }
  }

  BridgeReport rep{direct, doubled, folded};
  rep.direct_vs_doubled = max_diff(direct, doubled);
  rep.direct_vs_folded = max_diff(direct, folded);
  rep.doubled_vs_folded = max_diff(doubled, folded);
  return rep;
}

double fold_property_residual(double x, int n, int N) {
  const FiberParams fp = pptt_fiber(1.0);
  const CMatrix base = parity_sign(n) * quantizer_matrix({x, n}, fp, N).matrix();
  const double up = max_abs(quantizer_matrix({x + kTwoPi, n}, fp, N).matrix() - base);
  const double down = max_abs(quantizer_matrix({x - kTwoPi, n}, fp, N).matrix() - base);
  return std::max(up, down);
}

CMatrix theta_operator_matrix(int N) {
  if (N < 0) throw std::invalid_argument("theta_operator_matrix: negative band");
  CMatrix T = CMatrix::Zero(2 * N + 1, 2 * N + 1);
  for (int mr = -N; mr <= N; ++mr) {
    for (int mc = -N; mc <= N; ++mc) {
      if (mr == mc) continue;
      const int d = mr - mc;
      T(mr + N, mc + N) = cplx{0.0, parity_sign(d) / d};
    }
  }
  return T;
}

CircleOperator unitary_basis_matrix(double tau, int m, int N) {
  CMatrix H = static_cast<double>(m) * theta_operator_matrix(N);
  for (int j = -N; j <= N; ++j) H(j + N, j + N) += tau * j;
  const FiberParams fp = pptt_fiber(1.0);
  if (m == 0) {
    CircleOperator U(fp, N);
    for (int j = -N; j <= N; ++j) U.entry(j, j) = phase_pi(j, tau / kPi);
    return U;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("unitary_basis_matrix: eigensolver failed");
  CVector phases(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i) phases(i) = unit_phase(es.eigenvalues()(i));
  return CircleOperator(fp, N, es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

double unitary_trace_weak_error(int m, const std::function<cplx(double)>& g, int N, int quad_nodes) {
  if (quad_nodes < 1) throw std::invalid_argument("unitary_trace_weak_error: no quadrature nodes");
  cplx sum{};
  for (int l = 0; l < quad_nodes; ++l) {
    const double tau = -kPi + kTwoPi * l / quad_nodes;
    sum += unitary_basis_matrix(tau, m, N).trace() * g(tau);
  }
  const cplx value = sum / static_cast<double>(quad_nodes);
  const cplx target = (m == 0) ? g(0.0) : cplx{};
  return std::abs(value - target);
}

}  // namespace cylq
