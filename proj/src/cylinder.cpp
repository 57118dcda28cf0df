#include "cylq/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cylq {

namespace {

void require_band(int N, const char* who) {
  if (N < 0) throw std::invalid_argument(std::string(who) + ": negative band");
}

void require_same_fiber(const FiberParams& lhs, const FiberParams& rhs, const char* who) {
  if (!(lhs == rhs)) throw std::invalid_argument(std::string(who) + ": fiber parameters differ");
}

void require_grid(const CircleGrid& grid, const FiberParams& fp, const char* who) {
  if (std::abs(grid.a() - fp.a) > 1e-12 * fp.a) {
    throw std::invalid_argument(std::string(who) + ": grid length differs from a");
  }
}

// Grid index of x if x is a node multiple of a/M (to 1e-12 of a step), otherwise none.
bool grid_multiple(double x, const CircleGrid& grid, long& s) {
  const double r = x / grid.step();
  const double rounded = std::nearbyint(r);
  if (std::abs(r - rounded) > 1e-12 * std::max(1.0, std::abs(r))) return false;
  s = static_cast<long>(rounded);
  return true;
}

// <q|m;k> sampled on the grid, without the a^{-1/2} factor.
cplx basis_phase(long m, double q, const FiberParams& fp) {
  return half_turn_phase(2 * m, q, fp.a) * unit_phase(fp.k * q);
}

}  // namespace

cplx ModeFunction::value(double q, double p, double a) const {
  cplx sum{};
  for (int m = -band; m <= band; ++m) sum += coeff(m, p) * half_turn_phase(2L * m, q, a);
  return sum;
}

cplx ModeFunction::poisson_bracket(const ModeFunction& f, const ModeFunction& g, double q, double p, double a) {
  if (!f.dcoeff_dp || !g.dcoeff_dp) throw std::invalid_argument("poisson_bracket: p-derivative missing");
  auto parts = [&](const ModeFunction& h, cplx& dq, cplx& dp) {
    dq = dp = cplx{};
    for (int m = -h.band; m <= h.band; ++m) {
      const cplx e = half_turn_phase(2L * m, q, a);
      dq += cplx{0.0, kTwoPi * m / a} * h.coeff(m, p) * e;
      dp += h.dcoeff_dp(m, p) * e;
    }
  };
  cplx fq, fp, gq, gp;
  parts(f, fq, fp);
  parts(g, gq, gp);
  return fq * gp - fp * gq;
}

CylinderFunction::CylinderFunction(const FiberParams& fp, int band, int p_range)
    : fp_(fp), B_(band), P_(p_range) {
  if (band < 0 || p_range < 0) throw std::invalid_argument("CylinderFunction: negative range");
  modes_ = CMatrix::Zero(2 * B_ + 1, 2 * P_ + 1);
}

CylinderFunction CylinderFunction::sample(const FiberParams& fp, int band, int p_range,
                                          const std::function<cplx(int m, double p)>& coeff) {
  CylinderFunction f(fp, band, p_range);
  for (int m = -band; m <= band; ++m) {
    for (int n = -p_range; n <= p_range; ++n) f.set_coeff(m, n, coeff(m, fp.lattice_momentum(n)));
  }
  return f;
}

CylinderFunction CylinderFunction::sample(const FiberParams& fp, int p_range, const ModeFunction& f) {
  return sample(fp, f.band, p_range, f.coeff);
}

cplx CylinderFunction::coeff(int m, int n) const {
  if (std::abs(m) > B_ || std::abs(n) > P_) return {};
  return modes_(m + B_, n + P_);
}

void CylinderFunction::set_coeff(int m, int n, cplx value) {
  if (std::abs(m) > B_ || std::abs(n) > P_) throw std::invalid_argument("CylinderFunction: index outside range");
  modes_(m + B_, n + P_) = value;
}

cplx CylinderFunction::value(double q, int n) const {
  if (std::abs(n) > P_) throw std::invalid_argument("CylinderFunction: lattice index outside range");
  cplx sum{};
  for (int m = -B_; m <= B_; ++m) sum += modes_(m + B_, n + P_) * half_turn_phase(2L * m, q, fp_.a);
  return sum;
}

WeylSymbol::WeylSymbol(const FiberParams& fp, int n_max, int r_max) : fp_(fp), n_max_(n_max), r_max_(r_max) {
  if (n_max < 0 || r_max < 0) throw std::invalid_argument("WeylSymbol: negative window");
  c_ = CMatrix::Zero(2 * r_max_ + 1, 2 * n_max_ + 1);
}

cplx WeylSymbol::coeff(int r, int n) const {
  if (std::abs(r) > r_max_ || std::abs(n) > n_max_) return {};
  return c_(r + r_max_, n + n_max_);
}

void WeylSymbol::set_coeff(int r, int n, cplx value) {
  if ((r - n) % 2 != 0) throw std::invalid_argument("WeylSymbol: mode r must have the parity of n");
  if (std::abs(r) > r_max_ || std::abs(n) > n_max_) throw std::invalid_argument("WeylSymbol: index outside window");
  c_(r + r_max_, n + n_max_) = value;
}

cplx WeylSymbol::value(double x, int n) const {
  if (std::abs(n) > n_max_) return {};
  cplx sum{};
  const int r0 = (std::abs(n + r_max_) % 2 == 0) ? -r_max_ : -r_max_ + 1;
  for (int r = r0; r <= r_max_; r += 2) sum += c_(r + r_max_, n + n_max_) * half_turn_phase(r, x, fp_.a);
  return sum;
}

WeylSymbol WeylSymbol::restricted_to_band(int N) const {
  require_band(N, "restricted_to_band");
  WeylSymbol out(fp_, std::min(n_max_, 2 * N), std::min(r_max_, 2 * N));
  for (int n = -out.n_max_; n <= out.n_max_; ++n) {
    for (int r = -out.r_max_; r <= out.r_max_; ++r) {
      if ((r - n) % 2 != 0 || std::abs(n + r) > 2 * N || std::abs(n - r) > 2 * N) continue;
      out.c_(r + out.r_max_, n + out.n_max_) = coeff(r, n);
    }
  }
  return out;
}

bool WeylSymbol::within_band(int N) const {
  for (int n = -n_max_; n <= n_max_; ++n) {
    for (int r = -r_max_; r <= r_max_; ++r) {
      if (c_(r + r_max_, n + n_max_) == cplx{}) continue;
      if (std::abs(n + r) > 2 * N || std::abs(n - r) > 2 * N) return false;
    }
  }
  return true;
}

double WeylSymbol::max_abs_diff(const WeylSymbol& other) const {
  const int nn = std::max(n_max_, other.n_max_);
  const int rr = std::max(r_max_, other.r_max_);
  double worst = 0.0;
  for (int n = -nn; n <= nn; ++n) {
    for (int r = -rr; r <= rr; ++r) worst = std::max(worst, std::abs(coeff(r, n) - other.coeff(r, n)));
  }
  return worst;
}

double WeylSymbol::max_abs_diff_in_window(const WeylSymbol& other, int window) const {
  const int nn = std::max(n_max_, other.n_max_);
  const int rr = std::max(r_max_, other.r_max_);
  double worst = 0.0;
  for (int n = -nn; n <= nn; ++n) {
    for (int r = -rr; r <= rr; ++r) {
      if (std::abs(n + r) > 2 * window || std::abs(n - r) > 2 * window) continue;
      worst = std::max(worst, std::abs(coeff(r, n) - other.coeff(r, n)));
    }
  }
  return worst;
}

CircleOperator::CircleOperator(const FiberParams& fp, int N) : fp_(fp), N_(N) {
  require_band(N, "CircleOperator");
  m_ = CMatrix::Zero(2 * N + 1, 2 * N + 1);
}

CircleOperator::CircleOperator(const FiberParams& fp, int N, CMatrix matrix) : fp_(fp), N_(N), m_(std::move(matrix)) {
  require_band(N, "CircleOperator");
  if (m_.rows() != 2 * N + 1 || m_.cols() != 2 * N + 1) {
    throw std::invalid_argument("CircleOperator: matrix size does not match band");
  }
}

CircleOperator CircleOperator::identity(const FiberParams& fp, int N) {
  CircleOperator op(fp, N);
  op.m_.setIdentity();
  return op;
}

CircleOperator CircleOperator::momentum(const FiberParams& fp, int N) {
  CircleOperator op(fp, N);
  for (int m = -N; m <= N; ++m) op.entry(m, m) = fp.basis_momentum(m);
  return op;
}

CircleOperator CircleOperator::shift(const FiberParams& fp, int N) {
  CircleOperator op(fp, N);
  for (int m = -N; m < N; ++m) op.entry(m + 1, m) = 1.0;
  return op;
}

CircleOperator CircleOperator::operator*(const CircleOperator& rhs) const {
  require_same_fiber(fp_, rhs.fp_, "CircleOperator product");
  if (N_ != rhs.N_) throw std::invalid_argument("CircleOperator product: bands differ");
  return CircleOperator(fp_, N_, m_ * rhs.m_);
}

CircleOperator CircleOperator::adjoint() const { return CircleOperator(fp_, N_, m_.adjoint()); }

CVector quantizer_apply(const QuantizerIndex& idx, const CircleGrid& grid, std::span<const cplx> phi,
                        const FiberParams& fp) {
  require_grid(grid, fp, "quantizer_apply");
  const int M = grid.size();
  if (static_cast<int>(phi.size()) != M) throw std::invalid_argument("quantizer_apply: sample count does not match grid");

  CVector out(M);
  long s = 0;
  if (grid_multiple(idx.x, grid, s)) {
    for (int j = 0; j < M; ++j) {
      // x - q_j = (s - j) a / M = w a + q_i
      const long t = s - j;
      const long w = floor_div(t, M);
      const long i = t - w * M;
      const double arg = 2.0 * grid.node(j) - idx.x;
      const cplx phase = half_turn_phase(idx.n, arg, fp.a) * unit_phase(fp.k * arg);
      out(j) = phase * unit_phase(fp.a * fp.k * static_cast<double>(w)) * phi[i];
    }
    return out;
  }

  // Off-grid x: interpolate the periodic part u(q) = e^{-ikq} phi(q).
  std::vector<cplx> u(M);
  for (int j = 0; j < M; ++j) u[j] = unit_phase(-fp.k * grid.node(j)) * phi[j];
  const ModeSpectrum modes = dft_circle(grid, u);
  for (int j = 0; j < M; ++j) {
    const double y = idx.x - grid.node(j);
    const double arg = 2.0 * grid.node(j) - idx.x;
    const cplx phase = half_turn_phase(idx.n, arg, fp.a) * unit_phase(fp.k * arg);
    out(j) = phase * unit_phase(fp.k * y) * eval_modes(modes, fp.a, y);
  }
  return out;
}

CircleOperator quantizer_matrix(const QuantizerIndex& idx, const FiberParams& fp, int N) {
  require_band(N, "quantizer_matrix");
  if (std::abs(idx.n) > 2 * N) throw std::invalid_argument("quantizer_matrix: |n| exceeds 2N");
  CircleOperator op(fp, N);
  for (int m = std::max(-N, idx.n - N); m <= std::min(N, idx.n + N); ++m) {
    op.entry(idx.n - m, m) = half_turn_phase(2L * m - idx.n, idx.x, fp.a);
  }
  return op;
}

CircleOperator weyl_quantize(const CylinderFunction& f, int N) {
  require_band(N, "weyl_quantize");
  if (f.band() > 2 * N) throw std::invalid_argument("weyl_quantize: angular band exceeds 2N");
  if (f.p_range() < 2 * N) throw std::invalid_argument("weyl_quantize: momentum lattice does not cover 2N");
  CircleOperator op(f.fiber(), N);
  for (int mr = -N; mr <= N; ++mr) {
    for (int mc = -N; mc <= N; ++mc) op.entry(mr, mc) = f.coeff(mr - mc, mr + mc);
  }
  return op;
}

WeylSymbol symbol_of_function(const CylinderFunction& f) {
  // c_{r,n} = g_r(p_n) / a for r = n (mod 2).
  WeylSymbol F(f.fiber(), f.p_range(), f.band());
  for (int n = -f.p_range(); n <= f.p_range(); ++n) {
    for (int r = -f.band(); r <= f.band(); ++r) {
      if ((r - n) % 2 != 0) continue;
      F.set_coeff(r, n, f.coeff(r, n) / f.fiber().a);
    }
  }
  return F;
}

WeylSymbol symbol_of_operator(const CircleOperator& op) {
  const int N = op.band();
  WeylSymbol F(op.fiber(), 2 * N, 2 * N);
  for (int mr = -N; mr <= N; ++mr) {
    for (int mc = -N; mc <= N; ++mc) F.set_coeff(mr - mc, mr + mc, op.entry(mr, mc) / op.fiber().a);
  }
  return F;
}

cplx symbol_value_by_trace(const CircleOperator& op, double q, int n) {
  const CircleOperator omega = quantizer_matrix({q, n}, op.fiber(), op.band());
  return (op.matrix() * omega.matrix()).trace() / op.fiber().a;
}

CMatrix operator_kernel(const CircleOperator& op, const CircleGrid& grid) {
  const FiberParams& fp = op.fiber();
  require_grid(grid, fp, "operator_kernel");
  const int M = grid.size();
  const int N = op.band();
  CMatrix basis(M, op.dim());
  for (int j = 0; j < M; ++j) {
    for (int m = -N; m <= N; ++m) basis(j, m + N) = basis_phase(m, grid.node(j), fp);
  }
  return (basis * op.matrix() * basis.adjoint()) / fp.a;
}

CMatrix symbol_to_kernel(const WeylSymbol& F, const CircleGrid& grid) {
  const FiberParams& fp = F.fiber();
  require_grid(grid, fp, "symbol_to_kernel");
  const int M = grid.size();
  CMatrix K(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double d = grid.node(i) - grid.node(j);
      const double s = grid.node(i) + grid.node(j);
      cplx sum{};
      for (int n = -F.n_max(); n <= F.n_max(); ++n) sum += half_turn_phase(n, d, fp.a) * F.value(s, n);
      K(i, j) = unit_phase(fp.k * d) * sum;
    }
  }
  return K;
}

CircleOperator kernel_matrix_elements(const CMatrix& kernel, const CircleGrid& grid, const FiberParams& fp, int N) {
  require_grid(grid, fp, "kernel_matrix_elements");
  const int M = grid.size();
  if (kernel.rows() != M || kernel.cols() != M) throw std::invalid_argument("kernel_matrix_elements: kernel size");
  CMatrix basis(M, 2 * N + 1);
  for (int j = 0; j < M; ++j) {
    for (int m = -N; m <= N; ++m) basis(j, m + N) = basis_phase(m, grid.node(j), fp);
  }
  const double w = grid.step() * grid.step() / fp.a;
  return CircleOperator(fp, N, w * (basis.adjoint() * kernel * basis));
}

CVector kernel_to_symbol(const CMatrix& kernel, const CircleGrid& grid, const FiberParams& fp, int n) {
  require_grid(grid, fp, "kernel_to_symbol");
  const int M = grid.size();
  if (kernel.rows() != kernel.cols()) throw std::invalid_argument("kernel_to_symbol: kernel is not square");
  if (kernel.rows() != M) throw std::invalid_argument("kernel_to_symbol: kernel does not match grid");
  CVector out(2 * M);
  for (int i = 0; i < 2 * M; ++i) {
    // y = (2t - i) a / (2M); x/2 + y at node t, x/2 - y at node i - t.
    cplx sum{};
    for (int t = 0; t < M; ++t) {
      const long jp = i - t;
      const long w = floor_div(jp, M);
      const long jr = jp - w * M;
      const double y = (2.0 * t - i) * fp.a / (2.0 * M);
      const cplx phase = phase_pi(-n, (2.0 * t - i) / M) * unit_phase(-2.0 * fp.k * y);
      sum += phase * unit_phase(-fp.k * fp.a * static_cast<double>(w)) * kernel(t, jr);
    }
    out(i) = sum / static_cast<double>(M);
  }
  return out;
}

CVector kasperkovitz_peev_symbol(const CMatrix& kernel, const CircleGrid& grid, int n) {
  if (std::abs(grid.a() - kTwoPi) > 1e-12) throw std::invalid_argument("kasperkovitz_peev_symbol: requires a = 2 pi");
  const int M = grid.size();
  if (kernel.rows() != M || kernel.cols() != M) throw std::invalid_argument("kasperkovitz_peev_symbol: kernel size");
  CVector out(2 * M);
  for (int i = 0; i < 2 * M; ++i) {
    cplx sum{};
    for (int j = 0; j < M; ++j) {
      const long jr = ((i - j) % M + M) % M;
      sum += phase_pi(n, static_cast<double>(i - 2 * j) / M) * kernel(j, jr);
    }
    out(i) = sum * grid.step();
  }
  return out;
}

CMatrix weyl_kernel_quadrature(const PhaseSpaceFunction& f, const FiberParams& fp, const CircleGrid& grid,
                               double p_max, int p_count, int translates) {
  require_grid(grid, fp, "weyl_kernel_quadrature");
  if (!(p_max > 0.0) || p_count < 1 || translates < 0) {
    throw std::invalid_argument("weyl_kernel_quadrature: bad quadrature parameters");
  }
  const int M = grid.size();
  const double dp = 2.0 * p_max / p_count;
  std::vector<double> p(p_count);
  for (int l = 0; l < p_count; ++l) p[l] = -p_max + (l + 0.5) * dp;
  const double weight = dp / (kTwoPi * fp.hbar);
  CMatrix K = CMatrix::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      cplx sum{};
      for (int t = -translates; t <= translates; ++t) {
        const double mid = 0.5 * (grid.node(i) + grid.node(j) - t * fp.a);
        const double d = grid.node(i) - grid.node(j) - t * fp.a;
        cplx inner{};
        for (int l = 0; l < p_count; ++l) inner += f(mid, p[l]) * unit_phase(d * p[l] / fp.hbar);
        sum += unit_phase(t * fp.a * fp.k) * inner;
      }
      K(i, j) = weight * sum;
    }
  }
  return K;
}

double trace_quantizer(const QuantizerIndex& idx, const FiberParams& fp, int N) {
  require_band(N, "trace_quantizer");
  if (std::abs(idx.n) > 2 * N) throw std::invalid_argument("trace_quantizer: band too small for n");
  return quantizer_matrix(idx, fp, N).trace().real();
}

cplx pair_trace(const QuantizerIndex& first, const QuantizerIndex& second, const FiberParams& fp, int N) {
  require_band(N, "pair_trace");
  if (std::abs(first.n) > 2 * N || std::abs(second.n) > 2 * N) {
    throw std::invalid_argument("pair_trace: index outside band");
  }
  if (first.n != second.n) return {};
  const int n = first.n;
  const double d = second.x - first.x;
  cplx sum{};
  for (int m = std::max(-N, n - N); m <= std::min(N, n + N); ++m) sum += half_turn_phase(2L * m - n, d, fp.a);
  return sum;
}

double pair_trace_weak_error(double x, int n, const std::function<cplx(double)>& g, const FiberParams& fp, int N,
                             int quad_nodes) {
  if (n % 2 != 0) throw std::invalid_argument("pair_trace_weak_error: n must be even");
  if (quad_nodes < 1) throw std::invalid_argument("pair_trace_weak_error: no quadrature nodes");
  const double h = fp.a / quad_nodes;
  cplx sum{};
  for (int j = 0; j < quad_nodes; ++j) {
    const double y = j * h;
    sum += pair_trace({x, n}, {y, n}, fp, N) * g(y);
  }
  return std::abs(sum * h / fp.a - g(x));
}

bool trikernel_in_window(int n, int m, int l, int N) {
  const int s = n - m + l;
  if (s % 2 != 0) return true;
  const int j0 = s / 2;
  return std::abs(j0) <= N && std::abs(l - j0) <= N && std::abs(m - l + j0) <= N;
}

cplx trikernel(const QuantizerIndex& first, const QuantizerIndex& second, const QuantizerIndex& third,
               const FiberParams& fp, int N) {
  require_band(N, "trikernel");
  const int n = first.n, m = second.n, l = third.n;
  if ((n - m + l) % 2 != 0) return {};
  if (!trikernel_in_window(n, m, l, N)) throw std::invalid_argument("trikernel: intermediate index outside band");
  return half_turn_phase(m - l, first.x, fp.a) * half_turn_phase(l - n, second.x, fp.a) *
         half_turn_phase(n - m, third.x, fp.a);
}

WeylSymbol star_trikernel(const WeylSymbol& F, const WeylSymbol& G, int N) {
  require_band(N, "star_trikernel");
  require_same_fiber(F.fiber(), G.fiber(), "star_trikernel");
  if (!F.within_band(N) || !G.within_band(N)) {
    throw std::invalid_argument("star_trikernel: symbol support exceeds the trikernel window");
  }
  // (F*G) c_{mu - lambda, r1 + lambda} += a c^F_{r1, mu} c^G_{mu - r1 - lambda, lambda}.
  const double a = F.fiber().a;
  WeylSymbol out(F.fiber(), 2 * N, 2 * N);
  CMatrix acc = CMatrix::Zero(4 * N + 1, 4 * N + 1);
  for (int mu = -F.n_max(); mu <= F.n_max(); ++mu) {
    for (int r1 = -F.r_max(); r1 <= F.r_max(); ++r1) {
      const cplx cf = F.coeff(r1, mu);
      if (cf == cplx{}) continue;
      for (int lambda = -G.n_max(); lambda <= G.n_max(); ++lambda) {
        const cplx cg = G.coeff(mu - r1 - lambda, lambda);
        if (cg == cplx{}) continue;
        const int r = mu - lambda;
        const int n = r1 + lambda;
        acc(r + 2 * N, n + 2 * N) += a * cf * cg;
      }
    }
  }
  for (int n = -2 * N; n <= 2 * N; ++n) {
    for (int r = -2 * N; r <= 2 * N; ++r) {
      if ((r - n) % 2 != 0) continue;
      out.set_coeff(r, n, acc(r + 2 * N, n + 2 * N));
    }
  }
  return out;
}

CylinderFunction star_mode(const CylinderFunction& f, const CylinderFunction& g) {
  require_same_fiber(f.fiber(), g.fiber(), "star_mode");
  const int P = std::min(f.p_range() - g.band(), g.p_range() - f.band());
  if (P < 0) throw std::invalid_argument("star_mode: shifted lattice points are missing");
  CylinderFunction out(f.fiber(), f.band() + g.band(), P);
  for (int n = -P; n <= P; ++n) {
    for (int m1 = -f.band(); m1 <= f.band(); ++m1) {
      for (int m2 = -g.band(); m2 <= g.band(); ++m2) {
        const cplx term = f.coeff(m1, n + m2) * g.coeff(m2, n - m1);
        if (term == cplx{}) continue;
        out.set_coeff(m1 + m2, n, out.coeff(m1 + m2, n) + term);
      }
    }
  }
  return out;
}

CylinderFunction moyal_bracket(const CylinderFunction& f, const CylinderFunction& g) {
  const CylinderFunction fg = star_mode(f, g);
  const CylinderFunction gf = star_mode(g, f);
  CylinderFunction out(f.fiber(), fg.band(), fg.p_range());
  const cplx denom{0.0, f.fiber().hbar};
  for (int m = -fg.band(); m <= fg.band(); ++m) {
    for (int n = -fg.p_range(); n <= fg.p_range(); ++n) out.set_coeff(m, n, (fg.coeff(m, n) - gf.coeff(m, n)) / denom);
  }
  return out;
}

double TraceReport::spread() const {
  return std::max({std::abs(direct - doubled_x), std::abs(direct - even_n), std::abs(doubled_x - even_n)});
}

TraceReport modified_trace_formulas(const CircleOperator& op) {
  const int N = op.band();
  const double a = op.fiber().a;
  const WeylSymbol F = symbol_of_operator(op);
  const CircleGrid grid(a, 4 * N + 1);
  TraceReport rep;
  rep.direct = op.trace();
  cplx doubled{}, even{};
  for (int n = -F.n_max(); n <= F.n_max(); ++n) {
    for (int j = 0; j < grid.size(); ++j) doubled += F.value(2.0 * grid.node(j), n);
  }
  for (int n = -N; n <= N; ++n) {
    for (int j = 0; j < grid.size(); ++j) even += F.value(grid.node(j), 2 * n);
  }
  rep.doubled_x = doubled * grid.step();
  rep.even_n = even * grid.step();
  return rep;
}

TraceReport modified_trace_formulas(const CircleOperator& lhs, const CircleOperator& rhs) {
  require_same_fiber(lhs.fiber(), rhs.fiber(), "modified_trace_formulas");
  if (lhs.band() != rhs.band()) throw std::invalid_argument("modified_trace_formulas: bands differ");
  const int N = lhs.band();
  const double a = lhs.fiber().a;
  const WeylSymbol F = symbol_of_operator(lhs);
  const WeylSymbol G = symbol_of_operator(rhs);
  const WeylSymbol FG = star_trikernel(F, G, N);
  const CircleGrid grid(a, 4 * N + 1);
  TraceReport rep;
  rep.direct = (lhs * rhs).trace();
  cplx paired{}, even{};
  for (int n = -F.n_max(); n <= F.n_max(); ++n) {
    for (int j = 0; j < grid.size(); ++j) paired += F.value(grid.node(j), n) * G.value(grid.node(j), n);
  }
  for (int n = -N; n <= N; ++n) {
    for (int j = 0; j < grid.size(); ++j) even += FG.value(grid.node(j), 2 * n);
  }
  rep.doubled_x = a * paired * grid.step();
  rep.even_n = even * grid.step();
  return rep;
}

CircleOperator unitary_translation_matrix(double x, int n, const FiberParams& fp, int N) {
  require_band(N, "unitary_translation_matrix");
  CircleOperator op(fp, N);
  const cplx global = half_turn_phase(n, x, fp.a);
  for (int m = std::max(-N, -N - n); m <= std::min(N, N - n); ++m) {
    op.entry(m + n, m) = global * unit_phase(x * fp.basis_momentum(m) / fp.hbar);
  }
  return op;
}

}  // namespace cylq
