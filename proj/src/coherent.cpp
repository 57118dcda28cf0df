#include "cylq/coherent.hpp"

#include <cmath>
#include <stdexcept>

namespace cylq {

namespace {

double gaussian_norm(const CoherentStateParams& csp) {
  return std::pow(csp.omega / (kPi * csp.fp.hbar), 0.25);
}

}  // namespace

CoherentStateParams::CoherentStateParams(double q_, double p_, double omega_, const FiberParams& fp_)
    : q(q_), p(p_), omega(omega_), fp(fp_) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("CoherentStateParams: omega must be positive");
  if (!std::isfinite(q) || !std::isfinite(p)) throw std::invalid_argument("CoherentStateParams: q and p must be finite");
}

cplx weyl_heisenberg_state(const CoherentStateParams& csp, double x) {
  const double hbar = csp.fp.hbar;
  const double d = x - csp.q;
  return gaussian_norm(csp) * std::exp(-csp.omega * d * d / (2.0 * hbar)) *
         unit_phase(csp.p * (x - 0.5 * csp.q) / hbar);
}

CVector cs_wavefunction_theta(const CoherentStateParams& csp, const CircleGrid& grid) {
  const FiberParams& fp = csp.fp;
  if (std::abs(grid.a() - fp.a) > 1e-12 * fp.a) throw std::invalid_argument("cs_wavefunction: grid length differs from a");
  const double hbar = fp.hbar;
  const double a = fp.a;
  const cplx rho{csp.rho1(), 0.0};
  CVector out(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    // Re-centre on the translate n0 closest to q, then sum_nu e^{i nu a k} eta(q'' - nu a).
    const long n0 = static_cast<long>(std::nearbyint((grid.node(j) - csp.q) / a));
    const double qq = grid.node(j) - n0 * a;
    const cplx zstar{csp.omega * csp.q, csp.p};
    const cplx u = zstar - csp.omega * qq;
    const cplx lead = std::exp(cplx{0.0, 1.0} * csp.p * zstar / (2.0 * csp.omega * hbar) -
                               u * u / (2.0 * csp.omega * hbar));
    const cplx z = cplx{0.0, a / (2.0 * hbar)} * (u - cplx{0.0, fp.k * hbar});
    out(j) = unit_phase(n0 * a * fp.k) * gaussian_norm(csp) * lead * theta3({z, rho});
  }
  return out;
}

CVector cs_wavefunction_sum(const CoherentStateParams& csp, const CircleGrid& grid) {
  const FiberParams& fp = csp.fp;
  if (std::abs(grid.a() - fp.a) > 1e-12 * fp.a) throw std::invalid_argument("cs_wavefunction: grid length differs from a");
  const double a = fp.a;
  // Translates whose Gaussian exponent is below -46 (< 1e-20) are dropped.
  const double reach = std::sqrt(92.0 * fp.hbar / csp.omega);
  CVector out(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double qp = grid.node(j);
    const long lo = static_cast<long>(std::floor((qp - csp.q - reach) / a));
    const long hi = static_cast<long>(std::ceil((qp - csp.q + reach) / a));
    cplx sum{};
    for (long n = lo; n <= hi; ++n) sum += unit_phase(n * a * fp.k) * weyl_heisenberg_state(csp, qp - n * a);
    out(j) = sum;
  }
  return out;
}

CVector cs_wavefunction(const CoherentStateParams& csp, const CircleGrid& grid) {
  return csp.decay() <= kThetaRouteMaxDecay ? cs_wavefunction_theta(csp, grid) : cs_wavefunction_sum(csp, grid);
}

CVector cs_coefficients(const CoherentStateParams& csp, int N) {
  if (N < 0) throw std::invalid_argument("cs_coefficients: negative band");
  const FiberParams& fp = csp.fp;
  const double hbar = fp.hbar;
  const double scale = gaussian_norm(csp) * std::sqrt(kTwoPi * hbar / csp.omega / fp.a);
  CVector c(2 * N + 1);
  for (int m = -N; m <= N; ++m) {
    const double u = fp.basis_momentum(m);
    const double d = u - csp.p;
    c(m + N) = scale * std::exp(-d * d / (2.0 * csp.omega * hbar)) * unit_phase((0.5 * csp.p - u) * csp.q / hbar);
  }
  return c;
}

ResolutionReport resolution_of_unity(const FiberParams& fp, double omega, int N, double p_cutoff, int q_steps,
                                     int p_steps) {
  if (!(p_cutoff > 0.0) || q_steps < 1 || p_steps < 1) throw std::invalid_argument("resolution_of_unity: bad quadrature");
  const double dq = fp.a / q_steps;
  const double dp = 2.0 * p_cutoff / p_steps;
  CMatrix acc = CMatrix::Zero(2 * N + 1, 2 * N + 1);
  CMatrix block(2 * N + 1, p_steps);
  for (int i = 0; i < q_steps; ++i) {
    for (int l = 0; l < p_steps; ++l) {
      const double p = -p_cutoff + (l + 0.5) * dp;
      block.col(l) = cs_coefficients(CoherentStateParams(i * dq, p, omega, fp), N);
    }
    acc += block * block.adjoint();
  }
  ResolutionReport rep;
  rep.matrix = acc * (dq * dp / (kTwoPi * fp.hbar));
  rep.deviation = max_abs(rep.matrix - CMatrix::Identity(2 * N + 1, 2 * N + 1));
  return rep;
}

TranslatedState cs_translation(double x, int n, const CoherentStateParams& csp) {
  const FiberParams& fp = csp.fp;
  TranslatedState out{CoherentStateParams(csp.q - x, csp.p + kTwoPi * fp.hbar * n / fp.a, csp.omega, fp),
                      half_turn_phase(n, csp.q, fp.a) * unit_phase(csp.p * x / (2.0 * fp.hbar))};
  return out;
}

double overlap_concentration_error(const CoherentStateParams& csp, const PhaseSpaceFunction& bump, int N,
                                   int q_steps, int p_steps, double p_halfwidth) {
  if (q_steps < 1 || p_steps < 1 || !(p_halfwidth > 0.0)) {
    throw std::invalid_argument("overlap_concentration_error: bad quadrature");
  }
  const FiberParams& fp = csp.fp;
  const CVector c0 = cs_coefficients(csp, N);
  const double dq = fp.a / q_steps;
  const double dp = 2.0 * p_halfwidth / p_steps;
  cplx weighted{};
  for (int i = 0; i < q_steps; ++i) {
    for (int l = 0; l < p_steps; ++l) {
      const double qp = i * dq;
      const double pp = csp.p - p_halfwidth + (l + 0.5) * dp;
      const CVector c = cs_coefficients(CoherentStateParams(qp, pp, csp.omega, fp), N);
      const double w = std::norm(c.dot(c0));
      weighted += w * bump(qp, pp);
    }
  }
  const cplx value = weighted * (dq * dp / (kTwoPi * fp.hbar));
  return std::abs(value - bump(csp.q, csp.p));
}

int coherent_band(const CoherentStateParams& csp, int observable_band) {
  const FiberParams& fp = csp.fp;
  const double spacing = kTwoPi * fp.hbar / fp.a;
  const double reach = std::abs(csp.p) + std::abs(fp.k * fp.hbar) + 10.0 * std::sqrt(csp.omega * fp.hbar);
  return static_cast<int>(std::ceil(reach / spacing)) + observable_band + 2;
}

std::vector<SweepRow> semiclassical_sweep(const ModeFunction& f, const ModeFunction& g,
                                          const CoherentStateParams& state, const std::vector<double>& hbars) {
  if (hbars.empty()) throw std::invalid_argument("semiclassical_sweep: empty hbar sequence");
  for (std::size_t i = 1; i < hbars.size(); ++i) {
    if (!(hbars[i] < hbars[i - 1])) throw std::invalid_argument("semiclassical_sweep: hbar sequence must decrease");
  }
  const double a = state.fp.a;
  const cplx f_classical = f.value(state.q, state.p, a);
  const cplx bracket_classical = ModeFunction::poisson_bracket(f, g, state.q, state.p, a);
  const cplx shift_classical = half_turn_phase(2, state.q, a);

  std::vector<SweepRow> rows;
  rows.reserve(hbars.size());
  for (double hbar : hbars) {
    const FiberParams fp(a, state.fp.k, hbar);
    const CoherentStateParams csp(state.q, state.p, state.omega, fp);
    const int N = coherent_band(csp, std::max(f.band, g.band));
    const CircleOperator F = weyl_quantize(CylinderFunction::sample(fp, 2 * N, f), N);
    const CircleOperator G = weyl_quantize(CylinderFunction::sample(fp, 2 * N, g), N);
    const CVector c = cs_coefficients(csp, N);
    const double norm = c.squaredNorm();
    auto expect = [&](const CMatrix& A) { return c.dot(A * c) / norm; };

    SweepRow row;
    row.hbar = hbar;
    row.band = N;
    row.norm = norm;
    row.f = expect(F.matrix());
    row.shift = expect(CircleOperator::shift(fp, N).matrix());
    row.momentum = expect(CircleOperator::momentum(fp, N).matrix());
    row.bracket = expect(F.matrix() * G.matrix() - G.matrix() * F.matrix()) / cplx{0.0, hbar};
    row.norm_error = std::abs(norm - 1.0);
    row.f_error = std::abs(row.f - f_classical);
    row.shift_error = std::abs(row.shift - shift_classical);
    row.momentum_error = std::abs(row.momentum - state.p);
    row.bracket_error = std::abs(row.bracket - bracket_classical);
    rows.push_back(row);
  }
  return rows;
}

MonotoneReport sweep_monotone(const std::vector<SweepRow>& rows) {
  MonotoneReport rep;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rep.norm = rep.norm && rows[i].norm_error < rows[i - 1].norm_error;
    rep.f = rep.f && rows[i].f_error < rows[i - 1].f_error;
    rep.shift = rep.shift && rows[i].shift_error < rows[i - 1].shift_error;
    rep.momentum = rep.momentum && rows[i].momentum_error < rows[i - 1].momentum_error;
    rep.bracket = rep.bracket && rows[i].bracket_error < rows[i - 1].bracket_error;
  }
  return rep;
}

}  // namespace cylq
