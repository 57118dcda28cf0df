#include "cylq/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace cylq {

CircleGrid::CircleGrid(double a, int M) : a_(a), M_(M) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("CircleGrid: a must be positive");
  if (M < 1) throw std::invalid_argument("CircleGrid: M must be positive");
}

ModeSpectrum dft_circle(const CircleGrid& grid, std::span<const cplx> samples) {
  if (samples.empty()) throw std::invalid_argument("dft_circle: empty input");
  const int M = grid.size();
  if (static_cast<int>(samples.size()) != M) {
    throw std::invalid_argument("dft_circle: sample count does not match grid");
  }
  std::vector<cplx> in(samples.begin(), samples.end());
  std::vector<cplx> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  ModeSpectrum spec;
  spec.m_min = -(M / 2);
  spec.coeffs.resize(M);
  for (int i = 0; i < M; ++i) {
    const int m = spec.m_min + i;
    const int bin = ((m % M) + M) % M;
    spec.coeffs(i) = out[bin] / static_cast<double>(M);
  }
  return spec;
}

CVector idft_circle(const CircleGrid& grid, const ModeSpectrum& modes) {
  const int M = grid.size();
  const int lo = -(M / 2);
  const int hi = lo + M - 1;
  if (modes.coeffs.size() == 0) throw std::invalid_argument("idft_circle: empty spectrum");
  std::vector<cplx> bins(M, cplx{});
  for (int m = modes.m_min; m <= modes.m_max(); ++m) {
    const cplx c = modes.at(m);
    if (m < lo || m > hi) {
      if (c != cplx{}) throw std::invalid_argument("idft_circle: mode outside grid band");
      continue;
    }
    bins[((m % M) + M) % M] = c;
  }
  std::vector<cplx> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, bins);
  CVector v(M);
  for (int j = 0; j < M; ++j) v(j) = out[j];
  return v;
}

cplx eval_modes(const ModeSpectrum& modes, double a, double q) {
  cplx sum{};
  const double u = 2.0 * q / a;
  for (int m = modes.m_min; m <= modes.m_max(); ++m) sum += modes.at(m) * phase_pi(m, u);
  return sum;
}

int theta3_truncation(const ThetaArgs& args, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("theta3: tol must be positive");
  const double abs_rho = std::abs(args.rho);
  if (!(abs_rho < 1.0)) throw std::domain_error("theta3: |rho| must be < 1");
  if (abs_rho == 0.0) return 0;
  const double log_rho = std::log(abs_rho);  // < 0
  const double growth = 2.0 * std::abs(args.z.imag());
  const double target = std::log(tol * 1e-2);
  // log term bound: n^2 log|rho| + n*growth, maximal near n = growth / (-2 log|rho|).
  const int peak = static_cast<int>(std::ceil(growth / (-2.0 * log_rho)));
  int n = std::max(1, peak + 1);
  while (n * n * log_rho + n * growth >= target) ++n;
  return n;
}

cplx theta3(const ThetaArgs& args, double tol) {
  const int nmax = theta3_truncation(args, tol);
  if (nmax == 0) return cplx{1.0, 0.0};
  const cplx log_rho = std::log(args.rho);
  cplx sum{1.0, 0.0};
  // Sum the smallest terms first.
  for (int n = nmax; n >= 1; --n) {
    const double nn = static_cast<double>(n) * n;
    const cplx plus = std::exp(nn * log_rho + cplx{0.0, 2.0 * n} * args.z);
    const cplx minus = std::exp(nn * log_rho - cplx{0.0, 2.0 * n} * args.z);
    sum += plus + minus;
  }
  return sum;
}

cplx phase_pi(long j, double u) {
  const double jd = static_cast<double>(j);
  const double p = jd * u;
  const double err = std::fma(jd, u, -p);
  const double r = (p - 2.0 * std::nearbyint(0.5 * p)) + err;
  const double angle = kPi * r;
  return {std::cos(angle), std::sin(angle)};
}

cplx half_turn_phase(long j, double x, double period) {
  double w = std::floor(x / period);
  double r = std::fma(-w, period, x);
  if (r < 0.0) {
    r += period;
    w -= 1.0;
  } else if (r >= period) {
    r -= period;
    w += 1.0;
  }
  const long wl = static_cast<long>(w);
  return phase_pi(j, r / period) * parity_sign(j * wl);
}

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace cylq
