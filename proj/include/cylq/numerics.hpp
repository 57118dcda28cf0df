#pragma once

// Shared numerical substrate: circle grids, DFT on the circle, Jacobi theta3
// and the phase helpers every other module relies on.

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cylq {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Equispaced nodes q_j = j*a/M, j = 0..M-1, on the circle [0, a).
class CircleGrid {
 public:
  CircleGrid(double a, int M);

  double a() const { return a_; }
  int size() const { return M_; }
  double step() const { return a_ / M_; }
  double node(int j) const { return step() * j; }

  /// Largest band N whose trigonometric polynomials the grid integrates exactly.
  int max_band() const { return (M_ - 1) / 2; }

 private:
  double a_;
  int M_;
};

/// Fourier modes g_m for m in [m_min, m_min + size).
struct ModeSpectrum {
  int m_min = 0;
  CVector coeffs;

  int m_max() const { return m_min + static_cast<int>(coeffs.size()) - 1; }
  bool contains(int m) const { return m >= m_min && m <= m_max(); }
  /// Zero outside the stored range.
  cplx at(int m) const { return contains(m) ? coeffs(m - m_min) : cplx{}; }
};

/// Coefficients g_m with g(q_j) = sum_m g_m exp(i 2 pi m q_j / a), m in
/// [-floor(M/2), ceil(M/2) - 1].
ModeSpectrum dft_circle(const CircleGrid& grid, std::span<const cplx> samples);

/// Inverse of dft_circle; modes outside the grid's index range are rejected.
CVector idft_circle(const CircleGrid& grid, const ModeSpectrum& modes);

/// Evaluates sum_m g_m exp(i 2 pi m q / a) at an arbitrary point.
cplx eval_modes(const ModeSpectrum& modes, double a, double q);

struct ThetaArgs {
  cplx z;
  cplx rho;
};

/// Smallest n* >= 1 beyond the peak of |rho|^{n^2} e^{2 n |Im z|} at which the
/// term bound drops below tol * 1e-2.
int theta3_truncation(const ThetaArgs& args, double tol);

/// theta(z; rho) = sum_n rho^{n^2} e^{2 i n z}.
cplx theta3(const ThetaArgs& args, double tol = 1e-15);

/// exp(i pi j u) with the argument reduced modulo 2 before the trig call, so
/// that equal products j*u give bit-identical phases.
cplx phase_pi(long j, double u);

/// exp(i pi j x / period). x is first reduced to x = w*period + r with r in
/// [0, period), so that x and x + period give phases differing by exactly
/// (-1)^j whenever x + period is representable.
cplx half_turn_phase(long j, double x, double period);

/// exp(i x) for real x.
inline cplx unit_phase(double x) { return {std::cos(x), std::sin(x)}; }

double max_abs(const CMatrix& m);

/// Sign (-1)^n for any integer n.
constexpr double parity_sign(long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

/// Floor division for possibly negative numerators.
constexpr long floor_div(long num, long den) {
  long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

}  // namespace cylq
