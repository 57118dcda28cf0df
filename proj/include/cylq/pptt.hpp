#pragma once

// Unitary-operator quantization on S^1 x hbar Z (a = 2 pi, k = 0) and its
// bridge to the circle quantizer: (theta, n) <-> (x, n') = (2 theta, 2 n).
//
// Only the even sector m + m' = 2n of an operator is reached by this
// quantizer, so only even angular modes of a symbol survive quantization.

#include <functional>

#include "cylq/cylinder.hpp"

namespace cylq {

/// Angular grid theta_j = -pi + 2 pi j / M.
class ThetaGrid {
 public:
  explicit ThetaGrid(int M);
  int size() const { return M_; }
  double node(int j) const { return -kPi + kTwoPi * j / M_; }
  double step() const { return kTwoPi / M_; }

 private:
  int M_;
};

/// Samples f(theta_j, n hbar), n in [-P, P].
class PpttFunction {
 public:
  PpttFunction(const ThetaGrid& grid, int p_range, double hbar);

  static PpttFunction sample(const ThetaGrid& grid, int p_range, double hbar,
                             const std::function<cplx(double theta, double p)>& f);

  const ThetaGrid& grid() const { return grid_; }
  int p_range() const { return P_; }
  double hbar() const { return hbar_; }

  cplx at(int j, int n) const { return v_(j, n + P_); }
  cplx& at(int j, int n) { return v_(j, n + P_); }
  const CMatrix& values() const { return v_; }

  /// Angular modes f_mu(n) = (1/2pi) int dtheta f(theta, n hbar) e^{-i mu theta},
  /// mu in [-(M-1)/2, (M-1)/2].
  CMatrix angular_modes() const;
  int mode_band() const { return (grid_.size() - 1) / 2; }

  double max_abs_diff(const PpttFunction& other) const;

 private:
  ThetaGrid grid_;
  int P_;
  double hbar_;
  CMatrix v_;  // M x (2P+1)
};

struct PpttQuantizerIndex {
  double theta = 0.0;
  int n = 0;

  /// Circle quantizer index (2 theta, 2 n).
  QuantizerIndex to_circle() const { return {2.0 * theta, 2 * n}; }
};

/// (Omega(theta,n) phi)(alpha) = e^{2in(alpha - theta)} phi(2 theta - alpha) with periodic wrap.
CVector pptt_quantizer_apply(const PpttQuantizerIndex& idx, const ThetaGrid& grid, std::span<const cplx> phi);

/// <m'|Omega(theta,n)|m> = delta_{m+m',2n} e^{i 2 (m - n) theta}; requires |n| <= N.
CircleOperator pptt_quantizer_matrix(const PpttQuantizerIndex& idx, int N, double hbar = 1.0);

/// f~(tau, m) = sum_n int dtheta f(theta, n hbar) e^{-i(tau n + m theta)} on tau_l = -pi + 2 pi l / T.
struct PpttSpectrum {
  int tau_count = 0;
  int mode_band = 0;
  int p_range = 0;
  double hbar = 1.0;
  CMatrix values;  // T x (2 mode_band + 1)

  double tau(int l) const { return -kPi + kTwoPi * l / tau_count; }
  cplx at(int l, int m) const { return values(l, m + mode_band); }
};

/// Requires tau_count >= 2P + 1 so that the inverse is exact.
PpttSpectrum pptt_fourier(const PpttFunction& f, int tau_count);

/// f(theta_j, n hbar) = (1/(2pi)^2) sum_m int dtau f~(tau, m) e^{i(tau n + m theta_j)}.
PpttFunction pptt_inverse_fourier(const PpttSpectrum& spec, const ThetaGrid& grid);

/// f^ = sum_n int dtheta/2pi f(theta, n hbar) Omega(theta, n) by exact mode sums:
/// <m'|f^|m> = f_{m'-m}((m + m')/2) on the even sector, zero elsewhere.
CircleOperator pptt_quantize(const PpttFunction& f, int N);

/// f(theta, n hbar) = tr{f^ Omega(theta, n)} on the grid, |n| <= P.
PpttFunction pptt_dequantize(const CircleOperator& op, const ThetaGrid& grid, int p_range);

struct BridgeReport {
  CircleOperator direct;       // pptt_quantize
  CircleOperator doubled;      // circle quantizers over x in [-2 pi, 2 pi)
  CircleOperator folded;       // symbol of the folded function on [0, 2 pi)
  double direct_vs_doubled = 0.0;
  double direct_vs_folded = 0.0;
  double doubled_vs_folded = 0.0;
  double max_difference() const;
};

BridgeReport bridge_equivalence(const PpttFunction& f, int N);

/// Max |Omega(x + s 2 pi, n) - (-1)^n Omega(x, n)| entrywise for s = +1 and -1.
double fold_property_residual(double x, int n, int N);

/// Truncated theta^: zero diagonal, entry(m', m) = i (-1)^{m'-m} / (m' - m).
CMatrix theta_operator_matrix(int N);

/// exp(i (tau P / hbar + m theta^)) in the truncated basis, P = diag(j hbar).
CircleOperator unitary_basis_matrix(double tau, int m, int N);

/// |(1/2pi) int dtau tr U(tau, m) g(tau) - delta_{m,0} g(0)| with a trapezoidal
/// rule on quad_nodes points of [-pi, pi); g must be 2 pi-periodic.
double unitary_trace_weak_error(int m, const std::function<cplx(double)>& g, int N, int quad_nodes);

}  // namespace cylq
