#pragma once

// Quantum formalism on the cylinder S^1 x R: Weyl map fibers, the Moyal
// quantizer Omega^(k)(x, n), Weyl symbols F(x, n), trace identities, the
// trikernel and the two star-product routes.
//
// Operators live in the truncated basis <q|m;k> = a^{-1/2} e^{i(2 pi m/a + k) q},
// m in [-N, N]. Every operation states the index window inside which its
// identity is exact and rejects inputs outside it.

#include <functional>
#include <vector>

#include "cylq/numerics.hpp"
#include "cylq/wbz.hpp"

namespace cylq {

/// Angular-mode description of a classical observable: f(q, p) =
/// sum_{|m| <= band} coeff(m, p) e^{i 2 pi m q / a}. The p-derivative is needed
/// only for Poisson brackets.
struct ModeFunction {
  int band = 0;
  std::function<cplx(int m, double p)> coeff;
  std::function<cplx(int m, double p)> dcoeff_dp;

  cplx value(double q, double p, double a) const;
  /// {f, g} = df/dq dg/dp - df/dp dg/dq.
  static cplx poisson_bracket(const ModeFunction& f, const ModeFunction& g, double q, double p, double a);
};

/// f(q, p) stored as g_m(p_n) on the momentum lattice p_n = (pi n / a + k) hbar,
/// m in [-B, B], n in [-P, P].
class CylinderFunction {
 public:
  CylinderFunction(const FiberParams& fp, int band, int p_range);

  static CylinderFunction sample(const FiberParams& fp, int band, int p_range,
                                 const std::function<cplx(int m, double p)>& coeff);
  static CylinderFunction sample(const FiberParams& fp, int p_range, const ModeFunction& f);

  const FiberParams& fiber() const { return fp_; }
  int band() const { return B_; }
  int p_range() const { return P_; }

  cplx coeff(int m, int n) const;
  void set_coeff(int m, int n, cplx value);
  /// f(q, p_n).
  cplx value(double q, int n) const;

 private:
  FiberParams fp_;
  int B_;
  int P_;
  CMatrix modes_;  // (2B+1) x (2P+1)
};

/// F(x, n) = sum_r c_{r,n} e^{i pi r x / a} with r = n (mod 2), n in [-n_max, n_max],
/// |r| <= r_max. The parity constraint makes F(x + a, n) = (-1)^n F(x, n) structural.
class WeylSymbol {
 public:
  WeylSymbol(const FiberParams& fp, int n_max, int r_max);

  const FiberParams& fiber() const { return fp_; }
  int n_max() const { return n_max_; }
  int r_max() const { return r_max_; }

  /// Zero outside the stored window or for r of the wrong parity.
  cplx coeff(int r, int n) const;
  /// Throws std::invalid_argument when r and n differ in parity or fall outside the window.
  void set_coeff(int r, int n, cplx value);
  cplx value(double x, int n) const;

  /// Copy keeping only coefficients that a band-N operator can carry,
  /// i.e. |n + r| <= 2N and |n - r| <= 2N.
  WeylSymbol restricted_to_band(int N) const;
  /// True when every nonzero coefficient sits inside the band-N window.
  bool within_band(int N) const;

  /// Max |difference| over the union of both windows.
  double max_abs_diff(const WeylSymbol& other) const;
  /// Max |difference| restricted to coefficients with |n + r|, |n - r| <= 2 * window.
  double max_abs_diff_in_window(const WeylSymbol& other, int window) const;

 private:
  FiberParams fp_;
  int n_max_;
  int r_max_;
  CMatrix c_;  // (2 r_max + 1) x (2 n_max + 1)
};

/// Complex (2N+1)x(2N+1) matrix <m'|A|m> in the truncated basis.
class CircleOperator {
 public:
  CircleOperator(const FiberParams& fp, int N);
  CircleOperator(const FiberParams& fp, int N, CMatrix matrix);

  static CircleOperator identity(const FiberParams& fp, int N);
  /// P^(k) = diag((2 pi m / a + k) hbar).
  static CircleOperator momentum(const FiberParams& fp, int N);
  /// E = exp(i 2 pi Q / a): <m+1|E|m> = 1.
  static CircleOperator shift(const FiberParams& fp, int N);

  const FiberParams& fiber() const { return fp_; }
  int band() const { return N_; }
  int dim() const { return 2 * N_ + 1; }
  const CMatrix& matrix() const { return m_; }
  CMatrix& matrix() { return m_; }

  cplx entry(int m_row, int m_col) const { return m_(m_row + N_, m_col + N_); }
  cplx& entry(int m_row, int m_col) { return m_(m_row + N_, m_col + N_); }
  bool in_band(int m) const { return m >= -N_ && m <= N_; }

  CircleOperator operator*(const CircleOperator& rhs) const;
  CircleOperator adjoint() const;
  cplx trace() const { return m_.trace(); }

 private:
  FiberParams fp_;
  int N_;
  CMatrix m_;
};

/// Point (x, n) of the quantum phase space S^1 x Z; x is taken modulo 2a.
struct QuantizerIndex {
  double x = 0.0;
  int n = 0;
};

/// (Omega^(k)(x,n) phi)(q) = e^{ik(2q - x)} e^{i pi (2q - x) n / a} phi_c(x - q) on grid samples.
/// phi_c is the quasi-periodic extension; off-grid arguments use band-limited interpolation.
CVector quantizer_apply(const QuantizerIndex& idx, const CircleGrid& grid, std::span<const cplx> phi,
                        const FiberParams& fp);

/// <m'|Omega(x,n)|m> = delta_{m+m',n} e^{i pi (2m - n) x / a}; requires |n| <= 2N.
CircleOperator quantizer_matrix(const QuantizerIndex& idx, const FiberParams& fp, int N);

/// <m'|f^(k)|m> = g_{m'-m}(p_{m+m'}); requires B <= 2N and P >= 2N.
CircleOperator weyl_quantize(const CylinderFunction& f, int N);

/// F(x, n) = (1/2a)[f(x/2, p_n) + (-1)^n f((x + a)/2, p_n)].
WeylSymbol symbol_of_function(const CylinderFunction& f);

/// F(q, n) = (1/a) tr{A Omega(q, n)} read off the anti-diagonals of A, |n| <= 2N.
WeylSymbol symbol_of_operator(const CircleOperator& op);

/// (1/a) tr{A Omega(q, n)} by explicit matrix product; reference for symbol_of_operator.
cplx symbol_value_by_trace(const CircleOperator& op, double q, int n);

/// Kernel samples K(q_i, q_j) = sum A_{m'm} <q_i|m';k> <m;k|q_j> on the grid.
CMatrix operator_kernel(const CircleOperator& op, const CircleGrid& grid);

/// Kernel rebuilt from a symbol: K(q, q') = e^{ik(q - q')} sum_n e^{i pi (q - q') n / a} F(q + q', n).
CMatrix symbol_to_kernel(const WeylSymbol& F, const CircleGrid& grid);

/// Matrix elements <m'|K|m> of grid kernel samples by the periodic trapezoidal rule.
CircleOperator kernel_matrix_elements(const CMatrix& kernel, const CircleGrid& grid, const FiberParams& fp, int N);

/// F(x_i, n) = (1/a) int_0^a dy e^{-2i(pi n / a + k) y} K(x/2 + y, x/2 - y) at
/// x_i = i a / M, i in [0, 2M). Exact for operators of band N when 2N + |n| < M.
CVector kernel_to_symbol(const CMatrix& kernel, const CircleGrid& grid, const FiberParams& fp, int n);

/// A^{II}(Q, Y) = int_0^{2 pi} dy' e^{iQ(Y - 2y')} K(y', Y - y') at Y = x_i, Q = n/2.
/// Only for k = 0, a = 2 pi; equals 2 pi F(Y, n).
CVector kasperkovitz_peev_symbol(const CMatrix& kernel, const CircleGrid& grid, int n);

/// Circle kernel of f by quadrature of the line-kernel form
/// K^(k)(q,q') = (1/2 pi hbar) sum_t e^{itak} int dp f((q + q' - t a)/2, p) e^{i(q - q' - t a)p/hbar},
/// using the midpoint rule on [-p_max, p_max] and translates |t| <= translates.
CMatrix weyl_kernel_quadrature(const PhaseSpaceFunction& f, const FiberParams& fp, const CircleGrid& grid,
                               double p_max, int p_count, int translates);

/// tr Omega(x, n) = (1 + (-1)^n)/2 in the truncated basis; requires |n| <= 2N.
double trace_quantizer(const QuantizerIndex& idx, const FiberParams& fp, int N);

/// tr{Omega(x,n) Omega(y,m)}: zero for n != m, otherwise the truncated Dirichlet kernel
/// e^{-i pi n (y - x)/a} sum_j e^{i 2 pi j (y - x)/a} over in-band j.
cplx pair_trace(const QuantizerIndex& first, const QuantizerIndex& second, const FiberParams& fp, int N);

/// |(1/a) int_0^a dy tr{Omega(x,n) Omega(y,n)} g(y) - g(x)| by the trapezoidal rule
/// on quad_nodes points; n must be even.
double pair_trace_weak_error(double x, int n, const std::function<cplx(double)>& g, const FiberParams& fp, int N,
                             int quad_nodes);

/// tr{Omega(x,n) Omega(y,m) Omega(z,l)} =
/// (1 + (-1)^{n-m+l})/2 e^{i pi (m-l) x/a} e^{i pi (l-n) y/a} e^{i pi (n-m) z/a}.
/// Throws when the intermediate indices of an even-parity triple leave the band.
cplx trikernel(const QuantizerIndex& first, const QuantizerIndex& second, const QuantizerIndex& third,
               const FiberParams& fp, int N);

/// True when the even-parity triple keeps its intermediate indices inside the band.
bool trikernel_in_window(int n, int m, int l, int N);

/// (F * G)(x, n) = (1/a) sum_{m,l} int dy int dz F(y,m) G(z,l) tr{Omega(x,n) Omega(y,m) Omega(z,l)}
/// with exact mode integrals. Both symbols must lie inside the band-N window.
WeylSymbol star_trikernel(const WeylSymbol& F, const WeylSymbol& G, int N);

/// Closed-form Moyal product of mode functions:
/// (e^{i m1 theta} g1) * (e^{i m2 theta} g2) = e^{i(m1+m2) theta} g1(p + m2 pi hbar/a) g2(p - m1 pi hbar/a),
/// with theta = 2 pi q / a. Shifts are whole lattice steps; the output keeps the
/// lattice points whose shifted partners exist.
CylinderFunction star_mode(const CylinderFunction& f, const CylinderFunction& g);

/// (f * g - g * f) / (i hbar).
CylinderFunction moyal_bracket(const CylinderFunction& f, const CylinderFunction& g);

struct TraceReport {
  cplx direct;     // matrix trace
  cplx doubled_x;  // single op: sum_n int dq F(2q, n); pair: a sum_n int dq F G
  cplx even_n;     // single op: sum_n int dq F(q, 2n); pair: sum_n int dq (F*G)(q, 2n)
  double spread() const;
};

/// Three routes to tr A.
TraceReport modified_trace_formulas(const CircleOperator& op);
/// Three routes to tr{A B}.
TraceReport modified_trace_formulas(const CircleOperator& lhs, const CircleOperator& rhs);

/// U^(k)(x, n) = e^{i pi n x / a} E^n e^{i x P^(k) / hbar} truncated to the band.
CircleOperator unitary_translation_matrix(double x, int n, const FiberParams& fp, int N);

}  // namespace cylq
