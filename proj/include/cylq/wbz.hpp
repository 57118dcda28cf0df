#pragma once

// Weil-Brezin-Zak transform between L^2(R) and the fibers L^2(S^1), plus the
// desk-scale Weyl machinery on the line that serves as a reference oracle.
//
// Fourier convention (used by every module): psi~(u) = int psi(x) e^{-iux/hbar} dx.

#include <functional>

#include "cylq/numerics.hpp"

namespace cylq {

/// Quasi-momentum fiber k in [0, 2 pi / a) over a circle of length a.
struct FiberParams {
  double a = kTwoPi;
  double k = 0.0;
  double hbar = 1.0;

  FiberParams() = default;
  FiberParams(double a_, double k_, double hbar_);

  /// Lattice momentum p_n = (pi n / a + k) hbar.
  double lattice_momentum(long n) const { return (n * (kPi / a) + k) * hbar; }
  /// Eigenvalue (2 pi m / a + k) hbar of P^(k) on |m;k>.
  double basis_momentum(long m) const { return lattice_momentum(2 * m); }

  bool operator==(const FiberParams&) const = default;
};

/// Symmetric line grid x_j = -L + j h, j = 0 .. 2L/h - 1.
class LineGrid {
 public:
  LineGrid(double L, double h);

  double half_width() const { return L_; }
  double step() const { return h_; }
  int size() const { return n_; }
  double node(int j) const { return -L_ + h_ * j; }
  /// Index of x if it is a grid node (to 1e-9 of a step), otherwise -1.
  int index_of(double x) const;

 private:
  double L_;
  double h_;
  int n_;
};

using LineProfile = std::function<cplx(double x)>;
using PhaseSpaceFunction = std::function<cplx(double q, double p)>;

struct LineFunction {
  LineGrid grid;
  CVector values;
  /// Values outside [-R, R] are below 1e-12 of the maximum.
  double support_radius;

  static LineFunction sample(const LineGrid& grid, const LineProfile& psi, double support_radius);

  /// Value at x if x is a grid node, zero outside the grid.
  cplx at_node(double x) const;
  double l2_norm_squared() const;
};

/// One WBZ fiber (T psi)(q_j, k) = sum_n e^{inak} psi(q_j - n a) on the circle grid.
/// The circle step must be an integer multiple of the line step.
CVector wbz_transform(const LineFunction& psi, const FiberParams& fp, const CircleGrid& grid);

/// alpha_n = (1/a) psi~((2 pi n / a + k) hbar) for n in [-N, N], by trapezoidal
/// quadrature on the line grid.
ModeSpectrum fiber_coefficients(const LineFunction& psi, const FiberParams& fp, int N);

/// f sampled for the line Weyl kernel: row s holds f at the midpoint
/// (x_i + x_j)/2 = -L + s h / 2 shared by all i + j = s, column l at p-node l.
struct DeskSamples {
  LineGrid grid;
  double p_max;
  int p_count;
  CMatrix values;

  double p_node(int l) const { return -p_max + (l + 0.5) * (2.0 * p_max / p_count); }
  double p_step() const { return 2.0 * p_max / p_count; }
};

/// Samples f on the desk grid used by line_weyl_kernel (grids up to 512 points).
DeskSamples sample_desk(const PhaseSpaceFunction& f, const LineGrid& grid, double p_max, int p_count);

/// K_f(x_i, x_j) = (1/2 pi hbar) int dp f((x_i + x_j)/2, p) e^{i (x_i - x_j) p / hbar}.
CMatrix line_weyl_kernel(const DeskSamples& f, double hbar);

/// Applies an integral kernel on the line grid: (K psi)(x_i) = h sum_j K_ij psi(x_j).
LineFunction apply_line_kernel(const CMatrix& kernel, const LineFunction& psi);

/// Grossmann-Royer parity (Omega(q0,p0) psi)(x) = (1/pi hbar) e^{2i p0 (x - q0)/hbar} psi(2 q0 - x).
/// 2 q0 must sit on the grid lattice; reflected points outside the grid read as zero.
LineFunction grossmann_royer_apply(double q0, double p0, const LineFunction& psi, double hbar);

/// True iff the kernel commutes with translation by a (max-norm residual below tol).
bool is_decomposable(const CMatrix& kernel, const LineGrid& grid, double a, double tol);

/// Max-norm of T_a K T_a^{-1} - K over the overlapping part of the grid.
double translation_residual(const CMatrix& kernel, const LineGrid& grid, double a);

/// Fiber kernel K^(k)(q_i, q_j) = sum_n e^{inak} K(q_i - n a, q_j) of a decomposable
/// line kernel, on the circle grid.
CMatrix fiber_kernel(const CMatrix& kernel, const LineGrid& line, const FiberParams& fp,
                     const CircleGrid& grid);

}  // namespace cylq
