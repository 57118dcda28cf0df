#include "cylq/wbz.hpp"

#include <cmath>
#include <stdexcept>

namespace cylq {

namespace {

// Integer ratio num/den if it is one to 1e-9, otherwise -1.
long integer_ratio(double num, double den) {
  const double r = num / den;
  const double rounded = std::nearbyint(r);
  if (std::abs(r - rounded) > 1e-9 * std::max(1.0, std::abs(r))) return -1;
  return static_cast<long>(rounded);
}

}  // namespace

FiberParams::FiberParams(double a_, double k_, double hbar_) : a(a_), k(k_), hbar(hbar_) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("FiberParams: a must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("FiberParams: hbar must be positive");
  if (!(k >= 0.0 && k < kTwoPi / a)) throw std::invalid_argument("FiberParams: k must lie in [0, 2pi/a)");
}

LineGrid::LineGrid(double L, double h) : L_(L), h_(h) {
  if (!(L > 0.0) || !(h > 0.0)) throw std::invalid_argument("LineGrid: L and h must be positive");
  const long n = integer_ratio(2.0 * L, h);
  if (n <= 0) throw std::invalid_argument("LineGrid: 2L must be an integer multiple of h");
  n_ = static_cast<int>(n);
}

int LineGrid::index_of(double x) const {
  const double r = (x + L_) / h_;
  const double rounded = std::nearbyint(r);
  if (std::abs(r - rounded) > 1e-9) return -1;
  if (rounded < 0 || rounded >= n_) return -1;
  return static_cast<int>(rounded);
}

LineFunction LineFunction::sample(const LineGrid& grid, const LineProfile& psi, double support_radius) {
  LineFunction out{grid, CVector(grid.size()), support_radius};
  for (int j = 0; j < grid.size(); ++j) out.values(j) = psi(grid.node(j));
  return out;
}

cplx LineFunction::at_node(double x) const {
  const int i = grid.index_of(x);
  return i < 0 ? cplx{} : values(i);
}

double LineFunction::l2_norm_squared() const { return values.squaredNorm() * grid.step(); }

CVector wbz_transform(const LineFunction& psi, const FiberParams& fp, const CircleGrid& grid) {
  if (std::abs(grid.a() - fp.a) > 1e-12 * fp.a) throw std::invalid_argument("wbz_transform: grid a differs from fiber a");
  const double h = psi.grid.step();
  const long stride = integer_ratio(grid.step(), h);
  const long per_cell = integer_ratio(fp.a, h);
  const long offset = integer_ratio(psi.grid.half_width(), h);
  if (stride <= 0 || per_cell <= 0 || offset < 0) {
    throw std::invalid_argument("wbz_transform: circle grid is not aligned with the line grid");
  }
  const long n_line = psi.grid.size();
  const double peak = psi.values.cwiseAbs().maxCoeff();
  const double cutoff = 1e-14 * peak;
  const int M = grid.size();

  // Sum over translate n of the segment psi(q_j - n a); stop once a translate
  // is entirely below the cutoff or outside the grid.
  auto segment = [&](long n, CVector& acc) -> bool {
    bool any_in_grid = false;
    double seg_max = 0.0;
    const cplx phase = unit_phase(n * fp.a * fp.k);
    for (int j = 0; j < M; ++j) {
      const long idx = j * stride - n * per_cell + offset;
      if (idx < 0 || idx >= n_line) continue;
      any_in_grid = true;
      seg_max = std::max(seg_max, std::abs(psi.values(idx)));
      acc(j) += phase * psi.values(idx);
    }
    return any_in_grid && seg_max >= cutoff;
  };

  CVector out = CVector::Zero(M);
  // Start from the translate holding the peak so that off-centre profiles are covered.
  Eigen::Index argmax = 0;
  psi.values.cwiseAbs().maxCoeff(&argmax);
  const long centre = floor_div(offset - static_cast<long>(argmax), per_cell);
  for (int d = -1; d <= 1; ++d) segment(centre + d, out);
  long up = centre + 2;
  while (segment(up, out)) ++up;
  long down = centre - 2;
  while (segment(down, out)) --down;
  return out;
}

ModeSpectrum fiber_coefficients(const LineFunction& psi, const FiberParams& fp, int N) {
  if (N < 0) throw std::invalid_argument("fiber_coefficients: negative band");
  const double h = psi.grid.step();
  const double nyquist = kPi / h;
  if ((kTwoPi * N / fp.a + fp.k) >= nyquist || (kTwoPi * N / fp.a) >= nyquist) {
    throw std::invalid_argument("fiber_coefficients: band exceeds the alias-free band of the line grid");
  }
  ModeSpectrum out;
  out.m_min = -N;
  out.coeffs = CVector::Zero(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    const double freq = kTwoPi * n / fp.a + fp.k;
    cplx sum{};
    for (int j = 0; j < psi.grid.size(); ++j) sum += psi.values(j) * unit_phase(-freq * psi.grid.node(j));
    out.coeffs(n + N) = sum * h / fp.a;
  }
  return out;
}

DeskSamples sample_desk(const PhaseSpaceFunction& f, const LineGrid& grid, double p_max, int p_count) {
  if (grid.size() > 512) throw std::invalid_argument("sample_desk: desk grids are limited to 512 points");
  if (!(p_max > 0.0) || p_count < 1) throw std::invalid_argument("sample_desk: bad momentum grid");
  DeskSamples out{grid, p_max, p_count, CMatrix(2 * grid.size() - 1, p_count)};
  for (int s = 0; s < out.values.rows(); ++s) {
    const double mid = -grid.half_width() + 0.5 * s * grid.step();
    for (int l = 0; l < p_count; ++l) out.values(s, l) = f(mid, out.p_node(l));
  }
  return out;
}

CMatrix line_weyl_kernel(const DeskSamples& f, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("line_weyl_kernel: hbar must be positive");
  if (!f.values.allFinite()) throw std::invalid_argument("line_weyl_kernel: non-finite samples");
  const int n = f.grid.size();
  const int L = f.p_count;
  const double h = f.grid.step();
  // phase(d, l) = exp(i (x_i - x_j) p_l / hbar) with d = i - j + n - 1.
  CMatrix phase(2 * n - 1, L);
  for (int d = 0; d < 2 * n - 1; ++d) {
    const double dx = (d - (n - 1)) * h;
    for (int l = 0; l < L; ++l) phase(d, l) = unit_phase(dx * f.p_node(l) / hbar);
  }
  const double weight = f.p_step() / (kTwoPi * hbar);
  CMatrix K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      K(i, j) = weight * f.values.row(i + j).cwiseProduct(phase.row(i - j + n - 1)).sum();
    }
  }
  return K;
}

LineFunction apply_line_kernel(const CMatrix& kernel, const LineFunction& psi) {
  if (kernel.rows() != psi.grid.size() || kernel.cols() != psi.grid.size()) {
    throw std::invalid_argument("apply_line_kernel: kernel does not match grid");
  }
  LineFunction out = psi;
  out.values = psi.grid.step() * (kernel * psi.values);
  return out;
}

LineFunction grossmann_royer_apply(double q0, double p0, const LineFunction& psi, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("grossmann_royer_apply: hbar must be positive");
  const double h = psi.grid.step();
  const double ratio = 2.0 * q0 / h;
  if (std::abs(ratio - std::nearbyint(ratio)) > 1e-9) {
    throw std::invalid_argument("grossmann_royer_apply: reflection point is off the grid");
  }
  const long shift = static_cast<long>(std::nearbyint(ratio));
  const long n = psi.grid.size();
  const long offset = static_cast<long>(std::nearbyint(2.0 * psi.grid.half_width() / h));
  LineFunction out = psi;
  const double scale = 1.0 / (kPi * hbar);
  for (long j = 0; j < n; ++j) {
    // 2 q0 - x_j = -L + (shift + 2L/h - j) h
    const long r = shift + offset - j;
    const cplx reflected = (r >= 0 && r < n) ? psi.values(r) : cplx{};
    const double x = psi.grid.node(static_cast<int>(j));
    out.values(j) = scale * unit_phase(2.0 * p0 * (x - q0) / hbar) * reflected;
  }
  return out;
}

double translation_residual(const CMatrix& kernel, const LineGrid& grid, double a) {
  if (kernel.rows() != grid.size() || kernel.cols() != grid.size()) {
    throw std::invalid_argument("is_decomposable: kernel does not match grid");
  }
  const long s = integer_ratio(a, grid.step());
  if (s <= 0) throw std::invalid_argument("is_decomposable: a is not a multiple of the grid step");
  const long n = grid.size();
  if (s >= n) throw std::invalid_argument("is_decomposable: grid shorter than one period");
  double worst = 0.0;
  for (long i = 0; i + s < n; ++i) {
    for (long j = 0; j + s < n; ++j) worst = std::max(worst, std::abs(kernel(i + s, j + s) - kernel(i, j)));
  }
  return worst;
}

bool is_decomposable(const CMatrix& kernel, const LineGrid& grid, double a, double tol) {
  return translation_residual(kernel, grid, a) < tol;
}

CMatrix fiber_kernel(const CMatrix& kernel, const LineGrid& line, const FiberParams& fp, const CircleGrid& grid) {
  const double h = line.step();
  const long stride = integer_ratio(grid.step(), h);
  const long per_cell = integer_ratio(fp.a, h);
  const long offset = integer_ratio(line.half_width(), h);
  if (stride <= 0 || per_cell <= 0 || offset < 0) {
    throw std::invalid_argument("fiber_kernel: circle grid is not aligned with the line grid");
  }
  const long n_line = line.size();
  const int M = grid.size();
  CMatrix out = CMatrix::Zero(M, M);
  for (int j = 0; j < M; ++j) {
    const long col = j * stride + offset;
    if (col >= n_line) throw std::invalid_argument("fiber_kernel: line grid does not cover [0, a)");
    for (int i = 0; i < M; ++i) {
      cplx sum{};
      for (long t = -(offset / per_cell) - 1; t <= (offset / per_cell) + 1; ++t) {
        const long row = i * stride - t * per_cell + offset;
        if (row < 0 || row >= n_line) continue;
        sum += unit_phase(t * fp.a * fp.k) * kernel(row, col);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace cylq
