#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "cylq/coherent.hpp"
#include "cylq/cylinder.hpp"
#include "cylq/wbz.hpp"

using namespace cylq;

namespace {

constexpr double kA = kTwoPi;

// Line grid with h = a / per_cell covering [-cells a, cells a).
LineGrid aligned_line(int per_cell, int cells) { return LineGrid(cells * kA, kA / per_cell); }

LineFunction gaussian(const LineGrid& grid, double centre, double width) {
  return LineFunction::sample(grid, [&](double x) {
    const double d = (x - centre) / width;
    return cplx{std::exp(-0.5 * d * d), 0.0};
  }, centre + 10.0 * width);
}

}  // namespace

TEST(FiberParams, ValidatesRanges) {
  EXPECT_THROW(FiberParams(0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(FiberParams(kA, -0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(FiberParams(kA, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(FiberParams(kA, 0.5, 0.0), std::invalid_argument);
  const FiberParams fp(2.0, 0.5, 0.3);
  EXPECT_DOUBLE_EQ(fp.lattice_momentum(3), (kPi * 3 / 2.0 + 0.5) * 0.3);
  EXPECT_DOUBLE_EQ(fp.basis_momentum(2), fp.lattice_momentum(4));
}

TEST(WbzTransform, SingleCellSupportIsUnchanged) {
  const LineGrid line = aligned_line(64, 3);
  const LineFunction psi = gaussian(line, kA / 2.0, 0.3);
  const CircleGrid grid(kA, 64);
  for (double k : {0.0, 0.25, 0.9}) {
    const CVector fiber = wbz_transform(psi, FiberParams(kA, k, 1.0), grid);
    for (int j = 0; j < grid.size(); ++j) {
      const double d = (grid.node(j) - kA / 2.0) / 0.3;
      EXPECT_LT(std::abs(fiber(j) - std::exp(-0.5 * d * d)), 1e-14);
    }
  }
}

TEST(WbzTransform, GaussianMatchesThetaClosedForm) {
  const LineGrid line = aligned_line(64, 5);
  const CircleGrid grid(kA, 64);
  for (double k : {0.0, 0.4}) {
    for (double omega : {0.3, 1.0}) {
      const FiberParams fp(kA, k, 1.0);
      const CoherentStateParams csp(0.0, 0.0, omega, fp);
      const LineFunction eta =
          LineFunction::sample(line, [&](double x) { return weyl_heisenberg_state(csp, x); }, 4.0 * kA);
      const CVector fiber = wbz_transform(eta, fp, grid);
      const CVector closed = cs_wavefunction_theta(csp, grid);
      EXPECT_LT((fiber - closed).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k << " omega=" << omega;
    }
  }
}

TEST(WbzTransform, PeriodicInQuasiMomentum) {
  const LineGrid line = aligned_line(32, 4);
  const LineFunction psi = gaussian(line, 0.7, 1.6);
  const CircleGrid grid(kA, 32);
  const FiberParams fp(kA, 0.35, 1.0);
  FiberParams shifted = fp;  // k + 2 pi / a lies outside the validated range on purpose
  shifted.k = fp.k + kTwoPi / kA;
  const CVector base = wbz_transform(psi, fp, grid);
  const CVector other = wbz_transform(psi, shifted, grid);
  EXPECT_LT((base - other).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WbzTransform, QuasiPeriodicInPosition) {
  // (T psi)(q + a) = e^{iak} (T psi)(q), with the shifted profile psi(x + a).
  const LineGrid line = aligned_line(32, 4);
  const CircleGrid grid(kA, 32);
  const FiberParams fp(kA, 0.6, 1.0);
  auto profile = [](double x) { return cplx{std::exp(-0.3 * (x - 0.4) * (x - 0.4)), 0.2 * x}; };
  const LineFunction psi = LineFunction::sample(line, [&](double x) { return profile(x) * std::exp(-0.1 * x * x); }, 20.0);
  const LineFunction psi_shift = LineFunction::sample(
      line, [&](double x) { return profile(x + kA) * std::exp(-0.1 * (x + kA) * (x + kA)); }, 20.0);
  const CVector base = wbz_transform(psi, fp, grid);
  const CVector moved = wbz_transform(psi_shift, fp, grid);
  EXPECT_LT((moved - unit_phase(kA * fp.k) * base).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WbzTransform, RejectsMismatchedLength) {
  const LineGrid line = aligned_line(16, 2);
  const LineFunction psi = gaussian(line, 0.0, 1.0);
  EXPECT_THROW(wbz_transform(psi, FiberParams(kA, 0.0, 1.0), CircleGrid(3.0, 16)), std::invalid_argument);
}

TEST(FiberCoefficients, GaussianPeaksAtZeroMode) {
  const LineGrid line = aligned_line(32, 4);
  const LineFunction psi = gaussian(line, 0.0, 1.0);
  const ModeSpectrum alpha = fiber_coefficients(psi, FiberParams(kA, 0.0, 1.0), 6);
  EXPECT_LT(std::abs(alpha.at(0).imag()), 1e-15);
  for (int n = -6; n <= 6; ++n) {
    if (n != 0) EXPECT_LT(std::abs(alpha.at(n)), std::abs(alpha.at(0)));
  }
  // psi~(u) = sqrt(2 pi) e^{-u^2/2} for the unit Gaussian.
  EXPECT_NEAR(alpha.at(0).real(), std::sqrt(kTwoPi) / kA, 1e-14);
  EXPECT_NEAR(std::abs(alpha.at(2)), std::sqrt(kTwoPi) * std::exp(-2.0) / kA, 1e-14);
}

TEST(FiberCoefficients, OffLatticeDifferenceIsInvisible) {
  // chi(x) = g(x) - e^{iak} g(x - a) has a transform vanishing on the lattice.
  const LineGrid line = aligned_line(32, 5);
  const FiberParams fp(kA, 0.45, 1.0);
  auto g = [](double x) { return cplx{std::exp(-0.5 * x * x), 0.3 * std::exp(-x * x)}; };
  const LineFunction psi = LineFunction::sample(line, [](double x) { return cplx{std::exp(-0.2 * x * x), 0.0}; }, 20.0);
  const LineFunction other = LineFunction::sample(line, [&](double x) {
    return cplx{std::exp(-0.2 * x * x), 0.0} + g(x) - unit_phase(kA * fp.k) * g(x - kA);
  }, 20.0);
  const ModeSpectrum a1 = fiber_coefficients(psi, fp, 8);
  const ModeSpectrum a2 = fiber_coefficients(other, fp, 8);
  EXPECT_LT((a1.coeffs - a2.coeffs).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_GT(std::sqrt((other.values - psi.values).squaredNorm()), 1.0);
}

TEST(FiberCoefficients, AgreeWithCircleDft) {
  const LineGrid line = aligned_line(32, 5);
  const CircleGrid grid(kA, 32);
  for (double k : {0.0, 0.7}) {
    const FiberParams fp(kA, k, 1.0);
    const LineFunction psi = LineFunction::sample(line, [](double x) {
      return cplx{std::exp(-0.4 * (x - 1.0) * (x - 1.0)), std::exp(-0.6 * (x + 0.5) * (x + 0.5))};
    }, 15.0);
    const CVector fiber = wbz_transform(psi, fp, grid);
    std::vector<cplx> u(grid.size());
    for (int j = 0; j < grid.size(); ++j) u[j] = unit_phase(-k * grid.node(j)) * fiber(j);
    const ModeSpectrum modes = dft_circle(grid, u);
    const ModeSpectrum alpha = fiber_coefficients(psi, fp, 10);
    for (int n = -10; n <= 10; ++n) EXPECT_LT(std::abs(alpha.at(n) - modes.at(n)), 1e-10) << "n=" << n;
  }
}

TEST(FiberCoefficients, DirectIntegralRecoversNorm) {
  const LineGrid line = aligned_line(32, 5);
  const LineFunction psi = LineFunction::sample(line, [](double x) {
    return cplx{std::exp(-0.5 * (x - 0.3) * (x - 0.3)), 0.5 * x * std::exp(-0.5 * x * x)};
  }, 15.0);
  const int K = 16;
  double total = 0.0;
  for (int i = 0; i < K; ++i) {
    const FiberParams fp(kA, (kTwoPi / kA) * i / K, 1.0);
    const ModeSpectrum alpha = fiber_coefficients(psi, fp, 14);
    total += alpha.coeffs.squaredNorm() * kA;
  }
  const double average = total / K;  // (a/2pi) int dk over [0, 2pi/a)
  EXPECT_NEAR(average, psi.l2_norm_squared(), 1e-8);
}

TEST(FiberCoefficients, RejectsBandBeyondNyquist) {
  const LineGrid line = aligned_line(8, 2);
  const LineFunction psi = gaussian(line, 0.0, 1.0);
  EXPECT_THROW(fiber_coefficients(psi, FiberParams(kA, 0.0, 1.0), 4), std::invalid_argument);
  EXPECT_NO_THROW(fiber_coefficients(psi, FiberParams(kA, 0.0, 1.0), 3));
}

TEST(LineWeylKernel, UnitSymbolIsIdentityAtNyquist) {
  const LineGrid line(4.0, 0.125);  // 64 points
  const double hbar = 0.7;
  const double p_max = kPi * hbar / line.step();
  const DeskSamples f = sample_desk([](double, double) { return cplx{1.0, 0.0}; }, line, p_max, line.size());
  const CMatrix K = line_weyl_kernel(f, hbar);
  const LineFunction psi = LineFunction::sample(line, [](double x) { return cplx{std::exp(-x * x), std::sin(x)}; }, 4.0);
  const LineFunction out = apply_line_kernel(K, psi);
  EXPECT_LT((out.values - psi.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LineWeylKernel, PositionSymbolMultipliesByX) {
  const LineGrid line(4.0, 0.125);
  const double p_max = kPi / line.step();
  const DeskSamples f = sample_desk([](double q, double) { return cplx{q, 0.0}; }, line, p_max, line.size());
  const CMatrix K = line_weyl_kernel(f, 1.0);
  const LineFunction psi = LineFunction::sample(line, [](double x) { return cplx{std::exp(-x * x), 0.0}; }, 4.0);
  const LineFunction out = apply_line_kernel(K, psi);
  for (int j = 0; j < line.size(); ++j) EXPECT_LT(std::abs(out.values(j) - line.node(j) * psi.values(j)), 1e-12);
}

TEST(LineWeylKernel, RealSymbolGivesHermitianKernel) {
  const LineGrid line(3.0, 0.25);
  const DeskSamples f = sample_desk([](double q, double p) { return cplx{std::cos(q) * std::exp(-p * p) + q * p, 0.0}; },
                                    line, 6.0, 97);
  const CMatrix K = line_weyl_kernel(f, 1.0);
  for (int i = 0; i < line.size(); ++i) {
    for (int j = 0; j < line.size(); ++j) EXPECT_EQ(K(i, j), std::conj(K(j, i)));
  }
}

TEST(LineWeylKernel, RejectsNonFiniteSamples) {
  const LineGrid line(1.0, 0.25);
  DeskSamples f = sample_desk([](double, double) { return cplx{1.0, 0.0}; }, line, 2.0, 8);
  f.values(3, 2) = cplx{std::nan(""), 0.0};
  EXPECT_THROW(line_weyl_kernel(f, 1.0), std::invalid_argument);
  EXPECT_THROW(sample_desk([](double, double) { return cplx{}; }, LineGrid(40.0, 0.125), 1.0, 4), std::invalid_argument);
}

TEST(GrossmannRoyer, OriginIsScaledParity) {
  const LineGrid line(4.0, 0.125);
  const double hbar = 0.5;
  const LineFunction psi = LineFunction::sample(line, [](double x) { return cplx{std::exp(-(x - 0.5) * (x - 0.5)), x}; }, 4.0);
  const LineFunction once = grossmann_royer_apply(0.0, 0.0, psi, hbar);
  const LineFunction twice = grossmann_royer_apply(0.0, 0.0, once, hbar);
  const double s = 1.0 / (kPi * hbar);
  // Node 0 (x = -L) reflects outside the grid; skip it.
  for (int j = 1; j < line.size(); ++j) {
    const double x = line.node(j);
    EXPECT_LT(std::abs(once.values(j) - s * psi.at_node(-x)), 1e-15);
    EXPECT_LT(std::abs(twice.values(j) - s * s * psi.values(j)), 1e-14);
  }
}

TEST(GrossmannRoyer, EvenFunctionIsEigenvector) {
  const LineGrid line(4.0, 0.125);
  const LineFunction psi = LineFunction::sample(line, [](double x) { return cplx{std::exp(-x * x) * std::cos(x), 0.0}; }, 4.0);
  const LineFunction out = grossmann_royer_apply(0.0, 0.0, psi, 1.0);
  for (int j = 1; j < line.size(); ++j) EXPECT_LT(std::abs(out.values(j) - psi.values(j) / kPi), 1e-15);
}

TEST(GrossmannRoyer, GeneralPointAndOffGridReflection) {
  const LineGrid line(4.0, 0.125);
  const double q0 = 0.25, p0 = 0.8, hbar = 1.3;
  const LineFunction psi = LineFunction::sample(line, [](double x) { return cplx{std::exp(-x * x), 0.0}; }, 4.0);
  const LineFunction out = grossmann_royer_apply(q0, p0, psi, hbar);
  for (int j = 0; j < line.size(); ++j) {
    const double x = line.node(j);
    const cplx expected = unit_phase(2.0 * p0 * (x - q0) / hbar) * psi.at_node(2.0 * q0 - x) / (kPi * hbar);
    EXPECT_LT(std::abs(out.values(j) - expected), 1e-15);
  }
  EXPECT_THROW(grossmann_royer_apply(0.03, 0.0, psi, 1.0), std::invalid_argument);
}

TEST(Decomposability, PeriodicSymbolIdentityAndPosition) {
  const LineGrid line(2.0 * kA, kA / 16);
  const DeskSamples periodic =
      sample_desk([](double q, double p) { return cplx{std::cos(q) * std::exp(-p * p), 0.0}; }, line, 6.0, 64);
  EXPECT_TRUE(is_decomposable(line_weyl_kernel(periodic, 1.0), line, kA, 1e-12));

  const CMatrix identity = CMatrix::Identity(line.size(), line.size());
  EXPECT_TRUE(is_decomposable(identity, line, kA, 1e-15));

  const DeskSamples position = sample_desk([](double q, double) { return cplx{q, 0.0}; }, line, kPi / line.step(), line.size());
  EXPECT_FALSE(is_decomposable(line_weyl_kernel(position, 1.0), line, kA, 1e-6));

  EXPECT_THROW(is_decomposable(identity, line, 1.0, 1e-12), std::invalid_argument);
}

TEST(FiberKernel, LineOperatorFibersMatchCircleQuantization) {
  // f(q,p) = cos(2 pi q / a) e^{-p^2/2} + 0.3 sin(4 pi q / a) p e^{-p^2/2}
  auto modes = [](int m, double p) {
    const double g = std::exp(-0.5 * p * p);
    switch (m) {
      case 1:
      case -1: return cplx{0.5 * g, 0.0};
      case 2: return cplx{0.0, -0.15 * p * g};
      case -2: return cplx{0.0, 0.15 * p * g};
      default: return cplx{};
    }
  };
  auto f = [&](double q, double p) {
    cplx v{};
    for (int m = -2; m <= 2; ++m) v += modes(m, p) * unit_phase(kTwoPi * m * q / kA);
    return v;
  };
  const LineGrid line(4.0 * kA, kA / 32);  // 256 points
  const CMatrix K = line_weyl_kernel(sample_desk(f, line, 8.0, 320), 1.0);
  ASSERT_TRUE(is_decomposable(K, line, kA, 1e-12));
  const CircleGrid grid(kA, 32);
  const int N = 8;
  for (double k : {0.0, 0.3}) {
    const FiberParams fp(kA, k, 1.0);
    const CircleOperator fibered = kernel_matrix_elements(fiber_kernel(K, line, fp, grid), grid, fp, N);
    const CircleOperator direct = weyl_quantize(CylinderFunction::sample(fp, 2, 2 * N, modes), N);
    EXPECT_LT(max_abs(fibered.matrix() - direct.matrix()), 1e-8) << "k=" << k;
  }
}
