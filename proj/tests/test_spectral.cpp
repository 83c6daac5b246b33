#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "lmcf/spectral.hpp"
#include "lmcf/testing/dense_oracle.hpp"
#include "support.hpp"

namespace lmcf {
namespace {

TEST(Spectral, ConstantMapHasOnlyDc) {
  const SpectralMap s = dft2(RealGrid(4, 4, 1, 2.5));
  EXPECT_DOUBLE_EQ(s(0, 0).real(), 16 * 2.5);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      if (x || y) EXPECT_NEAR(std::abs(s(x, y)), 0.0, 1e-12);
}

TEST(Spectral, ImpulseHasFlatSpectrum) {
  RealGrid g(4, 4);
  g(0, 0) = 1.0;
  const SpectralMap s = dft2(g);
  for (const auto& v : s.values()) EXPECT_NEAR(std::abs(v - std::complex<double>(1.0)), 0.0, 1e-12);
}

TEST(Spectral, AllOnesSpectrumInvertsToImpulse) {
  const RealGrid g = idft2(SpectralMap(4, 4, 1, 1.0));
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) EXPECT_NEAR(g(x, y), (x == 0 && y == 0) ? 1.0 : 0.0, 1e-12);
}

TEST(Spectral, DcOnlySpectrumInvertsToConstant) {
  SpectralMap s(4, 4);
  s(0, 0) = 16.0;
  const RealGrid g = idft2(s);
  for (double v : g.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Spectral, RoundTripIsIdentity) {
  std::mt19937_64 rng(7);
  const int shapes[][3] = {{8, 8, 1}, {5, 7, 3}, {1, 9, 2}, {64, 64, 31}};
  for (const auto& s : shapes) {
    const RealGrid x = test::random_grid(rng, s[0], s[1], s[2]);
    EXPECT_LT(test::max_abs_diff(idft2(dft2(x)), x), 1e-10);
    // Other direction: spectrum -> real map -> spectrum.
    const SpectralMap X = dft2(x);
    EXPECT_LT(test::max_abs_diff(dft2(idft2(X)), X), 1e-10 * s[0] * s[1]);
  }
}

TEST(Spectral, RealInputIsConjugateSymmetric) {
  std::mt19937_64 rng(3);
  const RealGrid x = test::random_grid(rng, 6, 5, 2);
  const SpectralMap X = dft2(x);
  for (int c = 0; c < 2; ++c)
    for (int h = 0; h < 5; ++h)
      for (int w = 0; w < 6; ++w)
        EXPECT_NEAR(std::abs(X(w, h, c) - std::conj(X((6 - w) % 6, (5 - h) % 5, c))), 0.0, 1e-10);
}

TEST(Spectral, NonFiniteInputRejected) {
  RealGrid g(3, 3);
  g(1, 1) = std::nan("");
  EXPECT_THROW(dft2(g), InvalidInput);
  g(1, 1) = INFINITY;
  EXPECT_THROW(dft2(g), InvalidInput);
}

TEST(Spectral, NonSymmetricSpectrumFailsRealInverse) {
  SpectralMap s(4, 4);
  s(1, 0) = {0.0, 4.0};
  EXPECT_THROW(idft2(s), NumericalError);
}

TEST(Spectral, ParsevalEnergy) {
  std::mt19937_64 rng(11);
  const RealGrid x = test::random_grid(rng, 7, 6, 3);
  double direct = 0.0;
  for (double v : x.values()) direct += v * v;
  EXPECT_NEAR(spectral_energy(dft2(x)), direct, 1e-9);
}

TEST(LinearKernelCorr, ImpulseAutocorrelationIsFlat) {
  RealGrid d(5, 4);
  d(0, 0) = 1.0;
  const SpectralMap D = dft2(d);
  const auto corr = linear_kernel_corr(D, D);
  for (const auto& v : corr.values())
    EXPECT_NEAR(std::abs(v - std::complex<double>(1.0)), 0.0, 1e-12);
}

TEST(LinearKernelCorr, ZeroShiftIsSquaredNorm) {
  std::mt19937_64 rng(5);
  const RealGrid a = test::random_grid(rng, 6, 6, 3);
  const SpectralMap A = dft2(a);
  const RealGrid g = idft2(linear_kernel_corr(A, A));
  EXPECT_NEAR(g(0, 0), oracle::inner(a, a), 1e-8);
}

TEST(LinearKernelCorr, ShiftedCopyPeaksAtShift) {
  std::mt19937_64 rng(9);
  const RealGrid a = test::random_grid(rng, 6, 6, 2);
  const RealGrid b = oracle::shifted(a, -2, -1);  // b[n] = a[n - (2,1)]
  const RealGrid g = idft2(linear_kernel_corr(dft2(a), dft2(b)));
  int best = 0;
  for (int i = 1; i < 36; ++i)
    if (g.values()[i] > g.values()[best]) best = i;
  EXPECT_EQ(best % 6, 2);
  EXPECT_EQ(best / 6, 1);
}

TEST(LinearKernelCorr, MatchesBruteForceInnerProducts) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 1 + rng() % 8, h = 1 + rng() % 8, d = 1 + rng() % 3;
    const RealGrid a = test::random_grid(rng, w, h, d);
    const RealGrid b = test::random_grid(rng, w, h, d);
    const RealGrid fast = idft2(linear_kernel_corr(dft2(a), dft2(b)));
    EXPECT_LT(test::max_abs_diff(fast, oracle::cross_correlation(a, b)), 1e-8);
  }
}

TEST(LinearKernelCorr, ShapeMismatchRejected) {
  EXPECT_THROW(linear_kernel_corr(SpectralMap(4, 4, 2), SpectralMap(4, 4, 1)), InvalidInput);
  EXPECT_THROW(linear_kernel_corr(SpectralMap(4, 4), SpectralMap(4, 5)), InvalidInput);
}

TEST(GaussianKernelCorr, SelfCorrelationIsOneAtZeroShift) {
  std::mt19937_64 rng(17);
  const SpectralMap A = dft2(test::random_grid(rng, 5, 4, 2));
  const RealGrid k = idft2(gaussian_kernel_corr(A, A, 0.5));
  EXPECT_NEAR(k(0, 0), 1.0, 1e-12);
  for (double v : k.values()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(GaussianKernelCorr, OrthogonalEqualNormPairHandValue) {
  // a and b supported on disjoint cells of a 4x1 grid: cross-correlation is
  // zero at every shift that does not line the impulses up.
  RealGrid a(4, 1), b(4, 1);
  a(0, 0) = 2.0;
  b(2, 0) = 2.0;
  const double sigma = 0.7;
  const RealGrid k = idft2(gaussian_kernel_corr(dft2(a), dft2(b), sigma));
  const double expected = std::exp(-2.0 * 4.0 / (sigma * sigma * 4 * 1 * 1));
  for (int s = 0; s < 4; ++s) {
    if (s == 2) continue;  // b shifted by 2 lines up with a
    EXPECT_NEAR(k(s, 0), expected, 1e-12);
  }
  EXPECT_NEAR(k(2, 0), 1.0, 1e-12);
}

TEST(GaussianKernelCorr, MatchesBruteForceKernelVector) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const RealGrid a = test::random_grid(rng, 4, 4, 1 + trial % 3);
    const RealGrid b = test::random_grid(rng, 4, 4, 1 + trial % 3);
    const double sigma = 0.5;
    const RealGrid fast = idft2(gaussian_kernel_corr(dft2(a), dft2(b), sigma));
    for (int s = 0; s < 16; ++s)
      EXPECT_NEAR(fast.values()[s],
                  oracle::kernel_value(ModelMode::kernel_gaussian, a, oracle::shift_by_index(b, s), sigma),
                  1e-8);
  }
}

TEST(GaussianKernelCorr, KernelMatrixIsSymmetricPsd) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const RealGrid x = test::random_grid(rng, 4, 3, 2);
    const SpectralMap X = dft2(x);
    const RealGrid k = idft2(gaussian_kernel_corr(X, X, 0.5));
    // K_ij = k[j - i] for the circulant sample set.
    const int n = 12;
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int dx = wrap_index(j % 4 - i % 4, 4), dy = wrap_index(j / 4 - i / 4, 3);
        K(i, j) = k(dx, dy);
      }
    EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(GaussianKernelCorr, RejectsBadSigma) {
  EXPECT_THROW(gaussian_kernel_corr(SpectralMap(4, 4), SpectralMap(4, 4), 0.0), InvalidInput);
  EXPECT_THROW(gaussian_kernel_corr(SpectralMap(4, 4), SpectralMap(4, 4), -1.0), InvalidInput);
}

}  // namespace
}  // namespace lmcf
