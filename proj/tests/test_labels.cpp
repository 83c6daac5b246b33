#include <gtest/gtest.h>

#include "lmcf/labels.hpp"

namespace lmcf {
namespace {

TEST(Labels, PeakAtOrigin) {
  for (auto [w, h] : {std::pair{1, 1}, {5, 3}, {20, 16}}) {
    const LabelField f = build_labels(w, h, 3, 4);
    EXPECT_EQ(f.m(0, 0), 1.0);
    EXPECT_EQ(f.upsilon(0, 0), 0.0);
    for (double v : f.m.values()) EXPECT_LE(v, 1.0);
  }
}

TEST(Labels, ValueAtOneSigma) {
  // sigma = 0.1 * sqrt(10 * 10) = 1 cell; shift (1, 0) sits at distance sigma.
  const LabelField f = build_labels(16, 16, 10, 10);
  EXPECT_DOUBLE_EQ(f.sigma, 1.0);
  EXPECT_NEAR(f.m(1, 0), 0.6065, 1e-4);
  EXPECT_NEAR(f.upsilon(1, 0), 0.6273, 1e-4);
  EXPECT_NEAR(f.m(15, 0), 0.6065, 1e-4);  // wrapped
}

TEST(Labels, TwoElementGrid) {
  const LabelField f = build_labels(2, 1, 10, 10, 0.2);  // sigma = 2
  EXPECT_EQ(f.m(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.m(1, 0), std::exp(-1.0 / 8.0));
}

TEST(Labels, WrappedReflectionSymmetry) {
  const LabelField f = build_labels(9, 6, 12, 7);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 9; ++x) EXPECT_EQ(f.m(x, y), f.m((9 - x) % 9, (6 - y) % 6));
}

TEST(Labels, MonotoneInWrappedDistance) {
  const LabelField f = build_labels(12, 10, 20, 20);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 12; ++x)
      for (int y2 = 0; y2 < 10; ++y2)
        for (int x2 = 0; x2 < 12; ++x2) {
          const double d1 = std::hypot(wrapped_displacement(x, 12), wrapped_displacement(y, 10));
          const double d2 = std::hypot(wrapped_displacement(x2, 12), wrapped_displacement(y2, 10));
          if (d1 < d2) EXPECT_GE(f.m(x, y), f.m(x2, y2));
        }
}

TEST(Labels, UpsilonSquaredPlusScoreIsOne) {
  const LabelField f = build_labels(11, 7, 5, 9);
  for (int i = 0; i < 77; ++i) {
    const double u = f.upsilon.values()[i];
    EXPECT_GE(u, 0.0);
    EXPECT_NEAR(u * u + f.m.values()[i], 1.0, 1e-12);
  }
}

TEST(Labels, RejectsBadInput) {
  EXPECT_THROW(build_labels(0, 4, 2, 2), InvalidInput);
  EXPECT_THROW(build_labels(4, 4, 0.5, 2), InvalidInput);
  EXPECT_THROW(build_labels(4, 4, 2, 2, 0.0), InvalidInput);
}

}  // namespace
}  // namespace lmcf
