#pragma once

#include <cmath>

#include "lmcf/error.hpp"
#include "lmcf/grid.hpp"

namespace lmcf {

// Gaussian score m over cyclic shifts (peak 1 at shift (0,0)) and the root
// margin field upsilon = sqrt(1 - m), the square root of the margin-scaling
// loss m(y00) - m(y).
struct LabelField {
  RealGrid m;
  RealGrid upsilon;
  double sigma = 0.0;  // in cells

  int width() const noexcept { return m.width(); }
  int height() const noexcept { return m.height(); }
};

inline constexpr double kDefaultLabelSigmaFactor = 0.1;

inline LabelField build_labels(int width, int height, double target_cells_w,
                               double target_cells_h,
                               double sigma_factor = kDefaultLabelSigmaFactor) {
  detail::require(width >= 1 && height >= 1, "build_labels: grid dimensions must be positive");
  detail::require(target_cells_w >= 1 && target_cells_h >= 1,
                  "build_labels: target must span at least one cell");
  detail::require(sigma_factor > 0 && std::isfinite(sigma_factor),
                  "build_labels: sigma factor must be positive");
  LabelField f{RealGrid(width, height), RealGrid(width, height),
               sigma_factor * std::sqrt(target_cells_w * target_cells_h)};
  const double inv = 1.0 / (2.0 * f.sigma * f.sigma);
  for (int y = 0; y < height; ++y) {
    const double dy = wrapped_displacement(y, height);
    for (int x = 0; x < width; ++x) {
      const double dx = wrapped_displacement(x, width);
      const double m = std::exp(-(dx * dx + dy * dy) * inv);
      f.m(x, y) = m;
      f.upsilon(x, y) = std::sqrt(1.0 - m);
    }
  }
  return f;
}

}  // namespace lmcf
