#pragma once

#include <cmath>

#include "lmcf/error.hpp"
#include "lmcf/features.hpp"
#include "lmcf/geometry.hpp"

namespace lmcf {

// Fixed sampling layout of one tracked target: how large a frame region the
// translation filter sees at unit scale and the canonical template it is
// resampled to. The feature grid is template / cell_size and never changes
// across scales.
struct SampleGeometry {
  Size window_px;          // frame pixels covered at scale 1
  int cells_x = 0;
  int cells_y = 0;
  int cell_size = 4;

  int template_w() const noexcept { return cells_x * cell_size; }
  int template_h() const noexcept { return cells_y * cell_size; }

  // Frame pixels per template pixel at unit scale.
  double resample_x() const noexcept { return window_px.width / template_w(); }
  double resample_y() const noexcept { return window_px.height / template_h(); }

  static SampleGeometry for_target(Size base_size, double padding, int cell_size,
                                   int max_cells = 64 * 64) {
    detail::require(base_size.width > 0 && base_size.height > 0,
                    "sample geometry: target size must be positive");
    detail::require(padding >= 0, "sample geometry: padding must be >= 0");
    detail::require(cell_size > 0, "sample geometry: cell size must be positive");
    detail::require(max_cells >= 16, "sample geometry: cell budget too small");
    const double w = base_size.width * (1.0 + padding);
    const double h = base_size.height * (1.0 + padding);
    const double cells = (w / cell_size) * (h / cell_size);
    // Large targets are downscaled so the grid stays within the cell budget.
    const double shrink = cells > max_cells ? std::sqrt(max_cells / cells) : 1.0;
    SampleGeometry g;
    g.cell_size = cell_size;
    g.cells_x = std::max(4, static_cast<int>(std::floor(w * shrink / cell_size + 0.5)));
    g.cells_y = std::max(4, static_cast<int>(std::floor(h * shrink / cell_size + 0.5)));
    while (g.cells_x * g.cells_y > max_cells) {
      if (g.cells_x >= g.cells_y) --g.cells_x; else --g.cells_y;
    }
    g.window_px = {g.template_w() / shrink, g.template_h() / shrink};
    return g;
  }

  Size source_size(double scale) const noexcept {
    return {window_px.width * scale, window_px.height * scale};
  }

  // Frame displacement of a cyclic feature shift (already unwrapped).
  Point displacement(int dx_cells, int dy_cells, double scale) const noexcept {
    return {dx_cells * cell_size * resample_x() * scale,
            dy_cells * cell_size * resample_y() * scale};
  }

  ImagePatch crop(const Image& frame, Point center, double scale) const {
    return crop_region(frame, center, source_size(scale), template_w(), template_h());
  }

  FeatureMap sample(const Image& frame, Point center, double scale) const {
    return apply_window(extract_features(crop(frame, center, scale), cell_size));
  }
};

}  // namespace lmcf
