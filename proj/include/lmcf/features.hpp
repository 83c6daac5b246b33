#pragma once

// Patch sampling and the windowed multi-channel feature map used as the joint
// feature map of the unshifted sample. Channel layout:
//   [0, 31)   FHOG
//   [31, 41)  color-name probabilities, averaged per cell
//   41        cell-averaged grayscale, (intensity / 255) - 0.5

#include <cmath>
#include <numbers>
#include <vector>

#include "lmcf/color_names.hpp"
#include "lmcf/error.hpp"
#include "lmcf/geometry.hpp"
#include "lmcf/grid.hpp"
#include "lmcf/hog.hpp"
#include "lmcf/image.hpp"

namespace lmcf {

struct ChannelLayout {
  int hog = hog::kChannels;
  int color_names = color_names::kNumNames;
  int gray = 1;

  int hog_offset() const noexcept { return 0; }
  int color_names_offset() const noexcept { return hog; }
  int gray_offset() const noexcept { return hog + color_names; }
  int total() const noexcept { return hog + color_names + gray; }

  friend bool operator==(const ChannelLayout&, const ChannelLayout&) = default;
};

struct FeatureMap {
  RealGrid values;
  int cell_size = 1;
  ChannelLayout layout;

  int width() const noexcept { return values.width(); }
  int height() const noexcept { return values.height(); }
  int channels() const noexcept { return values.channels(); }
};

struct ImagePatch {
  Image pixels;
  Rect source_rect;  // frame coordinates, may extend past the frame
};

// Resample the source_size region centered at `center` to out_w x out_h.
inline ImagePatch crop_region(const Image& frame, Point center, Size source_size, int out_w,
                              int out_h) {
  detail::require(!frame.empty(), "crop: empty frame");
  detail::require(source_size.width > 0 && source_size.height > 0,
                  "crop: source size must be positive");
  const Rect source = Rect::around(center, source_size);
  return {resample_region(frame, source, out_w, out_h), source};
}

// Padded sample of a base_size target: covers base_size * (1 + padding) * scale
// in the frame and is resampled to the canonical base_size * (1 + padding).
inline ImagePatch crop_patch(const Image& frame, Point center, Size base_size, double scale,
                             double padding) {
  detail::require(base_size.width > 0 && base_size.height > 0,
                  "crop_patch: base size must be positive");
  detail::require(scale > 0 && std::isfinite(scale), "crop_patch: scale must be positive");
  detail::require(padding >= 0 && std::isfinite(padding), "crop_patch: padding must be >= 0");
  const double w = base_size.width * (1.0 + padding);
  const double h = base_size.height * (1.0 + padding);
  const int out_w = std::max(1, static_cast<int>(std::lround(w)));
  const int out_h = std::max(1, static_cast<int>(std::lround(h)));
  return crop_region(frame, center, {w * scale, h * scale}, out_w, out_h);
}

inline FeatureMap extract_features(const ImagePatch& patch, int cell_size) {
  detail::require(cell_size > 0, "extract_features: cell size must be positive");
  const Image& img = patch.pixels;
  const int nx = img.width() / cell_size;
  const int ny = img.height() / cell_size;
  if (nx < 4 || ny < 4)
    throw InvalidInput("extract_features: patch must yield at least a 4x4 cell grid");

  ChannelLayout layout;
  FeatureMap out{RealGrid(nx, ny, layout.total()), cell_size, layout};

  const RealGrid h = hog::fhog(img, cell_size);
  for (int c = 0; c < layout.hog; ++c) {
    auto src = h.channel(c);
    auto dst = out.values.channel(layout.hog_offset() + c);
    std::copy(src.begin(), src.end(), dst.begin());
  }

  const double inv_area = 1.0 / (cell_size * cell_size);
  const bool color = img.channels() == 3;
  for (int cy = 0; cy < ny; ++cy) {
    for (int cx = 0; cx < nx; ++cx) {
      color_names::Probabilities cn{};
      double gray = 0.0;
      for (int y = cy * cell_size; y < (cy + 1) * cell_size; ++y) {
        for (int x = cx * cell_size; x < (cx + 1) * cell_size; ++x) {
          if (color) {
            const auto r = img.at(x, y, 0), g = img.at(x, y, 1), b = img.at(x, y, 2);
            const auto& p = color_names::lookup(r, g, b);
            for (int k = 0; k < color_names::kNumNames; ++k) cn[k] += p[k];
            gray += 0.299 * r + 0.587 * g + 0.114 * b;
          } else {
            gray += img.at(x, y, 0);
          }
        }
      }
      for (int k = 0; k < layout.color_names; ++k)
        out.values(cx, cy, layout.color_names_offset() + k) = cn[k] * inv_area;
      out.values(cx, cy, layout.gray_offset()) = gray * inv_area / 255.0 - 0.5;
    }
  }
  return out;
}

// Periodic Hann window sin^2(pi n / N); a length-1 window is {1}.
inline std::vector<double> hann_window(int n) {
  detail::require(n > 0, "hann_window: length must be positive");
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(std::numbers::pi * i / n);
    w[i] = s * s;
  }
  return w;
}

inline RealGrid apply_window(const RealGrid& map) {
  const auto wx = hann_window(map.width());
  const auto wy = hann_window(map.height());
  RealGrid out = map;
  for (int c = 0; c < out.channels(); ++c)
    for (int y = 0; y < out.height(); ++y)
      for (int x = 0; x < out.width(); ++x) out(x, y, c) *= wx[x] * wy[y];
  return out;
}

inline FeatureMap apply_window(const FeatureMap& map) {
  return {apply_window(map.values), map.cell_size, map.layout};
}

}  // namespace lmcf
