#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lmcf/error.hpp"
#include "lmcf/geometry.hpp"

namespace lmcf {

// Decoded 8-bit frame, interleaved channels (1 = gray, 3 = RGB).
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t fill = 0)
      : width_(width), height_(height), channels_(channels) {
    detail::require(width > 0 && height > 0, "image dimensions must be positive");
    detail::require(channels == 1 || channels == 3, "image must have 1 or 3 channels");
    pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t& at(int x, int y, int c = 0) noexcept {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const noexcept {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  // Border-replicating access.
  std::uint8_t clamped(int x, int y, int c = 0) const noexcept {
    return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1), c);
  }

  std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }
  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Bilinear sample at continuous coordinate (x, y), border replicated.
inline double sample_bilinear(const Image& img, double x, double y, int c) noexcept {
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  // Clamp before the integer conversion so far-away coordinates stay defined.
  const int x0 = static_cast<int>(std::clamp(x0f, -1.0, static_cast<double>(img.width())));
  const int y0 = static_cast<int>(std::clamp(y0f, -1.0, static_cast<double>(img.height())));
  const double v00 = img.clamped(x0, y0, c);
  const double v10 = img.clamped(x0 + 1, y0, c);
  const double v01 = img.clamped(x0, y0 + 1, c);
  const double v11 = img.clamped(x0 + 1, y0 + 1, c);
  return (1 - ay) * ((1 - ax) * v00 + ax * v10) + ay * ((1 - ax) * v01 + ax * v11);
}

// Resample `source` (frame coordinates) onto an out_w x out_h image.
// Replicates border pixels outside the frame. When an output pixel covers more
// than one source pixel the footprint is box-averaged over a k x k grid of
// bilinear taps.
inline Image resample_region(const Image& frame, const Rect& source, int out_w, int out_h) {
  detail::require(!frame.empty(), "resample_region: empty frame");
  detail::require(out_w > 0 && out_h > 0, "resample_region: output size must be positive");
  detail::require(source.width > 0 && source.height > 0 && std::isfinite(source.x) &&
                      std::isfinite(source.y),
                  "resample_region: degenerate source rectangle");
  const int ch = frame.channels();
  Image out(out_w, out_h, ch);
  const double step_x = source.width / out_w;
  const double step_y = source.height / out_h;
  const int taps_x = std::max(1, static_cast<int>(std::ceil(step_x - 1e-9)));
  const int taps_y = std::max(1, static_cast<int>(std::ceil(step_y - 1e-9)));
  const double inv_taps = 1.0 / (taps_x * taps_y);

  // Separable tap tables: clamped neighbor indices and bilinear weight per tap,
  // same arithmetic as sample_bilinear.
  struct Tap {
    int i0, i1;
    double a;
  };
  auto taps = [](double origin, double step, int n, int k, int limit) {
    std::vector<Tap> t(static_cast<std::size_t>(n) * k);
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < k; ++q) {
        const double f = origin + i * step + (q + 0.5) * step / k - 0.5;
        const double f0 = std::floor(f);
        const int i0 = static_cast<int>(std::clamp(f0, -1.0, static_cast<double>(limit)));
        t[static_cast<std::size_t>(i) * k + q] = {std::clamp(i0, 0, limit - 1),
                                                  std::clamp(i0 + 1, 0, limit - 1), f - f0};
      }
    }
    return t;
  };
  const std::vector<Tap> tx = taps(source.x, step_x, out_w, taps_x, frame.width());
  const std::vector<Tap> ty = taps(source.y, step_y, out_h, taps_y, frame.height());

  // Bilinear box average is separable: filter the referenced rows
  // horizontally, then combine them vertically.
  int r0 = frame.height(), r1 = -1;
  for (const Tap& t : ty) {
    r0 = std::min(r0, t.i0);
    r1 = std::max(r1, t.i1);
  }
  const std::size_t row_len = static_cast<std::size_t>(out_w) * ch;
  std::vector<double> rows(static_cast<std::size_t>(r1 - r0 + 1) * row_len, 0.0);
  for (int r = r0; r <= r1; ++r) {
    double* dst = rows.data() + static_cast<std::size_t>(r - r0) * row_len;
    for (int i = 0; i < out_w; ++i) {
      for (int qx = 0; qx < taps_x; ++qx) {
        const Tap& x = tx[static_cast<std::size_t>(i) * taps_x + qx];
        for (int c = 0; c < ch; ++c)
          dst[i * ch + c] += (1 - x.a) * frame.at(x.i0, r, c) + x.a * frame.at(x.i1, r, c);
      }
    }
  }
  std::vector<double> acc(row_len);
  for (int j = 0; j < out_h; ++j) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int qy = 0; qy < taps_y; ++qy) {
      const Tap& y = ty[static_cast<std::size_t>(j) * taps_y + qy];
      const double* a = rows.data() + static_cast<std::size_t>(y.i0 - r0) * row_len;
      const double* b = rows.data() + static_cast<std::size_t>(y.i1 - r0) * row_len;
      for (std::size_t k = 0; k < row_len; ++k) acc[k] += (1 - y.a) * a[k] + y.a * b[k];
    }
    for (int i = 0; i < out_w; ++i)
      for (int c = 0; c < ch; ++c)
        out.at(i, j, c) =
            static_cast<std::uint8_t>(std::clamp(acc[i * ch + c] * inv_taps + 0.5, 0.0, 255.0));
  }
  return out;
}

}  // namespace lmcf
