#pragma once

// 31-channel FHOG cell descriptor: 18 contrast-sensitive orientation bins,
// 9 contrast-insensitive bins and 4 gradient-energy (texture) channels, each
// cell normalized against its four surrounding 2x2 blocks with truncation at
// 0.2. Every output value lies in [0, 1].
//
// Pixels are hard-assigned to the cell that contains them, so the grid is
// floor(w / cell) x floor(h / cell) and covers the top-left of the image.
// Gradients use central differences with border replication; on color input
// the channel with the largest gradient magnitude wins.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "lmcf/error.hpp"
#include "lmcf/grid.hpp"
#include "lmcf/image.hpp"

namespace lmcf::hog {

inline constexpr int kSensitiveBins = 18;
inline constexpr int kInsensitiveBins = 9;
inline constexpr int kTextureChannels = 4;
inline constexpr int kChannels = kSensitiveBins + kInsensitiveBins + kTextureChannels;

inline constexpr double kTruncation = 0.2;
inline constexpr double kEpsilon = 1e-4;

struct OrientationHistograms {
  int cells_x = 0;
  int cells_y = 0;
  std::vector<std::array<double, kSensitiveBins>> bins;  // row-major cells

  std::array<double, kSensitiveBins>& at(int cx, int cy) { return bins[cy * cells_x + cx]; }
  const std::array<double, kSensitiveBins>& at(int cx, int cy) const {
    return bins[cy * cells_x + cx];
  }
};

struct PixelGradient {
  double magnitude = 0.0;
  int bin = 0;  // 0..17, bin k centered on angle k * pi / 9
};

namespace detail {

inline const std::array<std::array<double, 2>, kInsensitiveBins>& bin_directions() {
  static const auto d = [] {
    std::array<std::array<double, 2>, kInsensitiveBins> d{};
    for (int k = 0; k < kInsensitiveBins; ++k) {
      const double a = k * std::numbers::pi / kInsensitiveBins;
      d[k] = {std::cos(a), std::sin(a)};
    }
    return d;
  }();
  return d;
}

// Dominant-channel gradient to (magnitude, bin); bin k is centered on k * pi / 9.
inline PixelGradient bin_gradient(double dx, double dy, double mag2,
                                  const std::array<std::array<double, 2>, kInsensitiveBins>& dirs) {
  double best_dot = 0.0;
  int best = 0;
  for (int k = 0; k < kInsensitiveBins; ++k) {
    const double dot = dirs[k][0] * dx + dirs[k][1] * dy;
    if (dot > best_dot) {
      best_dot = dot;
      best = k;
    } else if (-dot > best_dot) {
      best_dot = -dot;
      best = k + kInsensitiveBins;
    }
  }
  return {std::sqrt(mag2), best};
}

}  // namespace detail

// Gradient at pixel (x, y); angles measured with y pointing down.
inline PixelGradient pixel_gradient(const Image& img, int x, int y) {
  double best_dx = 0.0, best_dy = 0.0, best_mag2 = -1.0;
  for (int c = 0; c < img.channels(); ++c) {
    const double dx = double(img.clamped(x + 1, y, c)) - double(img.clamped(x - 1, y, c));
    const double dy = double(img.clamped(x, y + 1, c)) - double(img.clamped(x, y - 1, c));
    const double mag2 = dx * dx + dy * dy;
    if (mag2 > best_mag2) {
      best_mag2 = mag2;
      best_dx = dx;
      best_dy = dy;
    }
  }
  return detail::bin_gradient(best_dx, best_dy, best_mag2, detail::bin_directions());
}

inline OrientationHistograms orientation_histograms(const Image& img, int cell_size) {
  lmcf::detail::require(cell_size > 0, "hog: cell size must be positive");
  OrientationHistograms h;
  h.cells_x = img.width() / cell_size;
  h.cells_y = img.height() / cell_size;
  lmcf::detail::require(h.cells_x > 0 && h.cells_y > 0, "hog: image smaller than one cell");
  h.bins.assign(static_cast<std::size_t>(h.cells_x) * h.cells_y, {});
  const auto& dirs = detail::bin_directions();
  const int W = img.width(), H = img.height(), ch = img.channels();
  const std::uint8_t* px = img.pixels().data();
  const std::size_t stride = static_cast<std::size_t>(W) * ch;
  for (int y = 0; y < h.cells_y * cell_size; ++y) {
    const std::uint8_t* row = px + y * stride;
    const std::uint8_t* up = px + std::max(y - 1, 0) * stride;
    const std::uint8_t* down = px + std::min(y + 1, H - 1) * stride;
    auto* cell_row = &h.bins[static_cast<std::size_t>(y / cell_size) * h.cells_x];
    for (int x = 0; x < h.cells_x * cell_size; ++x) {
      const int xl = std::max(x - 1, 0) * ch, xr = std::min(x + 1, W - 1) * ch, xc = x * ch;
      double best_dx = 0.0, best_dy = 0.0, best_mag2 = -1.0;
      for (int c = 0; c < ch; ++c) {
        const double dx = double(row[xr + c]) - double(row[xl + c]);
        const double dy = double(down[xc + c]) - double(up[xc + c]);
        const double mag2 = dx * dx + dy * dy;
        if (mag2 > best_mag2) {
          best_mag2 = mag2;
          best_dx = dx;
          best_dy = dy;
        }
      }
      const PixelGradient g = detail::bin_gradient(best_dx, best_dy, best_mag2, dirs);
      cell_row[x / cell_size][g.bin] += g.magnitude;
    }
  }
  return h;
}

inline RealGrid normalize(const OrientationHistograms& h) {
  const int nx = h.cells_x, ny = h.cells_y;
  std::vector<double> energy(static_cast<std::size_t>(nx) * ny);
  for (int cy = 0; cy < ny; ++cy)
    for (int cx = 0; cx < nx; ++cx) {
      const auto& b = h.at(cx, cy);
      double e = 0.0;
      for (int o = 0; o < kInsensitiveBins; ++o) {
        const double s = b[o] + b[o + kInsensitiveBins];
        e += s * s;
      }
      energy[cy * nx + cx] = e;
    }
  auto energy_at = [&](int cx, int cy) {
    return energy[std::clamp(cy, 0, ny - 1) * nx + std::clamp(cx, 0, nx - 1)];
  };

  RealGrid out(nx, ny, kChannels);
  for (int cy = 0; cy < ny; ++cy) {
    for (int cx = 0; cx < nx; ++cx) {
      std::array<double, 4> norms{};
      int j = 0;
      for (int oy = -1; oy <= 0; ++oy)
        for (int ox = -1; ox <= 0; ++ox) {
          const double block = energy_at(cx + ox, cy + oy) + energy_at(cx + ox + 1, cy + oy) +
                               energy_at(cx + ox, cy + oy + 1) +
                               energy_at(cx + ox + 1, cy + oy + 1);
          norms[j++] = 1.0 / std::sqrt(block + kEpsilon);
        }
      const auto& b = h.at(cx, cy);
      std::array<double, kTextureChannels> texture{};
      for (int o = 0; o < kSensitiveBins; ++o) {
        double sum = 0.0;
        for (int n = 0; n < 4; ++n) {
          const double v = std::min(b[o] * norms[n], kTruncation);
          sum += v;
          texture[n] += v;
        }
        out(cx, cy, o) = 0.5 * sum;
      }
      for (int o = 0; o < kInsensitiveBins; ++o) {
        const double s = b[o] + b[o + kInsensitiveBins];
        double sum = 0.0;
        for (int n = 0; n < 4; ++n) sum += std::min(s * norms[n], kTruncation);
        out(cx, cy, kSensitiveBins + o) = 0.5 * sum;
      }
      for (int n = 0; n < kTextureChannels; ++n)
        out(cx, cy, kSensitiveBins + kInsensitiveBins + n) = 0.2357 * texture[n];
    }
  }
  return out;
}

inline RealGrid fhog(const Image& img, int cell_size) {
  return normalize(orientation_histograms(img, cell_size));
}

}  // namespace lmcf::hog
