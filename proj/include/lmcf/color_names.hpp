#pragma once

// Probabilistic color-name attributes.
//
// Each RGB value is soft-assigned to the eleven basic color terms by a
// Gaussian likelihood around a prototype in CIELAB, normalized to sum to one.
// "grey" is not emitted: it is one minus the sum of the others, and achromatic
// intensity is already carried by the grayscale feature channel. The remaining
// ten probabilities therefore lie in [0, 1] and sum to at most one.
//
// Lookups go through a 32x32x32 table (5 bits per channel), evaluated at the
// bin centers, built once on first use.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace lmcf::color_names {

inline constexpr int kNumNames = 10;

enum Name : int { black = 0, blue, brown, green, orange, pink, purple, red, white, yellow };

inline constexpr std::array<std::string_view, kNumNames> kNameLabels = {
    "black", "blue", "brown", "green", "orange", "pink", "purple", "red", "white", "yellow"};

using Probabilities = std::array<double, kNumNames>;

namespace detail {

struct Lab {
  double l, a, b;
};

inline double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline Lab rgb_to_lab(double r8, double g8, double b8) {
  const double r = srgb_to_linear(r8 / 255.0);
  const double g = srgb_to_linear(g8 / 255.0);
  const double b = srgb_to_linear(b8 / 255.0);
  // D65 white point.
  const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  const double y = (0.2126729 * r + 0.7151522 * g + 0.0721750 * b);
  const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  auto f = [](double t) {
    constexpr double eps = 216.0 / 24389.0;
    constexpr double kappa = 24389.0 / 27.0;
    return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
  };
  const double fx = f(x), fy = f(y), fz = f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

struct Prototype {
  double r, g, b;
};

// Emitted names in enum order, followed by grey.
inline constexpr std::array<Prototype, kNumNames + 1> kPrototypes = {{
    {18, 18, 18},     // black
    {35, 65, 200},    // blue
    {120, 72, 35},    // brown
    {45, 160, 50},    // green
    {245, 135, 25},   // orange
    {245, 160, 195},  // pink
    {130, 45, 160},   // purple
    {215, 25, 25},    // red
    {245, 245, 245},  // white
    {240, 225, 35},   // yellow
    {128, 128, 128},  // grey
}};

inline constexpr double kBandwidth = 20.0;  // CIELAB units

inline Probabilities evaluate(double r, double g, double b) {
  const Lab p = rgb_to_lab(r, g, b);
  std::array<double, kNumNames + 1> logits{};
  double best = -1e300;
  for (std::size_t k = 0; k < kPrototypes.size(); ++k) {
    const Lab q = rgb_to_lab(kPrototypes[k].r, kPrototypes[k].g, kPrototypes[k].b);
    const double d2 = (p.l - q.l) * (p.l - q.l) + (p.a - q.a) * (p.a - q.a) +
                      (p.b - q.b) * (p.b - q.b);
    logits[k] = -d2 / (2.0 * kBandwidth * kBandwidth);
    best = std::max(best, logits[k]);
  }
  double total = 0.0;
  for (auto& v : logits) {
    v = std::exp(v - best);
    total += v;
  }
  Probabilities out{};
  for (int k = 0; k < kNumNames; ++k) out[k] = logits[k] / total;
  return out;
}

}  // namespace detail

inline const std::vector<Probabilities>& lookup_table() {
  static const std::vector<Probabilities> table = [] {
    std::vector<Probabilities> t(32 * 32 * 32);
    for (int b = 0; b < 32; ++b)
      for (int g = 0; g < 32; ++g)
        for (int r = 0; r < 32; ++r)
          t[r + 32 * g + 1024 * b] = detail::evaluate(8 * r + 3.5, 8 * g + 3.5, 8 * b + 3.5);
    return t;
  }();
  return table;
}

inline const Probabilities& lookup(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return lookup_table()[(r >> 3) + 32 * (g >> 3) + 1024 * (b >> 3)];
}

}  // namespace lmcf::color_names
