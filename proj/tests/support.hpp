#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "lmcf/grid.hpp"
#include "lmcf/image.hpp"

namespace lmcf::test {

inline RealGrid random_grid(std::mt19937_64& rng, int w, int h, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealGrid g(w, h, d);
  for (auto& v : g.values()) v = u(rng);
  return g;
}

template <typename T>
double max_abs_diff(const Grid<T>& a, const Grid<T>& b) {
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

// Random-valued RGB image.
inline Image noise_image(std::mt19937_64& rng, int w, int h) {
  Image img(w, h, 3);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

}  // namespace lmcf::test
