#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lmcf/error.hpp"

namespace lmcf {

// Dense width x height x channels grid stored as consecutive channel planes,
// each plane row-major: index = (c * height + y) * width + x.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, int channels = 1, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    detail::require(width > 0 && height > 0 && channels > 0,
                    "grid dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y, int c = 0) noexcept {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c >= 0 && c < channels_);
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }
  const T& operator()(int x, int y, int c = 0) const noexcept {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c >= 0 && c < channels_);
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }

  std::span<T> channel(int c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }
  std::span<const T> channel(int c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height() &&
           channels_ == other.channels();
  }
  template <typename U>
  bool same_plane(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

// Wrapped modular index in [0, n).
constexpr int wrap_index(int i, int n) noexcept {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

// Signed displacement of a cyclic shift: s > n/2 maps to s - n.
constexpr int wrapped_displacement(int s, int n) noexcept {
  return s > n / 2 ? s - n : s;
}

}  // namespace lmcf
