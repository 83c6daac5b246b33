#pragma once

#include <algorithm>
#include <cmath>

namespace lmcf {

// Continuous frame coordinates: pixel (i, j) covers [i, i+1) x [j, j+1).
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Size {
  double width = 0.0;
  double height = 0.0;
  friend bool operator==(const Size&, const Size&) = default;
};

// Axis-aligned box, 0-indexed, (x, y) is the top-left corner.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  Point center() const noexcept { return {x + width / 2.0, y + height / 2.0}; }
  double area() const noexcept { return width * height; }
  bool valid() const noexcept {
    return std::isfinite(x) && std::isfinite(y) && width > 0.0 && height > 0.0;
  }

  static Rect around(Point c, Size s) noexcept {
    return {c.x - s.width / 2.0, c.y - s.height / 2.0, s.width, s.height};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) noexcept {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x + a.width, b.x + b.width);
  const double y1 = std::min(a.y + a.height, b.y + b.height);
  return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

// Clamp a box to [0, frame_w) x [0, frame_h); may return zero area.
inline Rect clamp_to_frame(const Rect& r, double frame_w, double frame_h) noexcept {
  return intersect(r, {0.0, 0.0, frame_w, frame_h});
}

}  // namespace lmcf
