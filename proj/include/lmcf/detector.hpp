#pragma once

// Detection response over all cyclic shifts and multimodal re-detection.
//
// A response value at shift (sx, sy) scores the candidate feature map moved by
// the wrapped displacement (sx, sy) cells; the peak therefore gives the target
// motion directly.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lmcf/error.hpp"
#include "lmcf/features.hpp"
#include "lmcf/grid.hpp"
#include "lmcf/optimizer.hpp"
#include "lmcf/sampling.hpp"
#include "lmcf/spectral.hpp"

namespace lmcf {

struct ResponseMap {
  RealGrid values;
  int peak_x = 0;
  int peak_y = 0;
  double f_max = 0.0;
  double f_min = 0.0;

  int width() const noexcept { return values.width(); }
  int height() const noexcept { return values.height(); }
  int dx() const noexcept { return wrapped_displacement(peak_x, values.width()); }
  int dy() const noexcept { return wrapped_displacement(peak_y, values.height()); }

  // First maximum in row-major order wins.
  static ResponseMap from_values(RealGrid values) {
    ResponseMap r;
    auto v = values.values();
    std::size_t best = 0;
    double lo = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) best = i;
      lo = std::min(lo, v[i]);
    }
    r.peak_x = static_cast<int>(best % values.width());
    r.peak_y = static_cast<int>(best / values.width());
    r.f_max = v[best];
    r.f_min = lo;
    r.values = std::move(values);
    return r;
  }
};

inline ResponseMap respond(const DualModel& model, const SpectralMap& candidate_hat) {
  return ResponseMap::from_values(spatial_response(model, candidate_hat));
}

inline ResponseMap respond(const DualModel& model, const FeatureMap& candidate) {
  return respond(model, dft2(candidate.values));
}

struct Peak {
  int x = 0;
  int y = 0;
  double value = 0.0;
};

// Strong local maxima of a response, strongest first.
struct PeakSet {
  std::vector<Peak> peaks;
  double theta = 1.0;
};

inline constexpr int kMaxSecondaryPeaks = 5;

inline int exclusion_radius(int width, int height) {
  return (std::min(width, height) + 9) / 10;
}

// Local maxima under the wrapped 8-neighborhood. A cell must beat every
// neighbor; equal neighbors are resolved in favor of the lower row-major index.
inline std::vector<Peak> local_maxima(const ResponseMap& response) {
  const RealGrid& v = response.values;
  const int W = v.width(), H = v.height();
  std::vector<Peak> out;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double c = v(x, y);
      const int idx = y * W + x;
      bool is_max = true;
      for (int oy = -1; oy <= 1 && is_max; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const int nx = wrap_index(x + ox, W), ny = wrap_index(y + oy, H);
          const int nidx = ny * W + nx;
          if (nidx == idx) continue;
          const double n = v(nx, ny);
          if (n > c || (n == c && nidx < idx)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) out.push_back({x, y, c});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return out;
}

// Keeps the global maximum plus up to `max_secondary` local maxima whose
// ratio to it is >= theta and that lie outside the exclusion radius of every
// stronger retained peak.
inline PeakSet find_peaks(const ResponseMap& response, double theta,
                          int max_secondary = kMaxSecondaryPeaks) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidInput("find_peaks: theta must be in (0, 1]");
  PeakSet set;
  set.theta = theta;
  const std::vector<Peak> maxima = local_maxima(response);
  if (maxima.empty()) return set;
  set.peaks.push_back(maxima.front());
  const double top = maxima.front().value;
  if (!(top > 0.0)) return set;  // ratios are meaningless without a positive peak

  const int W = response.width(), H = response.height();
  const int radius = exclusion_radius(W, H);
  for (std::size_t i = 1; i < maxima.size(); ++i) {
    if (static_cast<int>(set.peaks.size()) - 1 >= max_secondary) break;
    const Peak& p = maxima[i];
    if (p.value / top < theta) break;  // sorted: every later peak is weaker
    bool separated = true;
    for (const Peak& q : set.peaks) {
      const int ddx = std::abs(wrapped_displacement(wrap_index(p.x - q.x, W), W));
      const int ddy = std::abs(wrapped_displacement(wrap_index(p.y - q.y, H), H));
      if (std::max(ddx, ddy) <= radius) {
        separated = false;
        break;
      }
    }
    if (separated) set.peaks.push_back(p);
  }
  return set;
}

struct DetectConfig {
  double theta = 0.7;
  int max_secondary = kMaxSecondaryPeaks;
  bool multimodal = true;
};

struct Detection {
  bool ok = false;            // false: no candidate region overlapped the frame
  Point center;               // detected target center
  ResponseMap response;       // winning response map
  int peaks_considered = 0;   // response maps evaluated
  double unimodal_f_max = 0;  // peak of the primary map alone
  Point unimodal_center;      // where unimodal detection would have gone
  int winner = 0;             // 0: primary map, i > 0: re-detection at peak i
};

namespace detail {

inline bool region_touches_frame(const Image& frame, const Rect& r) {
  return std::isfinite(r.x) && std::isfinite(r.y) &&
         intersect(r, {0.0, 0.0, double(frame.width()), double(frame.height())}).area() > 0.0;
}

inline Point shifted_center(const SampleGeometry& g, Point c, int dx, int dy, double scale) {
  const Point d = g.displacement(dx, dy, scale);
  return {c.x + d.x, c.y + d.y};
}

}  // namespace detail

// Responds at prev_center; with multimodal detection enabled every retained
// secondary peak is re-detected with a crop centered on it, and the response
// with the largest f_max decides the target position (ties keep the primary
// map, then the earlier peak).
inline Detection multimodal_detect(const DualModel& model, const SampleGeometry& geometry,
                                   const Image& frame, Point prev_center, double scale,
                                   const DetectConfig& config) {
  Detection out;
  out.center = prev_center;
  out.unimodal_center = prev_center;
  const Rect primary_region = Rect::around(prev_center, geometry.source_size(scale));
  if (!detail::region_touches_frame(frame, primary_region)) return out;

  ResponseMap primary = respond(model, geometry.sample(frame, prev_center, scale));
  if (!std::isfinite(primary.f_max) || !std::isfinite(primary.f_min)) return out;

  out.ok = true;
  out.unimodal_f_max = primary.f_max;
  out.unimodal_center = detail::shifted_center(geometry, prev_center, primary.dx(), primary.dy(), scale);
  out.center = out.unimodal_center;
  out.peaks_considered = 1;

  if (config.multimodal) {
    const PeakSet peaks = find_peaks(primary, config.theta, config.max_secondary);
    double best = primary.f_max;
    for (std::size_t i = 1; i < peaks.peaks.size(); ++i) {
      const Peak& p = peaks.peaks[i];
      const Point c = detail::shifted_center(geometry, prev_center,
                                             wrapped_displacement(p.x, primary.width()),
                                             wrapped_displacement(p.y, primary.height()), scale);
      if (!detail::region_touches_frame(frame, Rect::around(c, geometry.source_size(scale))))
        continue;
      ResponseMap r = respond(model, geometry.sample(frame, c, scale));
      ++out.peaks_considered;
      if (std::isfinite(r.f_max) && r.f_max > best) {
        best = r.f_max;
        out.winner = static_cast<int>(i);
        out.center = detail::shifted_center(geometry, c, r.dx(), r.dy(), scale);
        out.response = std::move(r);
      }
    }
  }
  if (out.winner == 0) out.response = std::move(primary);
  return out;
}

}  // namespace lmcf
