#pragma once

// Seeded synthetic sequences with exact ground truth: a block-noise textured
// target over a smooth structured background. Kinds:
//   translate   constant velocity
//   scale_ramp  fixed center, size multiplied by scale_rate every frame
//   occlude     translate, target region blacked out for [occlusion_start, occlusion_end)
//   distractor  translate plus a near-identical second object on its own path,
//               drawn over the target
// Pixel data depends only on the spec (std::mt19937 raw output, no
// distribution objects).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lmcf/error.hpp"
#include "lmcf/geometry.hpp"
#include "lmcf/image.hpp"

namespace lmcf {

enum class SynthKind { translate, scale_ramp, occlude, distractor };

inline std::string_view to_string(SynthKind k) {
  switch (k) {
    case SynthKind::translate: return "translate";
    case SynthKind::scale_ramp: return "scale_ramp";
    case SynthKind::occlude: return "occlude";
    case SynthKind::distractor: return "distractor";
  }
  return "unknown";
}

inline std::optional<SynthKind> parse_synth_kind(std::string_view s) {
  if (s == "translate") return SynthKind::translate;
  if (s == "scale_ramp") return SynthKind::scale_ramp;
  if (s == "occlude") return SynthKind::occlude;
  if (s == "distractor") return SynthKind::distractor;
  return std::nullopt;
}

struct SynthSpec {
  SynthKind kind = SynthKind::translate;
  int length = 100;
  int frame_width = 320;
  int frame_height = 240;
  Size target_size{32, 32};
  std::optional<Point> start_center;  // default: path centered in the frame
  Point velocity{2.0, 0.0};           // px per frame
  double scale_rate = 1.02;           // scale_ramp
  int occlusion_start = 40;           // occlude, 0-indexed frames
  int occlusion_end = 50;
  Point distractor_start{160, 60};    // distractor; defaults cross the default path at frame 50
  Point distractor_velocity{0, 1.2};
  double distractor_similarity = 0.85;
  std::uint64_t seed = 1;
};

struct SyntheticSequence {
  std::string name;
  std::vector<Image> frames;
  std::vector<Rect> ground_truth;
  std::vector<Rect> distractor_truth;  // distractor kind only
  std::vector<std::string> attributes;
};

namespace detail {

struct Texture {
  int width = 0, height = 0;
  std::vector<double> rgb;  // interleaved, 0..255

  double at(int x, int y, int c) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  double bilinear(double u, double v, int c) const {
    const double fx = u - 0.5, fy = v - 0.5;
    const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
    const double ax = fx - x0, ay = fy - y0;
    return (1 - ay) * ((1 - ax) * at(x0, y0, c) + ax * at(x0 + 1, y0, c)) +
           ay * ((1 - ax) * at(x0, y0 + 1, c) + ax * at(x0 + 1, y0 + 1, c));
  }
};

inline double unit(std::mt19937& rng) { return (rng() >> 8) * (1.0 / 16777216.0); }

// Random-color blocks; each block is `block` texels wide.
inline Texture block_texture(std::mt19937& rng, int size, int block) {
  Texture t{size, size, std::vector<double>(static_cast<std::size_t>(size) * size * 3)};
  const int n = (size + block - 1) / block;
  std::vector<double> colors(static_cast<std::size_t>(n) * n * 3);
  for (auto& c : colors) c = 20.0 + 215.0 * unit(rng);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int c = 0; c < 3; ++c)
        t.rgb[(static_cast<std::size_t>(y) * size + x) * 3 + c] =
            colors[((y / block) * n + x / block) * 3 + c];
  return t;
}

inline Texture blend(const Texture& a, const Texture& b, double weight_a) {
  Texture t = a;
  for (std::size_t i = 0; i < t.rgb.size(); ++i)
    t.rgb[i] = weight_a * a.rgb[i] + (1.0 - weight_a) * b.rgb[i];
  return t;
}

// Smooth multi-octave value noise, muted colors.
inline Image background(std::mt19937& rng, int w, int h) {
  Image img(w, h, 3);
  std::vector<double> acc(static_cast<std::size_t>(w) * h * 3, 0.0);
  const int periods[] = {96, 48, 24};
  const double amps[] = {60.0, 30.0, 15.0};
  for (int o = 0; o < 3; ++o) {
    const int p = periods[o];
    const int gw = w / p + 2, gh = h / p + 2;
    std::vector<double> grid(static_cast<std::size_t>(gw) * gh * 3);
    for (auto& g : grid) g = unit(rng) * 2.0 - 1.0;
    for (int y = 0; y < h; ++y) {
      const double fy = double(y) / p;
      const int y0 = static_cast<int>(fy);
      const double ay = fy - y0;
      const double sy = ay * ay * (3 - 2 * ay);
      for (int x = 0; x < w; ++x) {
        const double fx = double(x) / p;
        const int x0 = static_cast<int>(fx);
        const double ax = fx - x0;
        const double sx = ax * ax * (3 - 2 * ax);
        for (int c = 0; c < 3; ++c) {
          auto g = [&](int gx, int gy) { return grid[(static_cast<std::size_t>(gy) * gw + gx) * 3 + c]; };
          const double v = (1 - sy) * ((1 - sx) * g(x0, y0) + sx * g(x0 + 1, y0)) +
                           sy * ((1 - sx) * g(x0, y0 + 1) + sx * g(x0 + 1, y0 + 1));
          acc[(static_cast<std::size_t>(y) * w + x) * 3 + c] += amps[o] * v;
        }
      }
    }
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(x, y, c) = static_cast<std::uint8_t>(
            std::clamp(std::lround(120.0 + acc[(static_cast<std::size_t>(y) * w + x) * 3 + c]),
                       0L, 255L));
  return img;
}

inline void paint(Image& img, const Texture& tex, const Rect& box) {
  const int x0 = std::max(0, static_cast<int>(std::floor(box.x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(box.y)));
  const int x1 = std::min(img.width(), static_cast<int>(std::ceil(box.x + box.width)));
  const int y1 = std::min(img.height(), static_cast<int>(std::ceil(box.y + box.height)));
  for (int y = y0; y < y1; ++y) {
    const double cy = y + 0.5;
    if (cy < box.y || cy >= box.y + box.height) continue;
    for (int x = x0; x < x1; ++x) {
      const double cx = x + 0.5;
      if (cx < box.x || cx >= box.x + box.width) continue;
      const double u = (cx - box.x) / box.width * tex.width;
      const double v = (cy - box.y) / box.height * tex.height;
      for (int c = 0; c < 3; ++c)
        img.at(x, y, c) = static_cast<std::uint8_t>(
            std::clamp(std::lround(tex.bilinear(u, v, c)), 0L, 255L));
    }
  }
}

inline void blank(Image& img, const Rect& box) {
  const Rect r = clamp_to_frame(box, img.width(), img.height());
  for (int y = static_cast<int>(std::floor(r.y)); y < static_cast<int>(std::ceil(r.y + r.height)); ++y)
    for (int x = static_cast<int>(std::floor(r.x)); x < static_cast<int>(std::ceil(r.x + r.width)); ++x)
      for (int c = 0; c < img.channels(); ++c) img.at(x, y, c) = 0;
}

}  // namespace detail

// Ground-truth box of frame k (0-indexed).
inline Rect synthetic_box(const SynthSpec& spec, int k) {
  const Point start = spec.start_center.value_or(
      Point{spec.frame_width / 2.0 - spec.velocity.x * (spec.length - 1) / 2.0,
            spec.frame_height / 2.0 - spec.velocity.y * (spec.length - 1) / 2.0});
  if (spec.kind == SynthKind::scale_ramp) {
    const double s = std::pow(spec.scale_rate, k);
    const Point c = spec.start_center.value_or(Point{spec.frame_width / 2.0, spec.frame_height / 2.0});
    return Rect::around(c, {spec.target_size.width * s, spec.target_size.height * s});
  }
  return Rect::around({start.x + spec.velocity.x * k, start.y + spec.velocity.y * k},
                      spec.target_size);
}

inline SyntheticSequence synthesize_sequence(const SynthSpec& spec) {
  detail::require(spec.length >= 1, "synthesize: length must be >= 1");
  detail::require(spec.frame_width > 0 && spec.frame_height > 0,
                  "synthesize: frame size must be positive");
  detail::require(spec.target_size.width >= 1 && spec.target_size.height >= 1,
                  "synthesize: target size must be positive");
  detail::require(spec.target_size.width <= spec.frame_width &&
                      spec.target_size.height <= spec.frame_height,
                  "synthesize: target larger than frame");
  if (spec.kind == SynthKind::scale_ramp) {
    detail::require(spec.scale_rate > 0, "synthesize: scale rate must be positive");
  }

  std::mt19937 rng(static_cast<std::uint32_t>(spec.seed ^ (spec.seed >> 32)));
  const Image bg = detail::background(rng, spec.frame_width, spec.frame_height);
  const detail::Texture target_tex = detail::block_texture(rng, 64, 8);
  const detail::Texture other = detail::block_texture(rng, 64, 8);
  const detail::Texture distractor_tex =
      detail::blend(target_tex, other, std::clamp(spec.distractor_similarity, 0.0, 1.0));

  SyntheticSequence seq;
  seq.name = std::string("synthetic-") + std::string(to_string(spec.kind));
  switch (spec.kind) {
    case SynthKind::scale_ramp: seq.attributes = {"SV"}; break;
    case SynthKind::occlude: seq.attributes = {"OCC"}; break;
    case SynthKind::distractor: seq.attributes = {"BC"}; break;
    default: break;
  }
  for (int k = 0; k < spec.length; ++k) {
    const Rect box = synthetic_box(spec, k);
    if (box.width > spec.frame_width || box.height > spec.frame_height)
      throw InvalidInput("synthesize: target grows larger than the frame");
    Image frame = bg;
    detail::paint(frame, target_tex, box);
    if (spec.kind == SynthKind::distractor) {
      const Rect d = Rect::around({spec.distractor_start.x + spec.distractor_velocity.x * k,
                                   spec.distractor_start.y + spec.distractor_velocity.y * k},
                                  spec.target_size);
      detail::paint(frame, distractor_tex, d);  // drawn over the target where they cross
      seq.distractor_truth.push_back(d);
    }
    if (spec.kind == SynthKind::occlude && k >= spec.occlusion_start && k < spec.occlusion_end)
      detail::blank(frame, box);
    seq.frames.push_back(std::move(frame));
    seq.ground_truth.push_back(box);
  }
  return seq;
}

}  // namespace lmcf
