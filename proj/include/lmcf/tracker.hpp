#pragma once

// Per-sequence tracking state machine. Each frame:
//   1. respond at the last position (with multimodal re-detection),
//   2. estimate the scale at the detected position,
//   3. score the winning response (F_max, APCE) against the update gate,
//   4. on high confidence: retrain at the new position and scale, blend the
//      translation model with rate eta and update the scale filter.

#include <algorithm>
#include <cmath>
#include <optional>

#include "lmcf/confidence.hpp"
#include "lmcf/detector.hpp"
#include "lmcf/error.hpp"
#include "lmcf/features.hpp"
#include "lmcf/labels.hpp"
#include "lmcf/optimizer.hpp"
#include "lmcf/sampling.hpp"
#include "lmcf/scale.hpp"

namespace lmcf {

struct TrackerConfig {
  double padding = 1.5;
  double eta = 0.015;
  double theta = 0.7;
  double beta1 = 0.7;
  double beta2 = 0.45;
  double C = 10000.0;
  ModelMode mode = ModelMode::kernel_linear;
  double sigma_k = 0.5;
  int cell_size = 4;
  int init_iterations = 10;
  int update_iterations = 3;
  double label_sigma_factor = kDefaultLabelSigmaFactor;
  int max_cells = 64 * 64;
  int max_secondary_peaks = kMaxSecondaryPeaks;
  ScaleConfig scale;
  double scale_eta = 0.015;
  bool estimate_scale = true;
  bool multimodal = true;      // false: unimodal detection only
  bool always_update = false;  // true: bypass the confidence gate

  void validate() const {
    detail::require(padding >= 0 && std::isfinite(padding), "config: padding must be >= 0");
    detail::require(eta >= 0 && eta <= 1, "config: eta must be in [0,1]");
    detail::require(scale_eta >= 0 && scale_eta <= 1, "config: scale_eta must be in [0,1]");
    detail::require(theta > 0 && theta <= 1, "config: theta must be in (0,1]");
    detail::require(beta1 > 0 && beta2 > 0, "config: beta1 and beta2 must be positive");
    detail::require(C > 0 && std::isfinite(C), "config: C must be positive");
    detail::require(sigma_k > 0, "config: sigma_k must be positive");
    detail::require(cell_size > 0, "config: cell_size must be positive");
    detail::require(init_iterations >= 1 && update_iterations >= 1,
                    "config: iteration counts must be >= 1");
    detail::require(label_sigma_factor > 0, "config: label_sigma_factor must be positive");
    detail::require(max_cells >= 16, "config: max_cells must be >= 16");
    detail::require(max_secondary_peaks >= 0, "config: max_secondary_peaks must be >= 0");
    detail::require(scale.num_scales >= 1 && scale.num_scales % 2 == 1,
                    "config: scale_count must be odd");
    detail::require(scale.scale_step > 1, "config: scale_step must exceed 1");
  }

  friend bool operator==(const TrackerConfig&, const TrackerConfig&) = default;
};

struct TrackerState {
  TrackerConfig config;
  SampleGeometry geometry;
  LabelField labels;
  Size base_size;
  Point center;
  double scale = 1.0;
  DualModel model;
  SlackState slack;
  UpdateGateState gate;
  ScaleModel scale_model;
  int frame_index = 0;
  int frame_width = 0;
  int frame_height = 0;
};

struct FrameOutput {
  int frame_index = 0;
  Rect box;
  double f_max = 0.0;
  double unimodal_f_max = 0.0;  // peak of the primary map before re-detection
  std::optional<double> apce;
  bool updated = false;
  int peaks_considered = 0;
  double scale = 1.0;
  bool lost = false;  // detector could not place any candidate region
};

inline Rect current_box(const TrackerState& s) {
  const Rect r = Rect::around(s.center, {s.base_size.width * s.scale,
                                         s.base_size.height * s.scale});
  return clamp_to_frame(r, s.frame_width, s.frame_height);
}

namespace detail {

inline TrainConfig train_config(const TrackerConfig& c, int iterations) {
  return {c.mode, c.C, c.sigma_k, iterations};
}

inline Point clamp_center(Point p, int w, int h) {
  return {std::clamp(p.x, 0.0, static_cast<double>(w)),
          std::clamp(p.y, 0.0, static_cast<double>(h))};
}

}  // namespace detail

inline TrackerState init(const Image& frame, const Rect& box, const TrackerConfig& config = {}) {
  config.validate();
  detail::require(!frame.empty(), "init: empty frame");
  detail::require(box.valid(), "init: box must have positive area");
  const Rect inside = clamp_to_frame(box, frame.width(), frame.height());
  detail::require(inside.area() > 0, "init: box lies outside the frame");

  TrackerState s;
  s.config = config;
  s.base_size = {box.width, box.height};
  s.center = box.center();
  s.frame_width = frame.width();
  s.frame_height = frame.height();
  s.geometry = SampleGeometry::for_target(s.base_size, config.padding, config.cell_size,
                                          config.max_cells);
  const double target_cells_w =
      std::max(1.0, s.base_size.width / s.geometry.resample_x() / config.cell_size);
  const double target_cells_h =
      std::max(1.0, s.base_size.height / s.geometry.resample_y() / config.cell_size);
  s.labels = build_labels(s.geometry.cells_x, s.geometry.cells_y, target_cells_w,
                          target_cells_h, config.label_sigma_factor);

  const FeatureMap features = s.geometry.sample(frame, s.center, s.scale);
  TrainResult trained = train(features.values, s.labels,
                              detail::train_config(config, config.init_iterations));
  s.model = std::move(trained.model);
  s.slack = std::move(trained.slack);
  s.gate.beta1 = config.beta1;
  s.gate.beta2 = config.beta2;

  s.scale_model = make_scale_model(s.base_size, frame.width(), frame.height(), config.scale);
  s.scale = s.scale_model.current_scale;
  s.scale_model = train_scale(s.scale_model, scale_features(frame, s.center, s.scale_model), 1.0);
  s.frame_index = 1;
  return s;
}

inline FrameOutput step(TrackerState& s, const Image& frame) {
  if (frame.width() != s.frame_width || frame.height() != s.frame_height)
    throw InvalidInput("step: frame size differs from the initial frame");
  ++s.frame_index;
  FrameOutput out;
  out.frame_index = s.frame_index;

  const DetectConfig detect{s.config.theta, s.config.max_secondary_peaks, s.config.multimodal};
  Detection det = multimodal_detect(s.model, s.geometry, frame, s.center, s.scale, detect);
  out.peaks_considered = det.peaks_considered;
  if (!det.ok) {
    out.lost = true;
    out.box = current_box(s);
    out.scale = s.scale;
    return out;
  }
  s.center = detail::clamp_center(det.center, frame.width(), frame.height());

  ScaleFeatures scale_feats;
  bool scale_changed = false;
  if (s.config.estimate_scale) {
    s.scale_model.current_scale = s.scale;
    scale_feats = scale_features(frame, s.center, s.scale_model);
    const double next = estimate_scale(s.scale_model, scale_feats);
    scale_changed = next != s.scale;
    s.scale = next;
    s.scale_model.current_scale = s.scale;
  }

  out.f_max = det.response.f_max;
  out.unimodal_f_max = det.unimodal_f_max;
  out.apce = apce(det.response);
  const GateDecision gate = should_update(s.gate, out.f_max, out.apce);
  s.gate = gate.gate;
  out.updated = gate.update || s.config.always_update;

  if (out.updated) {
    const FeatureMap features = s.geometry.sample(frame, s.center, s.scale);
    TrainResult trained = train(dft2(features.values), s.labels,
                                detail::train_config(s.config, s.config.update_iterations),
                                s.slack);
    s.model = interpolate_model(s.model, trained.model, s.config.eta);
    s.slack = std::move(trained.slack);
    if (s.config.estimate_scale) {
      // Same center and scale give the same pyramid; only re-extract on a change.
      if (scale_changed) scale_feats = scale_features(frame, s.center, s.scale_model);
      s.scale_model = train_scale(s.scale_model, scale_feats, s.config.scale_eta);
    }
  }
  out.box = current_box(s);
  out.scale = s.scale;
  return out;
}

}  // namespace lmcf
