#pragma once

// One-pass evaluation: precision over center-error thresholds 0..50 px
// (error <= t), success over overlap thresholds 0:0.05:1 (overlap > t).
// Frames without ground truth are skipped. Sequences are weighted equally;
// a sequence with no annotated frame is left out of the averages.

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmcf/dataset.hpp"
#include "lmcf/error.hpp"
#include "lmcf/geometry.hpp"
#include "lmcf/results.hpp"
#include "lmcf/tracker.hpp"

namespace lmcf {

inline constexpr int kPrecisionPoints = 51;
inline constexpr int kSuccessPoints = 21;

inline double precision_threshold(int i) { return static_cast<double>(i); }
inline double success_threshold(int i) { return i * 0.05; }

inline double center_error(const Rect& pred, const Rect& gt) {
  const Point a = pred.center(), b = gt.center();
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double overlap(const Rect& pred, const Rect& gt) {
  const double inter = intersect(pred, gt).area();
  const double uni = pred.area() + gt.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

struct MetricCurves {
  std::array<double, kPrecisionPoints> precision{};
  std::array<double, kSuccessPoints> success{};
  double precision_at_20 = 0.0;
  double auc = 0.0;
  int frames = 0;     // annotated frames (per sequence) or sequences (aggregates)

  friend bool operator==(const MetricCurves&, const MetricCurves&) = default;
};

namespace detail {

inline void finish_curves(MetricCurves& m) {
  m.precision_at_20 = m.precision[20];
  double s = 0.0;
  for (double v : m.success) s += v;
  m.auc = s / kSuccessPoints;
}

}  // namespace detail

inline MetricCurves sequence_curves(const std::vector<Rect>& predictions,
                                    const std::vector<std::optional<Rect>>& ground_truth) {
  detail::require(predictions.size() == ground_truth.size(),
                  "sequence_curves: prediction and ground-truth lengths differ");
  MetricCurves m;
  std::array<long, kPrecisionPoints> within{};
  std::array<long, kSuccessPoints> above{};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!ground_truth[i]) continue;
    ++m.frames;
    const double err = center_error(predictions[i], *ground_truth[i]);
    const double ov = overlap(predictions[i], *ground_truth[i]);
    for (int t = 0; t < kPrecisionPoints; ++t)
      if (err <= precision_threshold(t)) ++within[t];
    for (int t = 0; t < kSuccessPoints; ++t)
      if (ov > success_threshold(t)) ++above[t];
  }
  if (m.frames == 0) return m;
  for (int t = 0; t < kPrecisionPoints; ++t) m.precision[t] = double(within[t]) / m.frames;
  for (int t = 0; t < kSuccessPoints; ++t) m.success[t] = double(above[t]) / m.frames;
  detail::finish_curves(m);
  return m;
}

// Equal-weight mean over sequences that have annotated frames.
inline MetricCurves average_curves(const std::vector<MetricCurves>& per_sequence) {
  MetricCurves m;
  for (const auto& c : per_sequence) {
    if (c.frames == 0) continue;
    ++m.frames;
    for (int t = 0; t < kPrecisionPoints; ++t) m.precision[t] += c.precision[t];
    for (int t = 0; t < kSuccessPoints; ++t) m.success[t] += c.success[t];
  }
  if (m.frames == 0) return m;
  for (auto& v : m.precision) v /= m.frames;
  for (auto& v : m.success) v /= m.frames;
  detail::finish_curves(m);
  return m;
}

struct SequenceScore {
  std::string name;
  std::vector<std::string> attributes;
  MetricCurves curves;
  std::optional<double> fps;

  friend bool operator==(const SequenceScore&, const SequenceScore&) = default;
};

struct BenchmarkReport {
  MetricCurves overall;
  std::map<std::string, MetricCurves> by_attribute;
  std::vector<SequenceScore> sequences;

  friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;
};

// Ground truth of one sequence for evaluation.
struct Annotation {
  std::string name;
  std::vector<std::optional<Rect>> ground_truth;
  std::vector<std::string> attributes;
};

inline Annotation annotation_of(const Sequence& s) { return {s.name, s.ground_truth, s.attributes}; }

inline std::optional<double> mean_fps(const ResultLog& log) {
  double total = 0.0;
  int n = 0;
  for (const auto& r : log.records)
    if (r.latency_ms) {
      total += *r.latency_ms;
      ++n;
    }
  if (n == 0 || !(total > 0.0)) return std::nullopt;
  return 1000.0 * n / total;
}

inline BenchmarkReport evaluate(const std::vector<ResultLog>& logs,
                                const std::vector<Annotation>& sequences) {
  if (logs.size() != sequences.size())
    throw InvalidInput("evaluate: " + std::to_string(logs.size()) + " logs for " +
                       std::to_string(sequences.size()) + " sequences");
  BenchmarkReport report;
  std::map<std::string, std::vector<MetricCurves>> tagged;
  std::vector<MetricCurves> all;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const Annotation& seq = sequences[i];
    if (logs[i].records.size() != seq.ground_truth.size())
      throw InvalidInput("evaluate: sequence " + seq.name + " has " +
                         std::to_string(seq.ground_truth.size()) + " frames but its log has " +
                         std::to_string(logs[i].records.size()) + " records");
    std::vector<Rect> boxes;
    boxes.reserve(logs[i].records.size());
    for (const auto& r : logs[i].records) boxes.push_back(r.box);
    SequenceScore score{seq.name, seq.attributes, sequence_curves(boxes, seq.ground_truth),
                        mean_fps(logs[i])};
    all.push_back(score.curves);
    for (const auto& tag : seq.attributes) tagged[tag].push_back(score.curves);
    report.sequences.push_back(std::move(score));
  }
  report.overall = average_curves(all);
  for (const auto& [tag, curves] : tagged) report.by_attribute[tag] = average_curves(curves);
  return report;
}

// ---- report serialization -------------------------------------------------

namespace detail {

inline nlohmann::json curves_json(const MetricCurves& m) {
  return {{"precision", m.precision}, {"success", m.success}, {"precision_at_20", m.precision_at_20},
          {"auc", m.auc}, {"count", m.frames}};
}

inline MetricCurves curves_from_json(const nlohmann::json& j) {
  MetricCurves m;
  m.precision = j.at("precision").get<std::array<double, kPrecisionPoints>>();
  m.success = j.at("success").get<std::array<double, kSuccessPoints>>();
  m.precision_at_20 = j.at("precision_at_20").get<double>();
  m.auc = j.at("auc").get<double>();
  m.frames = j.at("count").get<int>();
  return m;
}

}  // namespace detail

inline nlohmann::json report_json(const BenchmarkReport& r) {
  nlohmann::json j;
  j["overall"] = detail::curves_json(r.overall);
  j["attributes"] = nlohmann::json::object();
  for (const auto& [tag, c] : r.by_attribute) j["attributes"][tag] = detail::curves_json(c);
  j["sequences"] = nlohmann::json::array();
  for (const auto& s : r.sequences) {
    nlohmann::json e = {{"name", s.name}, {"attributes", s.attributes},
                        {"curves", detail::curves_json(s.curves)}};
    e["fps"] = s.fps ? nlohmann::json(*s.fps) : nlohmann::json(nullptr);
    j["sequences"].push_back(e);
  }
  return j;
}

inline BenchmarkReport report_from_json(const nlohmann::json& j) {
  BenchmarkReport r;
  try {
    r.overall = detail::curves_from_json(j.at("overall"));
    for (const auto& [tag, c] : j.at("attributes").items())
      r.by_attribute[tag] = detail::curves_from_json(c);
    for (const auto& e : j.at("sequences")) {
      SequenceScore s;
      s.name = e.at("name").get<std::string>();
      s.attributes = e.at("attributes").get<std::vector<std::string>>();
      s.curves = detail::curves_from_json(e.at("curves"));
      if (!e.at("fps").is_null()) s.fps = e.at("fps").get<double>();
      r.sequences.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
  return r;
}

// report.json plus threshold,value CSV tables for the overall curves and for
// every attribute (precision_<TAG>.csv, success_<TAG>.csv).
inline void write_report(const BenchmarkReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw Error("report: cannot write " + (dir / "report.json").string());
    out << report_json(r).dump(2) << '\n';
  }
  auto write_csv = [&](const std::string& file, auto&& threshold, const auto& values) {
    std::ofstream out(dir / file);
    if (!out) throw Error("report: cannot write " + (dir / file).string());
    out << "threshold,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      out << detail::format_real(threshold(static_cast<int>(i))) << ','
          << detail::format_real(values[i]) << '\n';
  };
  write_csv("precision.csv", precision_threshold, r.overall.precision);
  write_csv("success.csv", success_threshold, r.overall.success);
  for (const auto& [tag, c] : r.by_attribute) {
    write_csv("precision_" + tag + ".csv", precision_threshold, c.precision);
    write_csv("success_" + tag + ".csv", success_threshold, c.success);
  }
}

// ---- running a tracker over a sequence ------------------------------------

// Tracks frames [0, count) from `init_box` on frame 0. The first record is the
// initialization frame (box = init box, updated = true). Latency is recorded
// only on request so logs stay bit-reproducible.
inline ResultLog run_tracker(const std::string& name, int count,
                             const std::function<Image(int)>& frame_at, const Rect& init_box,
                             const TrackerConfig& config, bool record_latency = false,
                             const std::function<void(int, const Image&, const FrameRecord&)>& on_frame = {}) {
  detail::require(count >= 1, "run_tracker: sequence has no frames");
  using clock = std::chrono::steady_clock;
  ResultLog log{name, config, {}};
  log.records.reserve(count);

  Image frame = frame_at(0);
  auto t0 = clock::now();
  TrackerState state = init(frame, init_box, config);
  auto t1 = clock::now();
  FrameRecord first{1, current_box(state), 0.0, std::nullopt, true, 0, state.scale, false, std::nullopt};
  if (record_latency) first.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (on_frame) on_frame(0, frame, first);
  log.records.push_back(first);

  for (int i = 1; i < count; ++i) {
    frame = frame_at(i);
    t0 = clock::now();
    const FrameOutput out = step(state, frame);
    t1 = clock::now();
    FrameRecord rec = to_record(out);
    if (record_latency) rec.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (on_frame) on_frame(i, frame, rec);
    log.records.push_back(rec);
  }
  return log;
}

}  // namespace lmcf
