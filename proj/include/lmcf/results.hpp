#pragma once

// Per-frame result log, stored as JSON lines:
//   {"format":"lmcf-results","version":1,"sequence":"...","config":{...}}
//   {"frame":1,"box":[x,y,w,h],"f_max":...,"apce":...|null,"updated":true,...}
// Reals are printed in shortest round-trip form, so a re-read log compares
// equal to the written one.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmcf/config.hpp"
#include "lmcf/error.hpp"
#include "lmcf/geometry.hpp"
#include "lmcf/tracker.hpp"

namespace lmcf {

inline constexpr const char* kResultFormat = "lmcf-results";
inline constexpr int kResultVersion = 1;

struct FrameRecord {
  int frame_index = 0;
  Rect box;
  double f_max = 0.0;
  std::optional<double> apce;
  bool updated = false;
  int peaks_considered = 0;
  double scale = 1.0;
  bool lost = false;
  std::optional<double> latency_ms;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct ResultLog {
  std::string sequence;
  TrackerConfig config;
  std::vector<FrameRecord> records;

  friend bool operator==(const ResultLog&, const ResultLog&) = default;
};

inline FrameRecord to_record(const FrameOutput& out) {
  return {out.frame_index, out.box, out.f_max, out.apce, out.updated, out.peaks_considered,
          out.scale, out.lost, std::nullopt};
}

namespace detail {

using nlohmann::json;

inline json record_json(const FrameRecord& r) {
  json j;
  j["frame"] = r.frame_index;
  j["box"] = {r.box.x, r.box.y, r.box.width, r.box.height};
  j["f_max"] = r.f_max;
  j["apce"] = r.apce ? json(*r.apce) : json(nullptr);
  j["updated"] = r.updated;
  j["peaks"] = r.peaks_considered;
  j["scale"] = r.scale;
  j["lost"] = r.lost;
  if (r.latency_ms) j["latency_ms"] = *r.latency_ms;
  return j;
}

inline FrameRecord record_from_json(const json& j) {
  FrameRecord r;
  r.frame_index = j.at("frame").get<int>();
  const auto& b = j.at("box");
  if (!b.is_array() || b.size() != 4) throw FormatError("box must have 4 entries");
  r.box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  r.f_max = j.at("f_max").get<double>();
  if (!j.at("apce").is_null()) r.apce = j.at("apce").get<double>();
  r.updated = j.at("updated").get<bool>();
  r.peaks_considered = j.at("peaks").get<int>();
  r.scale = j.at("scale").get<double>();
  r.lost = j.at("lost").get<bool>();
  if (j.contains("latency_ms")) r.latency_ms = j.at("latency_ms").get<double>();
  return r;
}

}  // namespace detail

inline nlohmann::json config_json(const TrackerConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : config_entries(c)) j[k] = v;
  return j;
}

inline TrackerConfig config_from_json(const nlohmann::json& j) {
  TrackerConfig c;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw FormatError("config entry '" + k + "' must be a string");
    if (!apply_config_entry(c, k, v.get<std::string>()))
      throw FormatError("config: unknown key '" + k + "'");
  }
  return c;
}

inline void write_results(const ResultLog& log, std::ostream& out) {
  nlohmann::json header;
  header["format"] = kResultFormat;
  header["version"] = kResultVersion;
  header["sequence"] = log.sequence;
  header["config"] = config_json(log.config);
  out << header.dump() << '\n';
  for (const auto& r : log.records) out << detail::record_json(r).dump() << '\n';
}

inline ResultLog read_results(std::istream& in) {
  ResultLog log;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = "results line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw FormatError(where + ": not valid JSON");
    }
    try {
      if (!have_header) {
        if (!j.is_object() || j.value("format", std::string{}) != kResultFormat)
          throw FormatError(where + ": missing results header");
        const int version = j.at("version").get<int>();
        if (version != kResultVersion)
          throw FormatError(where + ": unsupported results version " + std::to_string(version));
        log.sequence = j.at("sequence").get<std::string>();
        log.config = config_from_json(j.at("config"));
        have_header = true;
      } else {
        log.records.push_back(detail::record_from_json(j));
      }
    } catch (const FormatError& e) {
      if (std::string_view(e.what()).starts_with("results line")) throw;
      throw FormatError(where + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  if (!have_header) throw FormatError("results: empty file, header missing");
  return log;
}

inline void write_results(const ResultLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("results: cannot write " + path);
  write_results(log, out);
  if (!out) throw Error("results: write failed for " + path);
}

inline ResultLog read_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("results: cannot open " + path);
  return read_results(in);
}

}  // namespace lmcf
