#pragma once

// Flat `key = value` text form of TrackerConfig. Blank lines and `#` comments
// are ignored; unknown keys and malformed values are errors naming the line.
// Reals are written in shortest round-trip form so parse(serialize(c)) == c.

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "lmcf/error.hpp"
#include "lmcf/tracker.hpp"

namespace lmcf {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline bool parse_real(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "1") { out = true; return true; }
  if (s == "false" || s == "0") { out = false; return true; }
  return false;
}

struct ConfigField {
  std::string key;
  std::function<std::string(const TrackerConfig&)> get;
  std::function<bool(TrackerConfig&, std::string_view)> set;
};

template <typename T>
ConfigField real_field(std::string key, T TrackerConfig::*member) {
  return {std::move(key), [member](const TrackerConfig& c) { return format_real(c.*member); },
          [member](TrackerConfig& c, std::string_view v) { return parse_real(v, c.*member); }};
}

inline ConfigField int_field(std::string key, int TrackerConfig::*member) {
  return {std::move(key), [member](const TrackerConfig& c) { return std::to_string(c.*member); },
          [member](TrackerConfig& c, std::string_view v) { return parse_int(v, c.*member); }};
}

inline ConfigField bool_field(std::string key, bool TrackerConfig::*member) {
  return {std::move(key), [member](const TrackerConfig& c) { return std::string(c.*member ? "true" : "false"); },
          [member](TrackerConfig& c, std::string_view v) { return parse_bool(v, c.*member); }};
}

inline const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      real_field("padding", &TrackerConfig::padding),
      real_field("eta", &TrackerConfig::eta),
      real_field("theta", &TrackerConfig::theta),
      real_field("beta1", &TrackerConfig::beta1),
      real_field("beta2", &TrackerConfig::beta2),
      real_field("C", &TrackerConfig::C),
      {"mode", [](const TrackerConfig& c) { return std::string(to_string(c.mode)); },
       [](TrackerConfig& c, std::string_view v) {
         const auto m = parse_model_mode(v);
         if (m) c.mode = *m;
         return m.has_value();
       }},
      real_field("sigma_k", &TrackerConfig::sigma_k),
      int_field("cell_size", &TrackerConfig::cell_size),
      int_field("init_iterations", &TrackerConfig::init_iterations),
      int_field("update_iterations", &TrackerConfig::update_iterations),
      real_field("label_sigma_factor", &TrackerConfig::label_sigma_factor),
      int_field("max_cells", &TrackerConfig::max_cells),
      int_field("max_secondary_peaks", &TrackerConfig::max_secondary_peaks),
      {"scale_count", [](const TrackerConfig& c) { return std::to_string(c.scale.num_scales); },
       [](TrackerConfig& c, std::string_view v) { return parse_int(v, c.scale.num_scales); }},
      {"scale_step", [](const TrackerConfig& c) { return format_real(c.scale.scale_step); },
       [](TrackerConfig& c, std::string_view v) { return parse_real(v, c.scale.scale_step); }},
      {"scale_sigma", [](const TrackerConfig& c) { return format_real(c.scale.label_sigma); },
       [](TrackerConfig& c, std::string_view v) { return parse_real(v, c.scale.label_sigma); }},
      {"scale_lambda", [](const TrackerConfig& c) { return format_real(c.scale.lambda); },
       [](TrackerConfig& c, std::string_view v) { return parse_real(v, c.scale.lambda); }},
      {"scale_template", [](const TrackerConfig& c) { return std::to_string(c.scale.template_max_side); },
       [](TrackerConfig& c, std::string_view v) { return parse_int(v, c.scale.template_max_side); }},
      {"scale_cell_size", [](const TrackerConfig& c) { return std::to_string(c.scale.cell_size); },
       [](TrackerConfig& c, std::string_view v) { return parse_int(v, c.scale.cell_size); }},
      {"scale_min_target", [](const TrackerConfig& c) { return format_real(c.scale.min_target_px); },
       [](TrackerConfig& c, std::string_view v) { return parse_real(v, c.scale.min_target_px); }},
      real_field("scale_eta", &TrackerConfig::scale_eta),
      bool_field("estimate_scale", &TrackerConfig::estimate_scale),
      bool_field("multimodal", &TrackerConfig::multimodal),
      bool_field("always_update", &TrackerConfig::always_update),
  };
  return fields;
}

}  // namespace detail

// Ordered (key, value) pairs covering every field.
inline std::vector<std::pair<std::string, std::string>> config_entries(const TrackerConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : detail::config_fields()) out.emplace_back(f.key, f.get(c));
  return out;
}

// Applies one entry on top of `c`; returns false for an unknown key, throws
// FormatError for a malformed value.
inline bool apply_config_entry(TrackerConfig& c, std::string_view key, std::string_view value) {
  for (const auto& f : detail::config_fields()) {
    if (f.key != key) continue;
    if (!f.set(c, value))
      throw FormatError("config: bad value '" + std::string(value) + "' for " + std::string(key));
    return true;
  }
  return false;
}

inline std::string serialize_config(const TrackerConfig& c) {
  std::string out;
  for (const auto& [k, v] : config_entries(c)) out += k + " = " + v + "\n";
  return out;
}

// Keys absent from the text keep their value in `base`.
inline TrackerConfig parse_config(std::string_view text, TrackerConfig base = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string::npos) throw FormatError(where + ": expected key = value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    try {
      if (!apply_config_entry(base, key, value))
        throw FormatError(where + ": unknown key '" + key + "'");
    } catch (const FormatError& e) {
      if (std::string_view(e.what()).starts_with("config line")) throw;
      throw FormatError(where + ": bad value '" + value + "' for " + key);
    }
  }
  try {
    base.validate();
  } catch (const InvalidInput& e) {
    throw FormatError(e.what());
  }
  return base;
}

inline TrackerConfig load_config(const std::string& path, TrackerConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw FormatError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

}  // namespace lmcf
