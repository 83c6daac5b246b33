#pragma once

// OTB on-disk sequences:
//   <seq>/img/0001.jpg ...           frames (.jpg/.png, sorted by numeric name)
//   <seq>/groundtruth_rect.txt       one "x,y,w,h" per frame, 1-indexed
//   <seq>/attributes.txt (optional)  sidecar, key = value:
//       tags = SV, OCC, ...
//       start_frame = 300            first frame the annotation refers to
//       end_frame = 770              last frame (inclusive) to keep
// Boxes are converted to 0-indexed coordinates here. Annotation lines with
// non-finite or non-positive sizes are kept as missing entries.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lmcf/config.hpp"
#include "lmcf/error.hpp"
#include "lmcf/geometry.hpp"

namespace lmcf {

struct Sequence {
  std::string name;
  std::filesystem::path root;
  std::vector<std::filesystem::path> frames;
  std::vector<std::optional<Rect>> ground_truth;  // 0-indexed, one per frame
  std::vector<std::string> attributes;
  int start_frame = 1;  // 1-based file position of frames[0]
  std::vector<std::string> warnings;

  int length() const noexcept { return static_cast<int>(frames.size()); }
  bool has_ground_truth() const noexcept {
    return std::any_of(ground_truth.begin(), ground_truth.end(),
                       [](const auto& r) { return r.has_value(); });
  }
};

enum class LoadMode { benchmark, track_only };

// Parses one annotation line (1-indexed). Returns nullopt for a missing
// annotation; throws FormatError naming the line when unparseable.
inline std::optional<Rect> parse_ground_truth_line(const std::string& line, int line_no) {
  std::string s = line;
  for (char& c : s)
    if (c == ',' || c == '\t' || c == ';') c = ' ';
  std::istringstream in(s);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    double x = 0.0;
    std::string lower = tok;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "nan") {
      x = std::nan("");
    } else if (!detail::parse_real(tok, x)) {
      throw FormatError("ground truth line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
    }
    v.push_back(x);
  }
  if (v.size() != 4)
    throw FormatError("ground truth line " + std::to_string(line_no) + ": expected 4 values, got " +
                      std::to_string(v.size()));
  const Rect r{v[0] - 1.0, v[1] - 1.0, v[2], v[3]};
  if (!r.valid()) return std::nullopt;
  return r;
}

inline std::vector<std::optional<Rect>> parse_ground_truth(std::istream& in) {
  std::vector<std::optional<Rect>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    out.push_back(parse_ground_truth_line(line, line_no));
  }
  return out;
}

namespace detail {

inline bool is_frame_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png";
}

// Numeric stems sort by value, anything else lexicographically after them.
inline bool frame_less(const std::filesystem::path& a, const std::filesystem::path& b) {
  const std::string sa = a.stem().string(), sb = b.stem().string();
  const bool na = !sa.empty() && std::all_of(sa.begin(), sa.end(), ::isdigit);
  const bool nb = !sb.empty() && std::all_of(sb.begin(), sb.end(), ::isdigit);
  if (na && nb) {
    const auto ia = std::stoull(sa), ib = std::stoull(sb);
    if (ia != ib) return ia < ib;
  } else if (na != nb) {
    return na;
  }
  return a.filename() < b.filename();
}

inline void read_sidecar(const std::filesystem::path& file, Sequence& seq,
                         std::optional<int>& end_frame) {
  std::ifstream in(file);
  if (!in) throw FormatError("attributes: cannot open " + file.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const std::string where = file.filename().string() + " line " + std::to_string(line_no);
    if (eq == std::string::npos) throw FormatError(where + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "tags") {
      std::string v = value;
      std::replace(v.begin(), v.end(), ',', ' ');
      std::istringstream tags(v);
      std::string tag;
      while (tags >> tag) seq.attributes.push_back(tag);
    } else if (key == "start_frame" || key == "end_frame") {
      int n = 0;
      if (!parse_int(value, n) || n < 1) throw FormatError(where + ": bad frame number");
      if (key == "start_frame") seq.start_frame = n;
      else end_frame = n;
    } else {
      throw FormatError(where + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace detail

inline Sequence load_sequence(const std::filesystem::path& dir, LoadMode mode = LoadMode::benchmark) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw FormatError("sequence: not a directory: " + dir.string());
  Sequence seq;
  seq.root = dir;
  seq.name = fs::path(dir).lexically_normal().filename().string();
  if (seq.name.empty()) seq.name = fs::path(dir).lexically_normal().parent_path().filename().string();

  const fs::path img = dir / "img";
  if (!fs::is_directory(img)) throw FormatError("sequence " + seq.name + ": missing img/ directory");
  std::vector<fs::path> all;
  for (const auto& e : fs::directory_iterator(img))
    if (e.is_regular_file() && detail::is_frame_file(e.path())) all.push_back(e.path());
  std::sort(all.begin(), all.end(), detail::frame_less);
  if (all.empty()) throw FormatError("sequence " + seq.name + ": no .jpg/.png frames in img/");

  std::optional<int> end_frame;
  if (fs::exists(dir / "attributes.txt")) detail::read_sidecar(dir / "attributes.txt", seq, end_frame);
  const int first = seq.start_frame - 1;
  const int last = std::min<int>(static_cast<int>(all.size()), end_frame.value_or(static_cast<int>(all.size())));
  if (first >= last)
    throw FormatError("sequence " + seq.name + ": start_frame beyond the available frames");
  seq.frames.assign(all.begin() + first, all.begin() + last);

  const fs::path gt_file = dir / "groundtruth_rect.txt";
  if (!fs::exists(gt_file)) {
    if (mode == LoadMode::benchmark)
      throw FormatError("sequence " + seq.name + ": missing groundtruth_rect.txt");
    seq.warnings.push_back("missing groundtruth_rect.txt");
    seq.ground_truth.assign(seq.frames.size(), std::nullopt);
    return seq;
  }
  std::ifstream in(gt_file);
  if (!in) throw FormatError("sequence " + seq.name + ": cannot read groundtruth_rect.txt");
  try {
    seq.ground_truth = parse_ground_truth(in);
  } catch (const FormatError& e) {
    throw FormatError("sequence " + seq.name + ": " + e.what());
  }
  if (seq.ground_truth.size() != seq.frames.size()) {
    seq.warnings.push_back("ground truth has " + std::to_string(seq.ground_truth.size()) +
                           " entries for " + std::to_string(seq.frames.size()) + " frames");
    seq.ground_truth.resize(seq.frames.size());  // truncate, or pad with missing entries
  }
  return seq;
}

// Sorted sequence directories (those containing img/) under a dataset root.
inline std::vector<std::filesystem::path> list_sequences(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw FormatError("dataset: not a directory: " + root.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory() && fs::is_directory(e.path() / "img")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lmcf
