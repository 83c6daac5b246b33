// lmcf: track OTB-style sequences, run benchmarks, generate synthetic data.
//
// Exit codes: 0 success, 1 data/runtime failure, 2 usage or configuration error.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lmcf/io/frames.hpp"
#include "lmcf/lmcf.hpp"

namespace fs = std::filesystem;
using namespace lmcf;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrackerOptions {
  std::string config_path;
  std::string mode;
  bool no_multimodal = false;
  bool always_update = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "Tracker config file (key = value lines)");
    cmd.add_option("--mode", mode, "Model mode: linear, kernel-linear, kernel-gaussian");
    cmd.add_flag("--no-multimodal", no_multimodal, "Disable multimodal re-detection");
    cmd.add_flag("--always-update", always_update, "Bypass the confidence gate");
  }

  TrackerConfig resolve() const {
    TrackerConfig c;
    try {
      if (!config_path.empty()) c = load_config(config_path, c);
    } catch (const FormatError& e) {
      throw UsageError(e.what());
    }
    if (!mode.empty()) {
      const auto m = parse_model_mode(mode);
      if (!m) throw UsageError("unknown mode '" + mode + "'");
      c.mode = *m;
    }
    if (no_multimodal) c.multimodal = false;
    if (always_update) c.always_update = true;
    return c;
  }
};

Rect parse_box_1indexed(const std::string& text) {
  try {
    const auto r = parse_ground_truth_line(text, 1);
    if (!r) throw UsageError("--init box must have positive size");
    return *r;
  } catch (const FormatError&) {
    throw UsageError("--init expects x,y,w,h");
  }
}

ResultLog track_sequence(const Sequence& seq, const Rect& init_box, const TrackerConfig& config,
                         bool timing, const std::string& overlay_dir) {
  if (!overlay_dir.empty()) fs::create_directories(overlay_dir);
  std::function<void(int, const Image&, const FrameRecord&)> on_frame;
  if (!overlay_dir.empty()) {
    on_frame = [&](int i, const Image& frame, const FrameRecord& r) {
      char name[32];
      std::snprintf(name, sizeof name, "%04d.png", i + 1);
      io::write_overlay(frame, r, fs::path(overlay_dir) / name);
    };
  }
  return run_tracker(
      seq.name, seq.length(), [&](int i) { return io::read_image(seq.frames[i]); }, init_box,
      config, timing, on_frame);
}

int cmd_track(const fs::path& seq_dir, const std::string& out, const TrackerOptions& opts,
              const std::string& init, const std::string& overlay, bool timing) {
  const TrackerConfig config = opts.resolve();
  const std::optional<Rect> forced = init.empty() ? std::nullopt : std::optional(parse_box_1indexed(init));
  const Sequence seq = load_sequence(seq_dir, LoadMode::track_only);
  for (const auto& w : seq.warnings) std::cerr << "warning: " << seq.name << ": " << w << '\n';
  const std::optional<Rect> box = forced ? forced : seq.ground_truth.front();
  if (!box) throw UsageError("sequence " + seq.name + " has no box for its first frame; pass --init");

  const ResultLog log = track_sequence(seq, *box, config, timing, overlay);
  if (out.empty() || out == "-") {
    write_results(log, std::cout);
  } else {
    if (const auto parent = fs::path(out).parent_path(); !parent.empty()) fs::create_directories(parent);
    write_results(log, out);
  }
  if (timing) {
    if (const auto fps = mean_fps(log)) std::cerr << seq.name << ": " << *fps << " fps\n";
  }
  int updates = 0;
  for (const auto& r : log.records) updates += r.updated;
  std::cerr << seq.name << ": " << log.records.size() << " frames, " << updates << " updates\n";
  return 0;
}

void print_summary(const BenchmarkReport& r) {
  std::printf("%-24s %8s %8s %6s\n", "sequence", "DP@20", "AUC", "fps");
  for (const auto& s : r.sequences) {
    if (s.fps)
      std::printf("%-24s %8.3f %8.3f %6.1f\n", s.name.c_str(), s.curves.precision_at_20, s.curves.auc, *s.fps);
    else
      std::printf("%-24s %8.3f %8.3f %6s\n", s.name.c_str(), s.curves.precision_at_20, s.curves.auc, "-");
  }
  for (const auto& [tag, c] : r.by_attribute)
    std::printf("[%s] %-19s %8.3f %8.3f\n", tag.c_str(), "", c.precision_at_20, c.auc);
  std::printf("%-24s %8.3f %8.3f\n", "overall", r.overall.precision_at_20, r.overall.auc);
}

int cmd_bench(std::string dataset, const fs::path& out, const TrackerOptions& opts,
              const std::string& filter, int jobs, const std::string& from_results, bool timing) {
  if (dataset.empty()) {
    if (const char* env = std::getenv("LMCF_DATASET_ROOT")) dataset = env;
  }
  if (dataset.empty()) throw UsageError("bench needs --dataset or LMCF_DATASET_ROOT");
  if (jobs < 1) throw UsageError("--jobs must be >= 1");
  const TrackerConfig config = opts.resolve();

  std::vector<Sequence> sequences;
  for (const auto& dir : list_sequences(dataset)) {
    if (!filter.empty() && dir.filename().string().find(filter) == std::string::npos) continue;
    sequences.push_back(load_sequence(dir, LoadMode::benchmark));
    for (const auto& w : sequences.back().warnings)
      std::cerr << "warning: " << sequences.back().name << ": " << w << '\n';
  }
  if (sequences.empty()) throw Error("no sequences found under " + dataset);

  std::vector<ResultLog> logs(sequences.size());
  const fs::path results_dir = out / "results";
  if (!from_results.empty()) {
    for (std::size_t i = 0; i < sequences.size(); ++i)
      logs[i] = read_results((fs::path(from_results) / (sequences[i].name + ".jsonl")).string());
  } else {
    fs::create_directories(results_dir);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
      for (std::size_t i = next++; i < sequences.size(); i = next++) {
        try {
          const Sequence& s = sequences[i];
          if (!s.ground_truth.front())
            throw Error("sequence " + s.name + " has no box for its first frame");
          logs[i] = track_sequence(s, *s.ground_truth.front(), config, timing, {});
          write_results(logs[i], (results_dir / (s.name + ".jsonl")).string());
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(sequences.size()));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<Annotation> annotations;
  for (const auto& s : sequences) annotations.push_back(annotation_of(s));
  const BenchmarkReport report = evaluate(logs, annotations);
  write_report(report, out);
  print_summary(report);
  return 0;
}

int cmd_synth(const std::string& kind_name, const fs::path& out, SynthSpec spec) {
  const auto kind = parse_synth_kind(kind_name);
  if (!kind) throw UsageError("unknown synthetic kind '" + kind_name + "'");
  spec.kind = *kind;
  SyntheticSequence seq;
  try {
    seq = synthesize_sequence(spec);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  io::write_otb(seq, out);
  std::cerr << "wrote " << seq.frames.size() << " frames to " << out.string() << '\n';
  return 0;
}

// Quick end-to-end check without any dataset on disk.
int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    failures += !ok;
  };

  SynthSpec spec;
  spec.length = 30;
  const SyntheticSequence seq = synthesize_sequence(spec);
  const ResultLog log = run_tracker(
      "selftest", spec.length, [&](int i) { return seq.frames[i]; }, seq.ground_truth[0], {});
  double err = 0.0;
  for (int i = 0; i < spec.length; ++i) err += center_error(log.records[i].box, seq.ground_truth[i]);
  err /= spec.length;
  check(err < 5.0, "translating target tracked (mean center error " + std::to_string(err) + " px)");

  std::stringstream ss;
  write_results(log, ss);
  check(read_results(ss) == log, "result log round trip");
  check(parse_config(serialize_config(TrackerConfig{})) == TrackerConfig{}, "config round trip");

  RealGrid g(3, 2, 1);
  g(1, 0) = 1.0;
  check(apce(ResponseMap::from_values(g)) == 6.0, "APCE of an impulse equals the cell count");
  return failures == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracking with a large-margin correlation filter"};
  app.require_subcommand(1);

  TrackerOptions track_opts;
  std::string seq_dir, track_out, init, overlay;
  bool track_timing = false;
  CLI::App* track = app.add_subcommand("track", "Track one OTB-layout sequence");
  track->add_option("--seq", seq_dir, "Sequence directory (img/, groundtruth_rect.txt)")->required();
  track->add_option("--out", track_out, "Result log path (JSON lines); default stdout");
  track->add_option("--init", init, "Initial box x,y,w,h (1-indexed); default first ground truth");
  track->add_option("--overlay", overlay, "Directory for annotated frames");
  track->add_flag("--timing", track_timing, "Record per-frame latency");
  track_opts.add_to(*track);

  TrackerOptions bench_opts;
  std::string dataset, bench_out = "bench_out", filter, from_results;
  int jobs = 1;
  bool bench_timing = false;
  CLI::App* bench = app.add_subcommand("bench", "Track and score every sequence of a dataset");
  bench->add_option("--dataset", dataset, "Dataset root (default: $LMCF_DATASET_ROOT)");
  bench->add_option("--out", bench_out, "Output directory for logs, report and curves");
  bench->add_option("--filter", filter, "Only sequences whose name contains this text");
  bench->add_option("--jobs", jobs, "Sequences tracked in parallel");
  bench->add_option("--results", from_results, "Score existing logs from this directory instead of tracking");
  bench->add_flag("--timing", bench_timing, "Record per-frame latency");
  bench_opts.add_to(*bench);

  SynthSpec spec;
  std::string kind = "translate", synth_out;
  std::vector<double> velocity, distractor_start, distractor_velocity;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic sequence in OTB layout");
  synth->add_option("--kind", kind, "translate, scale_ramp, occlude, distractor");
  synth->add_option("--out", synth_out, "Sequence directory to create")->required();
  synth->add_option("--length", spec.length, "Number of frames");
  synth->add_option("--seed", spec.seed, "Random seed");
  synth->add_option("--velocity", velocity, "Target velocity vx vy (px/frame)")->expected(2);
  synth->add_option("--scale-rate", spec.scale_rate, "Per-frame scale factor (scale_ramp)");
  synth->add_option("--occlusion-start", spec.occlusion_start, "First occluded frame, 0-indexed");
  synth->add_option("--occlusion-end", spec.occlusion_end, "End of occlusion, exclusive");
  synth->add_option("--distractor-start", distractor_start, "Distractor center x y")->expected(2);
  synth->add_option("--distractor-velocity", distractor_velocity, "Distractor velocity vx vy")->expected(2);
  synth->add_option("--similarity", spec.distractor_similarity, "Distractor texture similarity in [0,1]");

  app.add_subcommand("selftest", "Run built-in end-to-end checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*track) return cmd_track(seq_dir, track_out, track_opts, init, overlay, track_timing);
    if (*bench) return cmd_bench(dataset, bench_out, bench_opts, filter, jobs, from_results, bench_timing);
    if (*synth) {
      if (!velocity.empty()) spec.velocity = {velocity[0], velocity[1]};
      if (!distractor_start.empty()) spec.distractor_start = {distractor_start[0], distractor_start[1]};
      if (!distractor_velocity.empty())
        spec.distractor_velocity = {distractor_velocity[0], distractor_velocity[1]};
      return cmd_synth(kind, synth_out, spec);
    }
    return cmd_selftest();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
