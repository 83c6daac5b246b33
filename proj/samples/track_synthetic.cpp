// Tracks a generated translating target and prints per-frame diagnostics.

#include <cstdio>

#include "lmcf/lmcf.hpp"

int main() {
  lmcf::SynthSpec spec;
  spec.kind = lmcf::SynthKind::translate;
  spec.length = 60;
  const lmcf::SyntheticSequence seq = lmcf::synthesize_sequence(spec);

  lmcf::TrackerState state = lmcf::init(seq.frames[0], seq.ground_truth[0]);
  double total_error = 0.0;
  for (int i = 1; i < spec.length; ++i) {
    const lmcf::FrameOutput out = lmcf::step(state, seq.frames[i]);
    const double err = lmcf::center_error(out.box, seq.ground_truth[i]);
    total_error += err;
    std::printf("frame %3d  box (%.1f, %.1f, %.1f, %.1f)  err %.2f  f_max %.3f  apce %6.1f  %s\n",
                out.frame_index, out.box.x, out.box.y, out.box.width, out.box.height, err,
                out.f_max, out.apce.value_or(0.0), out.updated ? "update" : "hold");
  }
  std::printf("mean center error %.3f px\n", total_error / (spec.length - 1));
  return 0;
}
