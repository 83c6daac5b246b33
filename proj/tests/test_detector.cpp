#include <gtest/gtest.h>

#include "lmcf/detector.hpp"
#include "lmcf/labels.hpp"
#include "lmcf/synthetic.hpp"
#include "lmcf/testing/dense_oracle.hpp"
#include "support.hpp"

namespace lmcf {
namespace {

ResponseMap map_of(int w, int h, std::initializer_list<std::tuple<int, int, double>> entries,
                   double base = 0.0) {
  RealGrid g(w, h, 1, base);
  for (auto [x, y, v] : entries) g(x, y) = v;
  return ResponseMap::from_values(std::move(g));
}

TEST(Respond, MatchesBruteForceOverAllShifts) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 1 + rng() % 8, h = 1 + rng() % 8, d = 1 + rng() % 3;
    const RealGrid x = test::random_grid(rng, w, h, d);
    const RealGrid cand = test::random_grid(rng, w, h, d);
    const LabelField labels = build_labels(w, h, 2, 2, 0.3);
    const DualModel m = train(x, labels, {ModelMode::linear, 10.0, 0.5, 2}).model;
    const ResponseMap r = respond(m, dft2(cand));
    EXPECT_LT(test::max_abs_diff(r.values, oracle::response_linear(idft2(m.coefficients), cand)), 1e-6);
    auto v = r.values.values();
    EXPECT_EQ(r.f_max, *std::max_element(v.begin(), v.end()));
    EXPECT_EQ(r.f_min, *std::min_element(v.begin(), v.end()));
    EXPECT_EQ(r.values(r.peak_x, r.peak_y), r.f_max);
  }
}

TEST(Respond, SelfResponsePeaksAtOrigin) {
  std::mt19937_64 rng(2);
  const RealGrid x = apply_window(test::random_grid(rng, 12, 10, 4));
  const LabelField labels = build_labels(12, 10, 5, 4);
  for (ModelMode mode : {ModelMode::linear, ModelMode::kernel_linear, ModelMode::kernel_gaussian}) {
    const DualModel m = train(x, labels, {mode, 1e4, 0.5, 1}).model;
    const ResponseMap r = respond(m, dft2(x));
    EXPECT_EQ(r.peak_x, 0);
    EXPECT_EQ(r.peak_y, 0);
  }
}

TEST(Respond, CyclicShiftMovesPeak) {
  // Periodic texture in feature cells: the candidate is the training map
  // displaced by (3, 2) cells.
  std::mt19937_64 rng(3);
  const RealGrid x = test::random_grid(rng, 16, 12, 3);
  const RealGrid cand = oracle::shifted(x, -3, -2);  // cand[n] = x[n - (3,2)]
  const LabelField labels = build_labels(16, 12, 6, 5);
  for (ModelMode mode : {ModelMode::linear, ModelMode::kernel_linear, ModelMode::kernel_gaussian}) {
    const DualModel m = train(x, labels, {mode, 1e4, 0.5, 3}).model;
    const ResponseMap r = respond(m, dft2(cand));
    EXPECT_EQ(r.peak_x, 3);
    EXPECT_EQ(r.peak_y, 2);
    EXPECT_EQ(r.dx(), 3);
    EXPECT_EQ(r.dy(), 2);
  }
}

TEST(Respond, ZeroModelGivesZeroMap) {
  DualModel m;
  m.mode = ModelMode::kernel_linear;
  m.coefficients = SpectralMap(6, 6);
  m.template_hat = SpectralMap(6, 6, 2, 1.0);
  const ResponseMap r = respond(m, SpectralMap(6, 6, 2, 2.0));
  EXPECT_EQ(r.f_max, 0.0);
  EXPECT_EQ(r.f_min, 0.0);
}

TEST(Respond, ShapeMismatchRejected) {
  DualModel m;
  m.coefficients = SpectralMap(6, 6);
  m.template_hat = SpectralMap(6, 6, 2);
  EXPECT_THROW(respond(m, SpectralMap(6, 5, 2)), InvalidInput);
}

TEST(ResponseMap, WrappedDisplacement) {
  const ResponseMap r = map_of(10, 8, {{7, 3, 1.0}});
  EXPECT_EQ(r.dx(), -3);
  EXPECT_EQ(r.dy(), 3);
  const ResponseMap s = map_of(10, 8, {{5, 4, 1.0}});
  EXPECT_EQ(s.dx(), 5);  // exactly half: not wrapped
  EXPECT_EQ(s.dy(), 4);
}

TEST(FindPeaks, SingleImpulse) {
  const PeakSet p = find_peaks(map_of(10, 10, {{4, 6, 1.0}}), 0.7);
  ASSERT_EQ(p.peaks.size(), 1u);
  EXPECT_EQ(p.peaks[0].x, 4);
  EXPECT_EQ(p.peaks[0].y, 6);
}

TEST(FindPeaks, WeakSecondPeakDropped) {
  const PeakSet p = find_peaks(map_of(20, 20, {{2, 2, 1.0}, {12, 12, 0.6}}), 0.7);
  EXPECT_EQ(p.peaks.size(), 1u);
}

TEST(FindPeaks, StrongSecondPeakKeptInOrder) {
  const PeakSet p = find_peaks(map_of(20, 20, {{12, 12, 0.8}, {2, 2, 1.0}}), 0.7);
  ASSERT_EQ(p.peaks.size(), 2u);
  EXPECT_EQ(p.peaks[0].value, 1.0);
  EXPECT_EQ(p.peaks[1].value, 0.8);
  EXPECT_EQ(p.peaks[1].x, 12);
}

TEST(FindPeaks, ExclusionRadius) {
  EXPECT_EQ(exclusion_radius(20, 20), 2);
  EXPECT_EQ(exclusion_radius(21, 30), 3);
  EXPECT_EQ(exclusion_radius(4, 4), 1);
  // Separate local maxima, but within radius 2 of the stronger one.
  const PeakSet p = find_peaks(map_of(20, 20, {{5, 5, 1.0}, {7, 7, 0.9}}), 0.7);
  EXPECT_EQ(p.peaks.size(), 1u);
  // Exclusion measured with wrap-around: (19, 0) is one cell from (0, 0)... and
  // is also a neighbor, so use (17, 0): wrapped distance 3 > 2, kept.
  const PeakSet q = find_peaks(map_of(20, 20, {{0, 0, 1.0}, {17, 0, 0.9}}), 0.7);
  EXPECT_EQ(q.peaks.size(), 2u);
  const PeakSet r = find_peaks(map_of(20, 20, {{0, 0, 1.0}, {18, 0, 0.9}}), 0.7);
  EXPECT_EQ(r.peaks.size(), 1u);
}

TEST(FindPeaks, CapsSecondaryPeaks) {
  ResponseMap r = map_of(40, 40, {{0, 0, 1.0}, {8, 0, 0.95}, {16, 0, 0.94}, {24, 0, 0.93},
                                  {0, 8, 0.92}, {8, 8, 0.91}, {16, 8, 0.9}, {24, 8, 0.89}});
  const PeakSet p = find_peaks(r, 0.7);
  ASSERT_EQ(p.peaks.size(), 6u);  // global + 5
  EXPECT_EQ(p.peaks.back().value, 0.91);
  EXPECT_EQ(find_peaks(r, 0.7, 2).peaks.size(), 3u);
}

TEST(FindPeaks, PlateauResolvedToLowestIndex) {
  const std::vector<Peak> m = local_maxima(map_of(10, 10, {{3, 3, 1.0}, {4, 3, 1.0}}, -1.0));
  ASSERT_FALSE(m.empty());
  EXPECT_EQ(m[0].x, 3);
  EXPECT_EQ(m[0].y, 3);
  for (const Peak& p : m) EXPECT_FALSE(p.x == 4 && p.y == 3);
}

TEST(FindPeaks, WrappedNeighborhood) {
  // (0, 0) and (9, 9) are neighbors under wrap: only the larger survives.
  const std::vector<Peak> m = local_maxima(map_of(10, 10, {{0, 0, 0.5}, {9, 9, 1.0}}, -1.0));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].x, 9);
}

TEST(FindPeaks, LocationsInvariantUnderConstantOffset) {
  std::mt19937_64 rng(4);
  const RealGrid g = test::random_grid(rng, 16, 12, 1);
  RealGrid h = g;
  for (auto& v : h.values()) v += 3.25;
  const auto a = local_maxima(ResponseMap::from_values(g));
  const auto b = local_maxima(ResponseMap::from_values(h));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
}

TEST(FindPeaks, RatiosAgainstTop) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    RealGrid g = test::random_grid(rng, 12, 12, 1);
    for (auto& v : g.values()) v += 1.0;
    const PeakSet p = find_peaks(ResponseMap::from_values(g), 0.8);
    ASSERT_FALSE(p.peaks.empty());
    auto gv = g.values();
    EXPECT_EQ(p.peaks[0].value, *std::max_element(gv.begin(), gv.end()));
    for (std::size_t i = 1; i < p.peaks.size(); ++i) {
      EXPECT_GE(p.peaks[i].value / p.peaks[0].value, 0.8);
      EXPECT_LE(p.peaks[i].value, p.peaks[i - 1].value);
    }
  }
}

TEST(FindPeaks, ThetaValidated) {
  const ResponseMap r = map_of(5, 5, {{1, 1, 1.0}});
  EXPECT_THROW(find_peaks(r, 0.0), InvalidInput);
  EXPECT_THROW(find_peaks(r, 1.5), InvalidInput);
}

struct Scene {
  SyntheticSequence seq;
  DualModel model;
  SampleGeometry geometry;
};

Scene trained_scene(SynthSpec spec) {
  Scene s;
  s.seq = synthesize_sequence(spec);
  const Rect box = s.seq.ground_truth[0];
  s.geometry = SampleGeometry::for_target({box.width, box.height}, 1.5, 4);
  const LabelField labels = build_labels(s.geometry.cells_x, s.geometry.cells_y, 8, 8);
  s.model = train(s.geometry.sample(s.seq.frames[0], box.center(), 1.0).values, labels,
                  {ModelMode::kernel_linear, 1e4, 0.5, 10})
                .model;
  return s;
}

TEST(MultimodalDetect, SinglePeakSceneMatchesUnimodal) {
  SynthSpec spec;
  spec.length = 4;
  const Scene s = trained_scene(spec);
  const Point prev = s.seq.ground_truth[0].center();
  const Detection multi = multimodal_detect(s.model, s.geometry, s.seq.frames[2], prev, 1.0, {0.7, 5, true});
  const Detection uni = multimodal_detect(s.model, s.geometry, s.seq.frames[2], prev, 1.0, {0.7, 5, false});
  EXPECT_EQ(multi.center, uni.center);
  EXPECT_EQ(multi.winner, 0);
  EXPECT_EQ(multi.response.f_max, uni.response.f_max);
  EXPECT_NEAR(multi.center.x, s.seq.ground_truth[2].center().x, 4.0);
}

TEST(MultimodalDetect, ThetaOneReducesToUnimodal) {
  SynthSpec spec;
  spec.kind = SynthKind::distractor;
  spec.length = 30;
  spec.distractor_start = {100, 120};
  spec.distractor_velocity = {4, 0};
  const Scene s = trained_scene(spec);
  for (int k = 1; k < 30; k += 4) {
    const Point prev = s.seq.ground_truth[k - 1].center();
    const Detection a = multimodal_detect(s.model, s.geometry, s.seq.frames[k], prev, 1.0, {1.0, 5, true});
    const Detection b = multimodal_detect(s.model, s.geometry, s.seq.frames[k], prev, 1.0, {1.0, 5, false});
    EXPECT_EQ(a.center, b.center);
    EXPECT_EQ(a.response.f_max, b.response.f_max);
  }
}

TEST(MultimodalDetect, SelectedPeakNeverBelowUnimodal) {
  std::mt19937_64 rng(6);
  SynthSpec spec;
  spec.kind = SynthKind::distractor;
  spec.length = 40;
  spec.distractor_start = {60, 120};
  spec.distractor_velocity = {5, 0};
  const Scene s = trained_scene(spec);
  for (int k = 1; k < 40; ++k) {
    // Perturbed previous centers exercise off-target primary crops.
    const Point prev{s.seq.ground_truth[k - 1].center().x + double(rng() % 21) - 10.0,
                     s.seq.ground_truth[k - 1].center().y + double(rng() % 21) - 10.0};
    const Detection d = multimodal_detect(s.model, s.geometry, s.seq.frames[k], prev, 1.0, {0.5, 5, true});
    ASSERT_TRUE(d.ok);
    EXPECT_GE(d.response.f_max, d.unimodal_f_max);
    EXPECT_GE(d.peaks_considered, 1);
  }
}

TEST(MultimodalDetect, HoldsPositionWhenCropLeavesFrame) {
  SynthSpec spec;
  spec.length = 2;
  const Scene s = trained_scene(spec);
  const Detection d = multimodal_detect(s.model, s.geometry, s.seq.frames[1], {-500, -500}, 1.0, {});
  EXPECT_FALSE(d.ok);
  EXPECT_EQ(d.center, (Point{-500, -500}));
}

}  // namespace
}  // namespace lmcf
