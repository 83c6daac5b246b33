#include <gtest/gtest.h>

#include <numbers>

#include "lmcf/scale.hpp"
#include "lmcf/synthetic.hpp"
#include "support.hpp"

namespace lmcf {
namespace {

TEST(ScaleModel, LevelsAndWindow) {
  const ScaleModel m = make_scale_model({40, 20}, 320, 240);
  ASSERT_EQ(m.num_levels(), 33);
  EXPECT_EQ(m.exponents.front(), -16);
  EXPECT_EQ(m.exponents.back(), 16);
  EXPECT_EQ(m.level_factor(16), 1.0);
  EXPECT_DOUBLE_EQ(m.level_factor(17), 1.02);
  EXPECT_DOUBLE_EQ(m.level_window[16], 1.0);
  for (int i = 0; i < 33; ++i) EXPECT_NEAR(m.level_window[i], m.level_window[32 - i], 1e-15);
  EXPECT_EQ(m.template_w, 32);
  EXPECT_EQ(m.template_h, 16);
  EXPECT_EQ(m.current_scale, 1.0);
  EXPECT_DOUBLE_EQ(m.min_scale, 8.0 / 20.0);
  EXPECT_DOUBLE_EQ(m.max_scale, 8.0);
  EXPECT_FALSE(m.trained);
}

TEST(ScaleModel, RejectsBadConfig) {
  ScaleConfig even;
  even.num_scales = 32;
  EXPECT_THROW(make_scale_model({10, 10}, 100, 100, even), InvalidInput);
  ScaleConfig step;
  step.scale_step = 1.0;
  EXPECT_THROW(make_scale_model({10, 10}, 100, 100, step), InvalidInput);
  EXPECT_THROW(make_scale_model({0, 10}, 100, 100), InvalidInput);
}

TEST(ScaleModel, LevelDftMatchesDirectSum) {
  std::mt19937_64 rng(1);
  for (int S : {1, 5, 33}) {
    const ScaleFeatures f = ScaleFeatures::Random(S, 7);
    const Eigen::MatrixXcd got = detail::fft_columns(f);
    for (int k = 0; k < S; ++k)
      for (int j = 0; j < 7; ++j) {
        std::complex<double> acc = 0;
        for (int n = 0; n < S; ++n)
          acc += f(n, j) * std::polar(1.0, -2.0 * std::numbers::pi * k * n / S);
        EXPECT_LT(std::abs(got(k, j) - acc), 1e-10);
      }
  }
}

TEST(ScaleModel, UntrainedKeepsCurrentScale) {
  ScaleModel m = make_scale_model({32, 32}, 320, 240);
  m.current_scale = 1.3;
  std::mt19937_64 rng(2);
  const Image img = test::noise_image(rng, 320, 240);
  EXPECT_EQ(estimate_scale(m, scale_features(img, {160, 120}, m)), 1.3);
}

TEST(ScaleModel, StaticFrameStaysAtIdentity) {
  SynthSpec spec;
  spec.length = 1;
  const SyntheticSequence seq = synthesize_sequence(spec);
  const Point c = seq.ground_truth[0].center();
  ScaleModel m = make_scale_model(Size{seq.ground_truth[0].width, seq.ground_truth[0].height}, 320, 240);
  const ScaleFeatures f = scale_features(seq.frames[0], c, m);
  m = train_scale(m, f, 1.0);
  const std::vector<double> r = scale_response(m, f);
  ASSERT_EQ(r.size(), 33u);
  EXPECT_EQ(std::max_element(r.begin(), r.end()) - r.begin(), 16);
  EXPECT_EQ(estimate_scale(m, f), 1.0);
}

TEST(ScaleModel, SingleLevelIsFixedScale) {
  ScaleConfig cfg;
  cfg.num_scales = 1;
  ScaleModel m = make_scale_model({32, 32}, 320, 240, cfg);
  std::mt19937_64 rng(3);
  const Image img = test::noise_image(rng, 320, 240);
  const ScaleFeatures f = scale_features(img, {160, 120}, m);
  m = train_scale(m, f, 1.0);
  EXPECT_EQ(estimate_scale(m, f), 1.0);
}

TEST(ScaleModel, RecoversGrowth) {
  SynthSpec spec;
  spec.kind = SynthKind::scale_ramp;
  spec.length = 11;
  spec.scale_rate = 1.02;
  const SyntheticSequence seq = synthesize_sequence(spec);
  const Point c = seq.ground_truth[0].center();
  ScaleModel m = make_scale_model(Size{seq.ground_truth[0].width, seq.ground_truth[0].height}, 320, 240);
  m = train_scale(m, scale_features(seq.frames[0], c, m), 1.0);
  const double s = estimate_scale(m, scale_features(seq.frames[10], c, m));
  EXPECT_NEAR(std::log(s) / std::log(1.02), 10.0, 2.0);
}

TEST(ScaleModel, ClampedToMinimumTargetSize) {
  ScaleModel m = make_scale_model({10, 12}, 200, 200);
  EXPECT_DOUBLE_EQ(m.min_scale, 0.8);
  EXPECT_EQ(m.current_scale, 1.0);
  // A tiny target starts clamped up to the 8 px floor.
  const ScaleModel tiny = make_scale_model({4, 4}, 200, 200);
  EXPECT_EQ(tiny.current_scale, 2.0);
  // Any estimate on a trained model stays within the bounds.
  std::mt19937_64 rng(4);
  const Image img = test::noise_image(rng, 200, 200);
  m = train_scale(m, scale_features(img, {100, 100}, m), 1.0);
  m.current_scale = m.min_scale;
  const Image other = test::noise_image(rng, 200, 200);
  const double s = estimate_scale(m, scale_features(other, {100, 100}, m));
  EXPECT_GE(s * 10, 8.0 - 1e-12);
  EXPECT_LE(s, m.max_scale);
}

TEST(TrainScale, InterpolationEndpoints) {
  std::mt19937_64 rng(5);
  const Image a = test::noise_image(rng, 160, 120);
  const Image b = test::noise_image(rng, 160, 120);
  ScaleModel m = make_scale_model({30, 30}, 160, 120);
  const ScaleFeatures fa = scale_features(a, {80, 60}, m);
  const ScaleFeatures fb = scale_features(b, {80, 60}, m);
  const ScaleModel ma = train_scale(m, fa, 0.3);  // first call adopts outright
  EXPECT_EQ(ma, train_scale(m, fa, 1.0));
  EXPECT_EQ(train_scale(ma, fb, 0.0), ma);
  const ScaleModel mb = train_scale(m, fb, 1.0);
  const ScaleModel one = train_scale(ma, fb, 1.0);
  EXPECT_LT((one.numerator - mb.numerator).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((one.denominator - mb.denominator).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TrainScale, FixedPointUnderRepeatedTraining) {
  std::mt19937_64 rng(6);
  const Image a = test::noise_image(rng, 160, 120);
  ScaleModel m = make_scale_model({30, 30}, 160, 120);
  const ScaleFeatures f = scale_features(a, {80, 60}, m);
  const ScaleModel once = train_scale(m, f, 1.0);
  const ScaleModel again = train_scale(once, f, 0.4);
  EXPECT_LT((again.numerator - once.numerator).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((again.denominator - once.denominator).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(TrainScale, RejectsBadInput) {
  ScaleModel m = make_scale_model({30, 30}, 160, 120);
  EXPECT_THROW(train_scale(m, ScaleFeatures::Zero(5, 3), 0.5), InvalidInput);
  EXPECT_THROW(train_scale(m, ScaleFeatures::Zero(33, 3), 1.5), InvalidInput);
}

TEST(ScaleFeatures, LevelsOutsideFrameAreZero) {
  std::mt19937_64 rng(7);
  const Image img = test::noise_image(rng, 100, 100);
  ScaleModel m = make_scale_model({20, 20}, 100, 100);
  const ScaleFeatures f = scale_features(img, {-1000, -1000}, m);
  EXPECT_EQ(f.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(f.rows(), 33);
  EXPECT_EQ(f.cols(), 8 * 8 * 31);
}

}  // namespace
}  // namespace lmcf
