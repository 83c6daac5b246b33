#pragma once

// One-dimensional scale filter over a geometric scale pyramid. Each pyramid
// level crops the target at current_scale * step^n, resamples it to a small
// fixed template and flattens its FHOG cells into one row; a regularized
// correlation filter along the level axis then scores every level against a
// Gaussian label centered on the identity level.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "lmcf/error.hpp"
#include "lmcf/features.hpp"
#include "lmcf/hog.hpp"
#include "lmcf/spectral.hpp"

namespace lmcf {

struct ScaleConfig {
  int num_scales = 33;
  double scale_step = 1.02;
  double label_sigma = 1.0;   // in levels
  double lambda = 1e-2;
  int template_max_side = 32;
  int cell_size = 4;
  double min_target_px = 8.0;

  friend bool operator==(const ScaleConfig&, const ScaleConfig&) = default;
};

struct ScaleModel {
  ScaleConfig config;
  Size base_size;
  int template_w = 0;
  int template_h = 0;
  std::vector<double> exponents;     // -(S-1)/2 .. (S-1)/2
  std::vector<double> level_window;  // Hann window across levels
  std::vector<std::complex<double>> label_hat;
  Eigen::MatrixXcd numerator;        // S x Ds
  Eigen::VectorXd denominator;       // S
  double current_scale = 1.0;
  double min_scale = 0.0;
  double max_scale = 0.0;
  bool trained = false;

  int num_levels() const noexcept { return static_cast<int>(exponents.size()); }
  double level_factor(int level) const { return std::pow(config.scale_step, exponents[level]); }

  friend bool operator==(const ScaleModel& a, const ScaleModel& b) {
    return a.config == b.config && a.base_size == b.base_size && a.template_w == b.template_w &&
           a.template_h == b.template_h && a.current_scale == b.current_scale &&
           a.min_scale == b.min_scale && a.max_scale == b.max_scale && a.trained == b.trained &&
           a.numerator.rows() == b.numerator.rows() && a.numerator.cols() == b.numerator.cols() &&
           a.numerator == b.numerator && a.denominator.size() == b.denominator.size() &&
           a.denominator == b.denominator;
  }
};

using ScaleFeatures = Eigen::MatrixXd;  // S x Ds, one row per pyramid level

namespace detail {

inline std::vector<std::complex<double>> fft_column(const Eigen::VectorXd& v) {
  std::vector<std::complex<double>> in(v.data(), v.data() + v.size());
  if (in.size() == 1) return in;  // length-1 DFT is the identity
  std::vector<std::complex<double>> out;
  thread_fft().fwd(out, in);
  return out;
}

// Column-wise DFT along the level axis as a dense product with the S x S DFT
// matrix; S is small and fixed, so this beats per-column FFTs.
inline Eigen::MatrixXcd fft_columns(const ScaleFeatures& f) {
  struct DftMatrix {
    Eigen::MatrixXd cos, sin;
  };
  thread_local std::vector<DftMatrix> cache;
  const Eigen::Index S = f.rows();
  if (static_cast<Eigen::Index>(cache.size()) <= S) cache.resize(S + 1);
  DftMatrix& m = cache[S];
  if (m.cos.rows() != S) {
    m.cos.resize(S, S);
    m.sin.resize(S, S);
    for (Eigen::Index k = 0; k < S; ++k)
      for (Eigen::Index n = 0; n < S; ++n) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>((k * n) % S) / S;
        m.cos(k, n) = std::cos(a);
        m.sin(k, n) = std::sin(a);
      }
  }
  Eigen::MatrixXcd out(S, f.cols());
  out.real() = m.cos * f;
  out.imag() = m.sin * f;
  return out;
}

}  // namespace detail

inline ScaleModel make_scale_model(Size base_size, int frame_w, int frame_h,
                                   const ScaleConfig& config = {}) {
  detail::require(config.num_scales >= 1 && config.num_scales % 2 == 1,
                  "scale model: number of scales must be odd and positive");
  detail::require(config.scale_step > 1.0, "scale model: scale step must exceed 1");
  detail::require(base_size.width > 0 && base_size.height > 0,
                  "scale model: target size must be positive");
  detail::require(frame_w > 0 && frame_h > 0, "scale model: frame size must be positive");
  ScaleModel m;
  m.config = config;
  m.base_size = base_size;
  const int S = config.num_scales;
  const int half = (S - 1) / 2;
  for (int n = -half; n <= half; ++n) m.exponents.push_back(n);
  m.level_window = S == 1 ? std::vector<double>{1.0} : std::vector<double>(S);
  if (S > 1) {
    // Symmetric Hann so the identity level carries weight 1.
    for (int i = 0; i < S; ++i) {
      const double s = std::sin(std::numbers::pi * (i + 1) / (S + 1));
      m.level_window[i] = s * s;
    }
  }
  Eigen::VectorXd labels(S);
  for (int i = 0; i < S; ++i) {
    const double e = m.exponents[i];
    labels(i) = std::exp(-0.5 * e * e / (config.label_sigma * config.label_sigma));
  }
  m.label_hat = detail::fft_column(labels);

  const double side = config.template_max_side;
  const double aspect = base_size.height / base_size.width;
  const int min_side = 2 * config.cell_size;
  if (aspect <= 1.0) {
    m.template_w = static_cast<int>(side);
    m.template_h = std::max(min_side, static_cast<int>(std::lround(side * aspect)));
  } else {
    m.template_h = static_cast<int>(side);
    m.template_w = std::max(min_side, static_cast<int>(std::lround(side / aspect)));
  }

  m.min_scale = config.min_target_px / std::min(base_size.width, base_size.height);
  m.max_scale = std::max(m.min_scale, std::min(frame_w / base_size.width,
                                               frame_h / base_size.height));
  m.current_scale = std::clamp(1.0, m.min_scale, m.max_scale);
  return m;
}

inline ScaleFeatures scale_features(const Image& frame, Point center, const ScaleModel& model) {
  const int S = model.num_levels();
  const int cells_x = model.template_w / model.config.cell_size;
  const int cells_y = model.template_h / model.config.cell_size;
  const Eigen::Index ds = static_cast<Eigen::Index>(cells_x) * cells_y * hog::kChannels;
  ScaleFeatures out = ScaleFeatures::Zero(S, ds);
  const Rect frame_rect{0.0, 0.0, double(frame.width()), double(frame.height())};
  for (int level = 0; level < S; ++level) {
    const double s = model.current_scale * model.level_factor(level);
    const Size size{model.base_size.width * s, model.base_size.height * s};
    if (!(size.width > 0 && size.height > 0) || !std::isfinite(center.x) ||
        !std::isfinite(center.y) || intersect(Rect::around(center, size), frame_rect).area() <= 0)
      continue;  // zero row
    const ImagePatch patch = crop_region(frame, center, size, model.template_w, model.template_h);
    const RealGrid h = hog::fhog(patch.pixels, model.config.cell_size);
    auto v = h.values();
    const double w = model.level_window[level];
    for (Eigen::Index j = 0; j < ds; ++j) out(level, j) = v[j] * w;
  }
  return out;
}

// Correlation response over pyramid levels; empty when the model is untrained.
inline std::vector<double> scale_response(const ScaleModel& model, const ScaleFeatures& features) {
  if (!model.trained || features.rows() != model.num_levels() ||
      features.cols() != model.numerator.cols())
    return {};
  const Eigen::MatrixXcd z = detail::fft_columns(features);
  const int S = model.num_levels();
  const Eigen::VectorXcd dots = model.numerator.cwiseProduct(z).rowwise().sum();
  std::vector<std::complex<double>> spectrum(S);
  for (int i = 0; i < S; ++i) spectrum[i] = dots(i) / (model.denominator(i) + model.config.lambda);
  std::vector<std::complex<double>> spatial = spectrum;
  if (S > 1) detail::thread_fft().inv(spatial, spectrum);
  std::vector<double> r(S);
  for (int i = 0; i < S; ++i) r[i] = spatial[i].real();
  return r;
}

// New scale after one estimation; degenerate responses keep the current scale.
inline double estimate_scale(const ScaleModel& model, const ScaleFeatures& features) {
  const std::vector<double> r = scale_response(model, features);
  if (r.empty()) return model.current_scale;
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  if (!std::isfinite(*lo) || !std::isfinite(*hi) || !(*hi > *lo)) return model.current_scale;
  const int best = static_cast<int>(hi - r.begin());
  return std::clamp(model.current_scale * model.level_factor(best), model.min_scale,
                    model.max_scale);
}

// Moves the filter statistics toward the given frame by rate eta; the first
// training call adopts them outright.
inline ScaleModel train_scale(const ScaleModel& model, const ScaleFeatures& features, double eta) {
  detail::require(eta >= 0.0 && eta <= 1.0, "train_scale: eta must be in [0,1]");
  detail::require(features.rows() == model.num_levels(),
                  "train_scale: feature rows must match the number of levels");
  const Eigen::MatrixXcd f = detail::fft_columns(features);
  const int S = model.num_levels();
  const Eigen::VectorXcd label = Eigen::Map<const Eigen::VectorXcd>(model.label_hat.data(), S);
  Eigen::MatrixXcd num = label.asDiagonal() * f.conjugate();
  Eigen::VectorXd den = f.cwiseAbs2().rowwise().sum();
  ScaleModel out = model;
  if (!model.trained || model.numerator.cols() != f.cols()) {
    out.numerator = std::move(num);
    out.denominator = std::move(den);
  } else {
    out.numerator = (1.0 - eta) * model.numerator + eta * num;
    out.denominator = (1.0 - eta) * model.denominator + eta * den;
  }
  out.trained = true;
  return out;
}

}  // namespace lmcf
