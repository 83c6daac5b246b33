#pragma once

// Alternating closed-form solver for the structured large-margin objective
//
//   min_{w, z >= 0}  1/2 |w|^2 + C | r(w) - (u0 - upsilon - z) |^2
//
// where r(w)[s] = <w, shift_s(x)> is the response over all cyclic shifts of the
// training feature map x and u0 is a plane whose height is frozen during a
// sweep. Given w the z-subproblem is an element-wise clamp; given z the
// w-subproblem is a ridge regression diagonalized by the DFT.
//
// Coefficient conventions (W = spectrum of the spatial filter w, X = spectrum
// of x, U = spectrum of the target u = u0 - upsilon - z):
//   linear:  W_d = X_d conj(U) / (sum_d |X_d|^2 + 1/(2C)),
//            response spectrum sum_d conj(W_d) S_d
//   kernel:  A = U / (K_xx + 1/(2C)),
//            response spectrum K_xs A, with K_xs = kernel correlation of the
//            stored template and the candidate.
// With a linear kernel both routes give identical responses.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "lmcf/error.hpp"
#include "lmcf/grid.hpp"
#include "lmcf/labels.hpp"
#include "lmcf/spectral.hpp"

namespace lmcf {

enum class ModelMode { linear, kernel_linear, kernel_gaussian };

inline std::string_view to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::linear: return "linear";
    case ModelMode::kernel_linear: return "kernel-linear";
    case ModelMode::kernel_gaussian: return "kernel-gaussian";
  }
  return "unknown";
}

inline std::optional<ModelMode> parse_model_mode(std::string_view text) {
  if (text == "linear") return ModelMode::linear;
  if (text == "kernel-linear") return ModelMode::kernel_linear;
  if (text == "kernel-gaussian") return ModelMode::kernel_gaussian;
  return std::nullopt;
}

inline bool is_kernel(ModelMode mode) noexcept { return mode != ModelMode::linear; }

struct DualModel {
  ModelMode mode = ModelMode::kernel_linear;
  // linear: W (D channels); kernel: A (1 channel)
  SpectralMap coefficients;
  SpectralMap template_hat;
  double C = 1e4;
  double sigma_k = 0.5;

  friend bool operator==(const DualModel&, const DualModel&) = default;
};

struct SlackState {
  RealGrid z;                // >= 0
  double u0_height = 1.0;    // frozen plane height of the current sweep
  RealGrid u;                // regression target u0 - upsilon - z

  friend bool operator==(const SlackState&, const SlackState&) = default;
};

struct TrainConfig {
  ModelMode mode = ModelMode::kernel_linear;
  double C = 1e4;
  double sigma_k = 0.5;
  int iterations = 10;
};

// Start of training: z = 0, u0 = 1, so u = 1 - upsilon.
inline SlackState initial_slack(const LabelField& labels) {
  SlackState s{RealGrid(labels.width(), labels.height()), 1.0,
               RealGrid(labels.width(), labels.height())};
  auto ups = labels.upsilon.values();
  auto u = s.u.values();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 - ups[i];
  return s;
}

inline SpectralSurface kernel_correlation(ModelMode mode, const SpectralMap& a,
                                          const SpectralMap& b, double sigma_k) {
  return mode == ModelMode::kernel_gaussian ? gaussian_kernel_corr(a, b, sigma_k)
                                            : linear_kernel_corr(a, b);
}

inline SpectralSurface response_spectrum(const DualModel& model, const SpectralMap& candidate_hat) {
  if (!model.template_hat.same_shape(candidate_hat))
    throw InvalidInput("model and candidate features differ in shape");
  if (!is_kernel(model.mode)) return linear_kernel_corr(model.coefficients, candidate_hat);
  SpectralSurface k = kernel_correlation(model.mode, model.template_hat, candidate_hat,
                                         model.sigma_k);
  auto kv = k.values();
  auto av = model.coefficients.values();
  for (std::size_t i = 0; i < kv.size(); ++i) kv[i] *= av[i];
  return k;
}

inline RealGrid spatial_response(const DualModel& model, const SpectralMap& candidate_hat) {
  return idft2(response_spectrum(model, candidate_hat));
}

inline SlackState z_step(const DualModel& model, const LabelField& labels,
                         const SpectralMap& features_hat) {
  if (!labels.m.same_plane(features_hat))
    throw InvalidInput("z_step: labels and features differ in shape");
  const RealGrid r = spatial_response(model, features_hat);
  const auto rv = r.values();
  const double u0 = *std::max_element(rv.begin(), rv.end());
  SlackState s{RealGrid(r.width(), r.height()), u0, RealGrid(r.width(), r.height())};
  auto ups = labels.upsilon.values();
  auto z = s.z.values();
  auto u = s.u.values();
  for (std::size_t i = 0; i < rv.size(); ++i) {
    z[i] = std::max(u0 - rv[i] - ups[i], 0.0);
    u[i] = u0 - ups[i] - z[i];
  }
  return s;
}

namespace detail {

inline void check_solver_inputs(const SpectralMap& features_hat, const SlackState& state,
                                double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidInput("regularization C must be positive");
  if (!state.u.same_plane(features_hat))
    throw InvalidInput("slack state and features differ in shape");
  for (double v : state.u.values())
    if (!std::isfinite(v)) throw InvalidInput("regression target contains non-finite values");
}

}  // namespace detail

inline DualModel model_step_linear(const SpectralMap& features_hat, const SlackState& state,
                                   double C) {
  detail::check_solver_inputs(features_hat, state, C);
  const SpectralSurface u_hat = dft2(state.u);
  const int D = features_hat.channels();
  const std::size_t n = features_hat.plane_size();
  std::vector<double> denom(n, 1.0 / (2.0 * C));
  for (int d = 0; d < D; ++d) {
    auto x = features_hat.channel(d);
    for (std::size_t i = 0; i < n; ++i) denom[i] += std::norm(x[i]);
  }
  DualModel m;
  m.mode = ModelMode::linear;
  m.coefficients = SpectralMap(features_hat.width(), features_hat.height(), D);
  m.template_hat = features_hat;
  m.C = C;
  auto uv = u_hat.channel(0);
  for (int d = 0; d < D; ++d) {
    auto x = features_hat.channel(d);
    auto w = m.coefficients.channel(d);
    for (std::size_t i = 0; i < n; ++i) w[i] = x[i] * std::conj(uv[i]) / denom[i];
  }
  return m;
}

inline DualModel model_step_kernel(const SpectralMap& features_hat, const SlackState& state,
                                   double C, ModelMode mode, double sigma_k) {
  detail::check_solver_inputs(features_hat, state, C);
  if (!is_kernel(mode)) throw InvalidInput("model_step_kernel: mode must be a kernel mode");
  if (mode == ModelMode::kernel_gaussian && !(sigma_k > 0.0))
    throw InvalidInput("model_step_kernel: sigma_k must be positive");
  const SpectralSurface u_hat = dft2(state.u);
  SpectralSurface k = kernel_correlation(mode, features_hat, features_hat, sigma_k);
  DualModel m;
  m.mode = mode;
  m.template_hat = features_hat;
  m.C = C;
  m.sigma_k = sigma_k;
  m.coefficients = SpectralSurface(features_hat.width(), features_hat.height(), 1);
  auto kv = k.values();
  auto uv = u_hat.values();
  auto av = m.coefficients.values();
  const double ridge = 1.0 / (2.0 * C);
  for (std::size_t i = 0; i < kv.size(); ++i) {
    const std::complex<double> den = kv[i] + ridge;
    if (std::abs(den) < 1e-12)
      throw NumericalError("model_step_kernel: near-zero denominator in kernel solve");
    av[i] = uv[i] / den;
  }
  return m;
}

inline DualModel model_step(const SpectralMap& features_hat, const SlackState& state,
                            const TrainConfig& config) {
  return is_kernel(config.mode)
             ? model_step_kernel(features_hat, state, config.C, config.mode, config.sigma_k)
             : model_step_linear(features_hat, state, config.C);
}

struct TrainResult {
  DualModel model;
  SlackState slack;
};

// Alternates (z-step, model-step) sweeps. The first sweep solves directly from
// `start` (default: z = 0, u0 = 1); each later sweep first re-derives z and the
// plane height u0 = max response from the current model.
inline TrainResult train(const SpectralMap& features_hat, const LabelField& labels,
                         const TrainConfig& config,
                         const std::optional<SlackState>& start = std::nullopt) {
  if (config.iterations < 1) throw InvalidInput("train: iterations must be >= 1");
  if (!labels.m.same_plane(features_hat))
    throw InvalidInput("train: labels and features differ in shape");
  SlackState slack = start ? *start : initial_slack(labels);
  if (!slack.u.same_plane(features_hat))
    throw InvalidInput("train: warm-start slack state differs in shape");
  DualModel model = model_step(features_hat, slack, config);
  for (int it = 1; it < config.iterations; ++it) {
    slack = z_step(model, labels, features_hat);
    model = model_step(features_hat, slack, config);
  }
  return {std::move(model), std::move(slack)};
}

inline TrainResult train(const RealGrid& features, const LabelField& labels,
                         const TrainConfig& config,
                         const std::optional<SlackState>& start = std::nullopt) {
  return train(dft2(features), labels, config, start);
}

// (1 - eta) * old + eta * new on both the coefficients and the template.
inline DualModel interpolate_model(const DualModel& old_model, const DualModel& new_model,
                                   double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("interpolate_model: eta must be in [0,1]");
  if (old_model.mode != new_model.mode ||
      !old_model.coefficients.same_shape(new_model.coefficients) ||
      !old_model.template_hat.same_shape(new_model.template_hat))
    throw InvalidInput("interpolate_model: models differ in mode or shape");
  DualModel out = new_model;
  auto blend = [eta](std::span<const std::complex<double>> a,
                     std::span<std::complex<double>> b) {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = (1.0 - eta) * a[i] + eta * b[i];
  };
  blend(old_model.coefficients.values(), out.coefficients.values());
  blend(old_model.template_hat.values(), out.template_hat.values());
  return out;
}

// Squared norm of the primal filter: sum |w_d|^2 (linear) or alpha' K alpha (kernel).
inline double model_norm_squared(const DualModel& model) {
  if (!is_kernel(model.mode)) return spectral_energy(model.coefficients);
  const RealGrid alpha = idft2(model.coefficients);
  const RealGrid k_alpha = spatial_response(model, model.template_hat);
  double sum = 0.0;
  auto a = alpha.values();
  auto ka = k_alpha.values();
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * ka[i];
  return sum;
}

// Training objective with the plane height held at u0_height.
inline double objective(const DualModel& model, const SpectralMap& features_hat,
                        const LabelField& labels, const RealGrid& z, double u0_height) {
  const RealGrid r = spatial_response(model, features_hat);
  auto rv = r.values();
  auto ups = labels.upsilon.values();
  auto zv = z.values();
  double fit = 0.0;
  for (std::size_t i = 0; i < rv.size(); ++i) {
    const double e = rv[i] - (u0_height - ups[i] - zv[i]);
    fit += e * e;
  }
  return 0.5 * model_norm_squared(model) + model.C * fit;
}

}  // namespace lmcf
