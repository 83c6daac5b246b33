#pragma once

#include <cmath>
#include <optional>

#include "lmcf/detector.hpp"

namespace lmcf {

// Average peak-to-correlation energy:
//   (F_max - F_min)^2 / mean_{w,h} (F_{w,h} - F_min)^2.
// A constant map has no defined value and yields nullopt.
inline std::optional<double> apce(const ResponseMap& response) {
  auto v = response.values.values();
  if (v.size() < 2) throw InvalidInput("apce: response needs at least two entries");
  double energy = 0.0;
  for (double f : v) {
    const double d = f - response.f_min;
    energy += d * d;
  }
  energy /= static_cast<double>(v.size());
  const double span = response.f_max - response.f_min;
  if (!(energy > 0.0) || !std::isfinite(energy) || !std::isfinite(span)) return std::nullopt;
  return span * span / energy;
}

// Running means of F_max and APCE over every evaluated frame.
struct UpdateGateState {
  double mean_fmax = 0.0;
  double mean_apce = 0.0;
  long count = 0;
  double beta1 = 0.7;
  double beta2 = 0.45;

  friend bool operator==(const UpdateGateState&, const UpdateGateState&) = default;
};

struct GateDecision {
  bool update = false;
  UpdateGateState gate;
};

// High confidence when both criteria reach their beta-scaled historical means.
// The first evaluated frame always passes. The history absorbs the frame
// whatever the decision; missing or non-finite criteria fail the gate and leave
// the history untouched.
inline GateDecision should_update(const UpdateGateState& gate, double f_max,
                                  std::optional<double> apce_value) {
  if (!apce_value || !std::isfinite(*apce_value) || !std::isfinite(f_max)) return {false, gate};
  const bool confident = gate.count == 0 || (f_max >= gate.beta1 * gate.mean_fmax &&
                                             *apce_value >= gate.beta2 * gate.mean_apce);
  UpdateGateState next = gate;
  const double n = static_cast<double>(gate.count);
  next.mean_fmax = (gate.mean_fmax * n + f_max) / (n + 1.0);
  next.mean_apce = (gate.mean_apce * n + *apce_value) / (n + 1.0);
  next.count = gate.count + 1;
  return {confident, next};
}

}  // namespace lmcf
