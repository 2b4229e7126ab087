// Copyright 2026 The sensorlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sensorlat/controller.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sensorlat/error.h"

namespace sensorlat {

namespace {

double PreWrapFeedback(double e, double theta, double kappa,
                       const ControlConfig& config,
                       const VehicleParams& params) {
  const auto [k1, k2] = config.gains;
  switch (config.variant) {
    case Variant::kFull:
      return k1 * (theta - DesiredYawError(kappa, params.sensor_offset) +
                   std::atan(k2 * e));
    case Variant::kNaive:
    case Variant::kUnwrapped:
      return k1 * (theta + std::atan(k2 * e));
    case Variant::kLinear:
      return k1 * theta + k1 * k2 * e;
  }
  return 0.0;
}

}  // namespace

std::string_view VariantName(Variant variant) {
  switch (variant) {
    case Variant::kFull:
      return "full";
    case Variant::kNaive:
      return "naive";
    case Variant::kUnwrapped:
      return "unwrapped";
    case Variant::kLinear:
      return "linear";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kFull, Variant::kNaive, Variant::kUnwrapped,
                    Variant::kLinear}) {
    if (VariantName(v) == name) return v;
  }
  throw ConfigError("unknown controller variant '" + std::string(name) +
                    "' (expected full | naive | unwrapped | linear)");
}

bool UsesWrapper(Variant variant) {
  return variant == Variant::kFull || variant == Variant::kNaive;
}

ControlConfig ControlConfig::Make(Gains gains, double max_lateral_accel,
                                  Variant variant,
                                  const VehicleParams& params) {
  if (!std::isfinite(gains.k1) || !std::isfinite(gains.k2)) {
    throw ConfigError("control gains must be finite");
  }
  if (!(max_lateral_accel > 0.0) || !std::isfinite(max_lateral_accel)) {
    throw ConfigError("max_lateral_accel must be positive");
  }
  params.Validate();
  ControlConfig config;
  config.gains = gains;
  config.max_lateral_accel = max_lateral_accel;
  config.variant = variant;
  config.g_sat = MaxAllowableSteer(params, max_lateral_accel);
  return config;
}

double Wrapper(double x, double g_sat) {
  const double scale = 2.0 * g_sat / std::numbers::pi;
  return scale * std::atan(x / scale);
}

double MaxAllowableSteer(const VehicleParams& params,
                         double max_lateral_accel) {
  return std::min(params.max_steer,
                  std::atan(max_lateral_accel * params.wheelbase /
                            (params.speed * params.speed)));
}

double Feedforward(double kappa, const VehicleParams& params,
                   Variant variant) {
  if (variant != Variant::kFull) {
    return std::atan(params.wheelbase * kappa);
  }
  const double dk = params.sensor_offset * kappa;
  if (!(std::abs(dk) < 1.0)) {
    throw DomainError("path untrackable for sensor offset: |d*kappa| >= 1");
  }
  return std::atan(params.wheelbase * kappa / std::sqrt(1.0 - dk * dk));
}

double FeedforwardError(double kappa, const VehicleParams& params) {
  const double dk = params.sensor_offset * kappa;
  if (!(std::abs(dk) < 1.0)) {
    throw DomainError("path untrackable for sensor offset: |d*kappa| >= 1");
  }
  // atan(a) - atan(b) = atan((a - b) / (1 + a b)) with a - b formed without
  // cancellation.
  const double root = std::sqrt(1.0 - dk * dk);
  const double b = params.wheelbase * kappa;
  const double a = b / root;
  const double diff = b * dk * dk / (root * (1.0 + root));
  return std::atan(diff / (1.0 + a * b));
}

double DesiredYawError(double kappa, double sensor_offset) {
  const double dk = sensor_offset * kappa;
  if (!(std::abs(dk) < 1.0)) {
    throw DomainError("path untrackable for sensor offset: |d*kappa| >= 1");
  }
  return -std::asin(dk);
}

double DesiredHeading(double e, double k2, Variant variant) {
  return variant == Variant::kLinear ? -k2 * e : -std::atan(k2 * e);
}

double Feedback(double e, double theta, double kappa,
                const ControlConfig& config, const VehicleParams& params) {
  const double demand = PreWrapFeedback(e, theta, kappa, config, params);
  return UsesWrapper(config.variant) ? Wrapper(demand, config.g_sat) : demand;
}

SteeringDecision Control(const PathState& state, double kappa,
                         const ControlConfig& config,
                         const VehicleParams& params) {
  SteeringDecision out;
  out.theta_0 = DesiredYawError(kappa, params.sensor_offset);
  out.theta_des = DesiredHeading(state.e, config.gains.k2, config.variant);
  out.gamma_ff = Feedforward(kappa, params, config.variant);
  out.feedback_demand =
      PreWrapFeedback(state.e, state.theta, kappa, config, params);
  out.gamma_fb = UsesWrapper(config.variant)
                     ? Wrapper(out.feedback_demand, config.g_sat)
                     : out.feedback_demand;
  out.saturated = std::abs(out.feedback_demand) > config.g_sat;
  const double total = out.gamma_ff + out.gamma_fb;
  out.gamma_des = std::clamp(total, -params.max_steer, params.max_steer);
  out.clamped = out.gamma_des != total;
  return out;
}

}  // namespace sensorlat
