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

#ifndef SENSORLAT_CONTROLLER_H_
#define SENSORLAT_CONTROLLER_H_

#include <string_view>

#include "sensorlat/geometry.h"
#include "sensorlat/vehicle.h"

namespace sensorlat {

// Steering law variants.
//   kFull:      sensor-offset-aware feedforward and wrapped feedback around
//               the desired yaw error theta_0.
//   kNaive:     rear-axle design applied at the sensor (d ignored).
//   kUnwrapped: naive feedback without the wrapper function.
//   kLinear:    linear feedback k1 theta + k1 k2 e.
enum class Variant { kFull, kNaive, kUnwrapped, kLinear };

std::string_view VariantName(Variant variant);
// Accepts "full", "naive", "unwrapped" and "linear"; throws ConfigError.
Variant ParseVariant(std::string_view name);
bool UsesWrapper(Variant variant);

// k1 multiplies a yaw angle error and is dimensionless (Table-style
// parameter sheets sometimes label it m/s); k2 is in 1/m.
struct Gains {
  double k1 = 0.0;
  double k2 = 0.0;
};

struct ControlConfig {
  Gains gains;
  double max_lateral_accel = 0.0;  // m/s^2
  Variant variant = Variant::kFull;
  double g_sat = 0.0;  // wrapper bound [rad], from MaxAllowableSteer

  // Validates the inputs and computes g_sat once for the (constant) speed.
  static ControlConfig Make(Gains gains, double max_lateral_accel,
                            Variant variant, const VehicleParams& params);
};

struct SteeringDecision {
  double gamma_des = 0.0;  // applied steering, clamped to +-gamma_max
  double gamma_ff = 0.0;
  double gamma_fb = 0.0;
  double theta_0 = 0.0;    // -asin(d kappa), recorded for every variant
  double theta_des = 0.0;  // heading the feedback steers toward
  // Feedback before the wrapper; equals gamma_fb for unwrapped variants.
  double feedback_demand = 0.0;
  bool saturated = false;  // |feedback_demand| > g_sat
  bool clamped = false;    // gamma_ff + gamma_fb exceeded gamma_max
};

// g(x) = (2 g_sat / pi) atan(pi x / (2 g_sat)).
double Wrapper(double x, double g_sat);

// min(gamma_max, atan(a_max l / V^2)).
double MaxAllowableSteer(const VehicleParams& params, double max_lateral_accel);

// Throws DomainError for the full variant when |d kappa| >= 1.
double Feedforward(double kappa, const VehicleParams& params, Variant variant);

// Steering error committed by ignoring the sensor offset in the feedforward.
double FeedforwardError(double kappa, const VehicleParams& params);

// theta_0 = -asin(d kappa); throws DomainError when |d kappa| >= 1.
double DesiredYawError(double kappa, double sensor_offset);

// Desired yaw error implied by the lateral deviation: -atan(k2 e), or
// -k2 e for the linear variant.
double DesiredHeading(double e, double k2, Variant variant);

double Feedback(double e, double theta, double kappa,
                const ControlConfig& config, const VehicleParams& params);

SteeringDecision Control(const PathState& state, double kappa,
                         const ControlConfig& config,
                         const VehicleParams& params);

}  // namespace sensorlat

#endif  // SENSORLAT_CONTROLLER_H_
