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

#include "sensorlat/vehicle.h"

#include <cmath>
#include <numbers>
#include <string>

#include "sensorlat/error.h"

namespace sensorlat {

namespace {

double CheckedTan(double steer) {
  if (!(std::abs(steer) < 0.5 * std::numbers::pi)) {
    throw DomainError("steering angle " + std::to_string(steer) +
                      " rad outside (-pi/2, pi/2)");
  }
  return std::tan(steer);
}

double CheckedLongitudinalScale(double e, double kappa) {
  const double gap = 1.0 - e * kappa;
  if (!(std::abs(gap) >= kCurvatureCenterTolerance)) {
    throw SingularityError("curvature-center singularity: 1 - e*kappa = " +
                           std::to_string(gap));
  }
  return 1.0 / gap;
}

}  // namespace

void VehicleParams::Validate() const {
  if (!(wheelbase > 0.0) || !std::isfinite(wheelbase)) {
    throw ConfigError("wheelbase must be positive");
  }
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw ConfigError("speed must be positive (forward motion)");
  }
  if (!(max_steer > 0.0 && max_steer < 0.5 * std::numbers::pi)) {
    throw ConfigError("max_steer must lie in (0, 90) deg");
  }
  if (!std::isfinite(sensor_offset)) {
    throw ConfigError("sensor_offset must be finite");
  }
}

EarthRates EarthDerivatives(const EarthState& state, double steer,
                            const VehicleParams& p) {
  const double lateral = p.sensor_offset / p.wheelbase * CheckedTan(steer);
  const double c = std::cos(state.psi);
  const double s = std::sin(state.psi);
  return {p.speed * (c - lateral * s), p.speed * (s + lateral * c),
          p.speed / p.wheelbase * std::tan(steer)};
}

PathRates PathDerivatives(const PathState& state, double steer,
                          const VehicleParams& p, double kappa) {
  const double tan_steer = CheckedTan(steer);
  const double scale = CheckedLongitudinalScale(state.e, kappa);
  const double lateral = p.sensor_offset / p.wheelbase * tan_steer;
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  const double s_dot = p.speed * scale * (c - lateral * s);
  return {s_dot, p.speed * (s + lateral * c),
          p.speed / p.wheelbase * tan_steer - kappa * s_dot};
}

PathRates HatPathDerivatives(const HatPathState& state, double steer,
                             const VehicleParams& p, double kappa,
                             double kappa_rate) {
  const double dk = p.sensor_offset * kappa;
  if (!(std::abs(dk) < 1.0)) {
    throw DomainError("path untrackable for sensor offset: |d*kappa| >= 1");
  }
  const double root = std::sqrt(1.0 - dk * dk);
  const double theta_0 = -std::asin(dk);
  PathRates r = PathDerivatives({state.s, state.e, state.theta_hat + theta_0},
                                steer, p, kappa);
  r.theta_dot += p.sensor_offset * kappa_rate / root;
  return r;
}

double RearAxleLateralAccel(double speed, double steer, double wheelbase) {
  return speed * speed * CheckedTan(steer) / wheelbase;
}

}  // namespace sensorlat
