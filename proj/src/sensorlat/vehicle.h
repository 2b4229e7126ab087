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

#ifndef SENSORLAT_VEHICLE_H_
#define SENSORLAT_VEHICLE_H_

#include "sensorlat/geometry.h"

namespace sensorlat {

// Kinematic bicycle with skate wheels, constant forward speed and the
// feedback point A on the symmetry axis.
struct VehicleParams {
  double wheelbase = 0.0;      // l [m]
  double sensor_offset = 0.0;  // d [m], distance from rear axle center to A
  double max_steer = 0.0;      // gamma_max [rad]
  double speed = 0.0;          // V [m/s]

  // Throws ConfigError unless l > 0, V > 0 and 0 < gamma_max < pi/2.
  void Validate() const;
};

// Path-frame state with the yaw error measured from the desired yaw error:
// theta_hat = theta - theta_0.
struct HatPathState {
  double s = 0.0;
  double e = 0.0;
  double theta_hat = 0.0;
};

struct EarthRates {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double psi_dot = 0.0;
};

struct PathRates {
  double s_dot = 0.0;
  double e_dot = 0.0;
  double theta_dot = 0.0;  // d(theta)/dt or d(theta_hat)/dt
};

// |1 - e * kappa| below this counts as reaching the curvature center.
inline constexpr double kCurvatureCenterTolerance = 1e-6;

// Earth-frame kinematics of point A. Throws DomainError for |gamma| >= pi/2.
EarthRates EarthDerivatives(const EarthState& state, double steer,
                            const VehicleParams& params);

// Path-frame kinematics. Throws SingularityError when |1 - e kappa| falls
// below kCurvatureCenterTolerance.
PathRates PathDerivatives(const PathState& state, double steer,
                          const VehicleParams& params, double kappa);

// Path-frame kinematics in (s, e, theta_hat). kappa_rate is dkappa/dt along
// the motion. Throws DomainError when |d kappa| >= 1.
PathRates HatPathDerivatives(const HatPathState& state, double steer,
                             const VehicleParams& params, double kappa,
                             double kappa_rate);

// Lateral acceleration of the rear axle center, V^2 tan(gamma) / l.
double RearAxleLateralAccel(double speed, double steer, double wheelbase);

}  // namespace sensorlat

#endif  // SENSORLAT_VEHICLE_H_
