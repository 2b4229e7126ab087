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

#ifndef SENSORLAT_SIM_H_
#define SENSORLAT_SIM_H_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sensorlat/controller.h"
#include "sensorlat/error.h"
#include "sensorlat/geometry.h"
#include "sensorlat/vehicle.h"

namespace sensorlat {

// Classical fourth-order Runge-Kutta step of x' = field(x).
// Throws SingularityError if any stage derivative is non-finite.
template <size_t N, class Field>
std::array<double, N> StepRk4(Field&& field, const std::array<double, N>& x,
                              double dt) {
  using State = std::array<double, N>;
  auto check = [](const State& k) {
    for (double v : k) {
      if (!std::isfinite(v)) {
        throw SingularityError("non-finite derivative during integration");
      }
    }
    return k;
  };
  auto axpy = [](const State& a, double h, const State& k) {
    State out;
    for (size_t i = 0; i < N; ++i) out[i] = a[i] + h * k[i];
    return out;
  };
  const State k1 = check(field(x));
  const State k2 = check(field(axpy(x, 0.5 * dt, k1)));
  const State k3 = check(field(axpy(x, 0.5 * dt, k2)));
  const State k4 = check(field(axpy(x, dt, k3)));
  State out;
  for (size_t i = 0; i < N; ++i) {
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// RK4 step of x' = field(x, steer) with the steering held over the step.
template <size_t N, class Field>
std::array<double, N> StepRk4Held(Field&& field,
                                  const std::array<double, N>& x, double steer,
                                  double dt) {
  return StepRk4<N>([&](const std::array<double, N>& y) { return field(y, steer); },
                    x, dt);
}

// Which kinematics are integrated.
//   kPath:  path-frame model, earth pose reconstructed from the path state.
//   kEarth: earth-frame model, path state from closest-point projection.
//   kBoth:  both models side by side under the same steering signal.
enum class Frame { kPath, kEarth, kBoth };

std::string_view FrameName(Frame frame);
Frame ParseFrame(std::string_view name);

struct ScenarioConfig {
  PathSpec path;
  VehicleParams vehicle;
  Gains gains;
  double max_lateral_accel = 0.0;
  Variant variant = Variant::kFull;
  PathState initial;
  double dt = 1e-3;
  double t_end = 30.0;
  Frame frame = Frame::kBoth;
  // Spacing of the rows written to trajectory files; metrics always use
  // every integration step.
  double output_interval = 0.01;

  // Throws ConfigError.
  void Validate() const;
};

// Default horizon: 30 s, or 1.2 times the time to traverse all periods of a
// cosine path.
double DefaultHorizon(const PathSpec& path, double speed);

struct TrajectorySample {
  double t = 0.0;
  double s = 0.0;
  double e = 0.0;
  double theta = 0.0;
  double theta_0 = 0.0;
  double theta_hat = 0.0;
  double gamma_des = 0.0;
  double gamma_ff = 0.0;
  double gamma_fb = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double kappa = 0.0;
  bool saturated = false;
  bool clamped = false;
};

inline constexpr std::array<std::string_view, 13> kTrajectoryColumns = {
    "t",         "s_D",       "e_D",       "theta_D",  "theta_0",
    "theta_hat", "gamma_des", "gamma_ff",  "gamma_fb", "x_A",
    "y_A",       "psi",       "kappa_D"};

double TrajectoryColumn(const TrajectorySample& sample, size_t column);

struct Trajectory {
  double dt = 0.0;
  std::vector<TrajectorySample> samples;
  // Earth-frame integration of the same run (Frame::kBoth only).
  std::vector<EarthState> earth;
};

inline constexpr double kSettlingThreshold = 0.01;
inline constexpr double kSteadyWindowFraction = 0.2;

struct TrackingMetrics {
  // First time after which |e| stays below kSettlingThreshold; t_end when
  // the run never settles.
  double settling_time = 0.0;
  bool settled = false;
  // Means over the last kSteadyWindowFraction of the horizon.
  double steady_e = 0.0;
  double steady_theta = 0.0;
  double steady_theta_hat = 0.0;
  double steady_gamma_fb = 0.0;
  // Half peak-to-peak of e over the final full curvature period of a cosine
  // path, or over the steady window otherwise.
  double sway_amplitude = 0.0;
  // Largest excursion past the path, opposite to the initial deviation.
  double overshoot = 0.0;
  // Fraction of steps whose feedback demand exceeded g_sat.
  double saturation_fraction = 0.0;
  int clamped_steps = 0;
};

struct FrameAgreement {
  double max_position_error = 0.0;  // m
  double max_heading_error = 0.0;   // rad
};

struct SimResult {
  Trajectory trajectory;
  TrackingMetrics metrics;
  std::optional<FrameAgreement> frames;
  double g_sat = 0.0;
  std::vector<std::string> warnings;
};

// Closed-loop fixed-step simulation. The steering law is algebraic
// (gamma = gamma_des), so it is evaluated at every Runge-Kutta stage.
//
// Throws SingularityError when 1 - e kappa approaches zero, DomainError when
// |d kappa| >= 1 somewhere on the path, and ConfigError for invalid configs.
SimResult RunScenario(const ScenarioConfig& config);

TrackingMetrics ComputeMetrics(const Trajectory& trajectory, const Path& path);

// Number of sign reversals of e over samples with t in [t_begin, t_end).
int CountSignChanges(const Trajectory& trajectory, double t_begin,
                     double t_end);

struct VariantRun {
  Variant variant = Variant::kFull;
  std::optional<SimResult> result;
  std::string error;
  ErrorCode error_code = ErrorCode::kDomain;  // meaningful when !result
};

struct SignalDelta {
  std::string_view signal;
  double max_abs = 0.0;
};

struct ComparisonReport {
  std::vector<VariantRun> runs;
  // deltas[i]: per-column max |run_i - run_0|; empty when either run failed.
  std::vector<std::vector<SignalDelta>> deltas;
};

// Runs the scenario once per variant. Failures are recorded per run.
ComparisonReport CompareControllers(const ScenarioConfig& config,
                                    const std::vector<Variant>& variants);

}  // namespace sensorlat

#endif  // SENSORLAT_SIM_H_
