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

#include "sensorlat/sim.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <utility>

namespace sensorlat {

namespace {

using PathAndEarth = std::array<double, 6>;
using Earth3 = std::array<double, 3>;

TrajectorySample MakeSample(double t, const PathState& ps, double kappa,
                            const SteeringDecision& dec, const EarthState& es) {
  TrajectorySample s;
  s.t = t;
  s.s = ps.s;
  s.e = ps.e;
  s.theta = ps.theta;
  s.theta_0 = dec.theta_0;
  s.theta_hat = ps.theta - dec.theta_0;
  s.gamma_des = dec.gamma_des;
  s.gamma_ff = dec.gamma_ff;
  s.gamma_fb = dec.gamma_fb;
  s.x = es.x;
  s.y = es.y;
  s.psi = es.psi;
  s.kappa = kappa;
  s.saturated = dec.saturated;
  s.clamped = dec.clamped;
  return s;
}

double Mean(const std::vector<TrajectorySample>& v, size_t begin,
            double TrajectorySample::*field) {
  double sum = 0.0;
  for (size_t i = begin; i < v.size(); ++i) sum += v[i].*field;
  return sum / static_cast<double>(v.size() - begin);
}

}  // namespace

std::string_view FrameName(Frame frame) {
  switch (frame) {
    case Frame::kPath:
      return "path";
    case Frame::kEarth:
      return "earth";
    case Frame::kBoth:
      return "both";
  }
  return "both";
}

Frame ParseFrame(std::string_view name) {
  for (Frame f : {Frame::kPath, Frame::kEarth, Frame::kBoth}) {
    if (FrameName(f) == name) return f;
  }
  throw ConfigError("unknown frame '" + std::string(name) +
                    "' (expected path | earth | both)");
}

void ScenarioConfig::Validate() const {
  vehicle.Validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt must be positive");
  }
  if (!(t_end > dt) || !std::isfinite(t_end)) {
    throw ConfigError("t_end must exceed dt");
  }
  if (!(output_interval > 0.0) || !std::isfinite(output_interval)) {
    throw ConfigError("output_interval must be positive");
  }
  if (!std::isfinite(initial.s) || !std::isfinite(initial.e) ||
      !std::isfinite(initial.theta)) {
    throw ConfigError("initial state must be finite");
  }
}

double DefaultHorizon(const PathSpec& path, double speed) {
  if (const auto* c = std::get_if<CosineShape>(&path.shape)) {
    return 1.2 * c->period * c->periods / speed;
  }
  return 30.0;
}

double TrajectoryColumn(const TrajectorySample& s, size_t column) {
  static constexpr std::array<double TrajectorySample::*, 13> kFields = {
      &TrajectorySample::t,         &TrajectorySample::s,
      &TrajectorySample::e,         &TrajectorySample::theta,
      &TrajectorySample::theta_0,   &TrajectorySample::theta_hat,
      &TrajectorySample::gamma_des, &TrajectorySample::gamma_ff,
      &TrajectorySample::gamma_fb,  &TrajectorySample::x,
      &TrajectorySample::y,         &TrajectorySample::psi,
      &TrajectorySample::kappa};
  return s.*kFields.at(column);
}

SimResult RunScenario(const ScenarioConfig& config) {
  config.Validate();
  const Path path(config.path);
  const VehicleParams& vehicle = config.vehicle;
  const ControlConfig control = ControlConfig::Make(
      config.gains, config.max_lateral_accel, config.variant, vehicle);
  if (!(std::abs(vehicle.sensor_offset) * path.MaxAbsCurvature() < 1.0)) {
    throw DomainError("path untrackable for sensor offset: |d*kappa| >= 1");
  }
  if (!(config.initial.s >= path.domain_begin() &&
        config.initial.s <= path.domain_end())) {
    throw ConfigError("initial arc length outside the path domain");
  }

  SimResult result;
  result.g_sat = control.g_sat;
  Trajectory& traj = result.trajectory;
  traj.dt = config.dt;
  const auto steps = static_cast<size_t>(std::llround(config.t_end / config.dt));
  traj.samples.reserve(steps + 1);

  PathState initial = config.initial;
  initial.theta = WrapAngleError(initial.theta, 0.0);

  if (config.frame == Frame::kEarth) {
    // The controller sees the projection of the integrated earth state.
    double s_hint = initial.s;
    auto field = [&](const Earth3& x) {
      const EarthState es{x[0], x[1], x[2]};
      const PathState ps = ProjectToPath(path, es, s_hint);
      const double kappa = path.CurvatureAt(ps.s).kappa;
      const SteeringDecision dec = Control(ps, kappa, control, vehicle);
      const EarthRates r = EarthDerivatives(es, dec.gamma_des, vehicle);
      return Earth3{r.x_dot, r.y_dot, r.psi_dot};
    };
    const EarthState e0 = PathToEarth(path, initial);
    Earth3 x{e0.x, e0.y, e0.psi};
    for (size_t k = 0; k <= steps; ++k) {
      const EarthState es{x[0], x[1], x[2]};
      const PathState ps = ProjectToPath(path, es, s_hint);
      s_hint = ps.s;
      const double kappa = path.CurvatureAt(ps.s).kappa;
      const SteeringDecision dec = Control(ps, kappa, control, vehicle);
      traj.samples.push_back(MakeSample(static_cast<double>(k) * config.dt, ps,
                                        kappa, dec, es));
      if (k == steps) break;
      x = StepRk4<3>(field, x, config.dt);
    }
  } else {
    auto field = [&](const PathAndEarth& x) {
      const PathState ps{x[0], x[1], x[2]};
      const double kappa = path.CurvatureAt(ps.s).kappa;
      const SteeringDecision dec = Control(ps, kappa, control, vehicle);
      const PathRates pr = PathDerivatives(ps, dec.gamma_des, vehicle, kappa);
      const EarthRates er =
          EarthDerivatives({x[3], x[4], x[5]}, dec.gamma_des, vehicle);
      return PathAndEarth{pr.s_dot, pr.e_dot, pr.theta_dot,
                          er.x_dot, er.y_dot, er.psi_dot};
    };
    const EarthState e0 = PathToEarth(path, initial);
    PathAndEarth x{initial.s, initial.e, initial.theta, e0.x, e0.y, e0.psi};
    const bool both = config.frame == Frame::kBoth;
    FrameAgreement agreement;
    if (both) traj.earth.reserve(steps + 1);
    for (size_t k = 0; k <= steps; ++k) {
      const PathState ps{x[0], x[1], x[2]};
      const double kappa = path.CurvatureAt(ps.s).kappa;
      const SteeringDecision dec = Control(ps, kappa, control, vehicle);
      const EarthState mapped = PathToEarth(path, ps);
      traj.samples.push_back(MakeSample(static_cast<double>(k) * config.dt, ps,
                                        kappa, dec, mapped));
      if (both) {
        const EarthState integrated{x[3], x[4], x[5]};
        traj.earth.push_back(integrated);
        agreement.max_position_error =
            std::max(agreement.max_position_error,
                     std::hypot(integrated.x - mapped.x,
                                integrated.y - mapped.y));
        agreement.max_heading_error =
            std::max(agreement.max_heading_error,
                     std::abs(WrapAngleError(integrated.psi, mapped.psi)));
      }
      if (k == steps) break;
      x = StepRk4<6>(field, x, config.dt);
      x[2] = WrapAngleError(x[2], 0.0);
    }
    if (both) result.frames = agreement;
  }

  result.metrics = ComputeMetrics(traj, path);
  if (result.metrics.clamped_steps > 0) {
    result.warnings.push_back(
        "steering command clamped to +-max_steer on " +
        std::to_string(result.metrics.clamped_steps) + " steps");
  }
  return result;
}

TrackingMetrics ComputeMetrics(const Trajectory& trajectory, const Path& path) {
  const auto& v = trajectory.samples;
  TrackingMetrics m;
  if (v.empty()) return m;
  const double t_end = v.back().t;

  size_t last_outside = v.size();
  for (size_t i = v.size(); i-- > 0;) {
    if (std::abs(v[i].e) >= kSettlingThreshold) {
      last_outside = i;
      break;
    }
  }
  if (last_outside == v.size()) {
    m.settled = true;
    m.settling_time = v.front().t;
  } else if (last_outside + 1 < v.size()) {
    m.settled = true;
    m.settling_time = v[last_outside + 1].t;
  } else {
    m.settling_time = t_end;
  }

  const double window_start = (1.0 - kSteadyWindowFraction) * t_end;
  size_t begin = 0;
  while (begin + 1 < v.size() && v[begin].t < window_start) ++begin;
  m.steady_e = Mean(v, begin, &TrajectorySample::e);
  m.steady_theta = Mean(v, begin, &TrajectorySample::theta);
  m.steady_theta_hat = Mean(v, begin, &TrajectorySample::theta_hat);
  m.steady_gamma_fb = Mean(v, begin, &TrajectorySample::gamma_fb);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (const auto cosine = path.cosine()) {
    const double end = cosine->period * cosine->periods;
    const double start = end - cosine->period;
    for (const auto& s : v) {
      if (s.s >= start && s.s <= end) {
        lo = std::min(lo, s.e);
        hi = std::max(hi, s.e);
      }
    }
  }
  if (!(hi >= lo)) {
    for (size_t i = begin; i < v.size(); ++i) {
      lo = std::min(lo, v[i].e);
      hi = std::max(hi, v[i].e);
    }
  }
  m.sway_amplitude = 0.5 * (hi - lo);

  const double e0 = v.front().e;
  double overshoot = 0.0;
  if (e0 != 0.0) {
    for (const auto& s : v) {
      overshoot = std::max(overshoot, -std::copysign(1.0, e0) * s.e);
    }
  }
  m.overshoot = overshoot;

  size_t saturated = 0;
  for (const auto& s : v) {
    saturated += s.saturated ? 1 : 0;
    m.clamped_steps += s.clamped ? 1 : 0;
  }
  m.saturation_fraction =
      static_cast<double>(saturated) / static_cast<double>(v.size());
  return m;
}

int CountSignChanges(const Trajectory& trajectory, double t_begin,
                     double t_end) {
  int changes = 0;
  double last_sign = 0.0;
  for (const auto& s : trajectory.samples) {
    if (s.t < t_begin || s.t >= t_end || s.e == 0.0) continue;
    const double sign = std::copysign(1.0, s.e);
    if (last_sign != 0.0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

ComparisonReport CompareControllers(const ScenarioConfig& config,
                                    const std::vector<Variant>& variants) {
  std::vector<std::future<VariantRun>> pending;
  pending.reserve(variants.size());
  for (Variant variant : variants) {
    pending.push_back(std::async(std::launch::async, [config, variant] {
      VariantRun run;
      run.variant = variant;
      ScenarioConfig c = config;
      c.variant = variant;
      try {
        run.result = RunScenario(c);
      } catch (const Error& e) {
        run.error = e.what();
        run.error_code = e.code();
      }
      return run;
    }));
  }
  ComparisonReport report;
  for (auto& f : pending) report.runs.push_back(f.get());

  report.deltas.resize(report.runs.size());
  const SimResult* base = report.runs.empty() || !report.runs[0].result
                              ? nullptr
                              : &*report.runs[0].result;
  for (size_t i = 0; i < report.runs.size(); ++i) {
    const auto& other = report.runs[i].result;
    if (base == nullptr || !other) continue;
    const auto& a = base->trajectory.samples;
    const auto& b = other->trajectory.samples;
    const size_t n = std::min(a.size(), b.size());
    for (size_t c = 0; c < kTrajectoryColumns.size(); ++c) {
      double max_abs = 0.0;
      for (size_t k = 0; k < n; ++k) {
        max_abs = std::max(max_abs, std::abs(TrajectoryColumn(a[k], c) -
                                             TrajectoryColumn(b[k], c)));
      }
      report.deltas[i].push_back({kTrajectoryColumns[c], max_abs});
    }
  }
  return report;
}

}  // namespace sensorlat
