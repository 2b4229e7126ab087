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


#include "sensorlat/sensorlat.h"

#include <exception>
#include <new>
#include <string>
#include <utility>

#include "sensorlat/analysis.h"
#include "sensorlat/controller.h"
#include "sensorlat/error.h"
#include "sensorlat/geometry.h"
#include "sensorlat/sim.h"
#include "sensorlat/vehicle.h"
#include "sensorlat/workflows.h"

struct sl_path {
  sensorlat::Path path;
};

struct sl_trajectory {
  sensorlat::SimResult result;
};

namespace {

thread_local std::string g_last_error;

struct InvalidArgument {
  const char* what;
};

sl_status StatusFor(sensorlat::ErrorCode code) {
  switch (code) {
    case sensorlat::ErrorCode::kConfig: return SL_ERR_CONFIG;
    case sensorlat::ErrorCode::kDomain: return SL_ERR_DOMAIN;
    case sensorlat::ErrorCode::kSingularity: return SL_ERR_SINGULARITY;
    case sensorlat::ErrorCode::kProjection: return SL_ERR_PROJECTION;
    case sensorlat::ErrorCode::kIo: return SL_ERR_IO;
  }
  return SL_ERR_INTERNAL;
}

template <class F>
sl_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SL_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what;
    return SL_ERR_INVALID_ARGUMENT;
  } catch (const sensorlat::Error& e) {
    g_last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SL_ERR_INTERNAL;
  }
}

template <class T>
void Require(const T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument{what};
}

sensorlat::VehicleParams Vehicle(const sl_vehicle& v) {
  return {v.wheelbase, v.sensor_offset, v.max_steer, v.speed};
}

sensorlat::Variant ToVariant(sl_variant v) {
  switch (v) {
    case SL_VARIANT_FULL: return sensorlat::Variant::kFull;
    case SL_VARIANT_NAIVE: return sensorlat::Variant::kNaive;
    case SL_VARIANT_UNWRAPPED: return sensorlat::Variant::kUnwrapped;
    case SL_VARIANT_LINEAR: return sensorlat::Variant::kLinear;
  }
  throw InvalidArgument{"unknown sl_variant value"};
}

sensorlat::Frame ToFrame(sl_frame f) {
  switch (f) {
    case SL_FRAME_BOTH: return sensorlat::Frame::kBoth;
    case SL_FRAME_PATH: return sensorlat::Frame::kPath;
    case SL_FRAME_EARTH: return sensorlat::Frame::kEarth;
  }
  throw InvalidArgument{"unknown sl_frame value"};
}

sensorlat::Gains ToGains(sl_gains g) { return {g.k1, g.k2}; }

sl_status CreatePath(sensorlat::PathShape shape, const sl_pose* anchor,
                     sl_path** out) {
  return Guard([&] {
    Require(out, "out is NULL");
    *out = nullptr;
    sensorlat::PathSpec spec;
    spec.shape = std::move(shape);
    if (anchor != nullptr) spec.anchor = {anchor->x, anchor->y, anchor->psi};
    *out = new sl_path{sensorlat::Path(std::move(spec))};
  });
}

}  // namespace

extern "C" {

const char* sl_version(void) { return SENSORLAT_VERSION; }

const char* sl_last_error(void) { return g_last_error.c_str(); }

const char* sl_status_name(sl_status status) {
  switch (status) {
    case SL_OK: return "ok";
    case SL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SL_ERR_CONFIG: return "config error";
    case SL_ERR_DOMAIN: return "domain error";
    case SL_ERR_IO: return "i/o error";
    case SL_ERR_SINGULARITY: return "singularity";
    case SL_ERR_PROJECTION: return "projection failure";
    case SL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int sl_exit_code(sl_status status) {
  switch (status) {
    case SL_OK: return 0;
    case SL_ERR_CONFIG:
    case SL_ERR_INVALID_ARGUMENT: return 2;
    case SL_ERR_DOMAIN:
    case SL_ERR_SINGULARITY:
    case SL_ERR_PROJECTION: return 3;
    case SL_ERR_IO: return 4;
    case SL_ERR_INTERNAL: return 1;
  }
  return 1;
}

sl_status sl_path_create_straight(const sl_pose* anchor, sl_path** out) {
  return CreatePath(sensorlat::StraightShape{}, anchor, out);
}

sl_status sl_path_create_circular(double radius, const sl_pose* anchor,
                                  sl_path** out) {
  return CreatePath(sensorlat::CircularShape{radius}, anchor, out);
}

sl_status sl_path_create_cosine(double kappa_max, double period, int periods,
                                const sl_pose* anchor, sl_path** out) {
  return CreatePath(sensorlat::CosineShape{kappa_max, period, periods}, anchor,
                    out);
}

sl_status sl_path_create_sampled(const double* s, const double* kappa,
                                 size_t count, const sl_pose* anchor,
                                 sl_path** out) {
  if (count > 0 && (s == nullptr || kappa == nullptr)) {
    g_last_error = "sample arrays are NULL";
    return SL_ERR_INVALID_ARGUMENT;
  }
  sensorlat::SampledShape shape;
  if (count > 0) {
    shape.s.assign(s, s + count);
    shape.kappa.assign(kappa, kappa + count);
  }
  return CreatePath(std::move(shape), anchor, out);
}

void sl_path_destroy(sl_path* path) { delete path; }

sl_status sl_path_curvature(const sl_path* path, double s, double* kappa,
                            double* dkappa_ds) {
  return Guard([&] {
    Require(path, "path is NULL");
    const sensorlat::CurvatureSample c = path->path.CurvatureAt(s);
    if (kappa != nullptr) *kappa = c.kappa;
    if (dkappa_ds != nullptr) *dkappa_ds = c.dkappa_ds;
  });
}

sl_status sl_path_pose(const sl_path* path, double s, sl_pose* out) {
  return Guard([&] {
    Require(path, "path is NULL");
    Require(out, "out is NULL");
    const sensorlat::Pose2 p = path->path.PoseAt(s);
    *out = {p.x, p.y, p.psi};
  });
}

sl_status sl_path_to_earth(const sl_path* path, const sl_path_state* state,
                           sl_pose* out) {
  return Guard([&] {
    Require(path, "path is NULL");
    Require(state, "state is NULL");
    Require(out, "out is NULL");
    const sensorlat::EarthState e =
        sensorlat::PathToEarth(path->path, {state->s, state->e, state->theta});
    *out = {e.x, e.y, e.psi};
  });
}

sl_status sl_path_project(const sl_path* path, const sl_pose* pose,
                          double s_hint, sl_path_state* out) {
  return Guard([&] {
    Require(path, "path is NULL");
    Require(pose, "pose is NULL");
    Require(out, "out is NULL");
    const sensorlat::PathState p = sensorlat::ProjectToPath(
        path->path, {pose->x, pose->y, pose->psi}, s_hint);
    *out = {p.s, p.e, p.theta};
  });
}

sl_status sl_max_allowable_steer(const sl_vehicle* vehicle,
                                 double max_lateral_accel, double* out) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    Require(out, "out is NULL");
    const sensorlat::VehicleParams v = Vehicle(*vehicle);
    v.Validate();
    if (!(max_lateral_accel > 0.0)) {
      throw sensorlat::ConfigError("max_lateral_accel must be positive");
    }
    *out = sensorlat::MaxAllowableSteer(v, max_lateral_accel);
  });
}

sl_status sl_control(const sl_vehicle* vehicle,
                     const sl_control_params* control,
                     const sl_path_state* state, double kappa,
                     sl_steering* out) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    Require(control, "control is NULL");
    Require(state, "state is NULL");
    Require(out, "out is NULL");
    const sensorlat::VehicleParams v = Vehicle(*vehicle);
    const sensorlat::ControlConfig c = sensorlat::ControlConfig::Make(
        ToGains(control->gains), control->max_lateral_accel,
        ToVariant(control->variant), v);
    const sensorlat::SteeringDecision d =
        sensorlat::Control({state->s, state->e, state->theta}, kappa, c, v);
    *out = {d.gamma_des, d.gamma_ff,        d.gamma_fb,
            d.theta_0,   d.feedback_demand, c.g_sat,
            d.saturated ? 1 : 0, d.clamped ? 1 : 0};
  });
}

sl_status sl_kappa_bar(const sl_vehicle* vehicle, double* out) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    Require(out, "out is NULL");
    *out = sensorlat::KappaBar(Vehicle(*vehicle));
  });
}

sl_status sl_linearize(const sl_vehicle* vehicle, sl_gains gains,
                       double kappa0, double a[4], double b[2]) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    Require(a, "a is NULL");
    const sensorlat::LinearModel m =
        sensorlat::Linearize(kappa0, ToGains(gains), Vehicle(*vehicle));
    a[0] = m.a(0, 0);
    a[1] = m.a(0, 1);
    a[2] = m.a(1, 0);
    a[3] = m.a(1, 1);
    if (b != nullptr) {
      b[0] = m.b(0);
      b[1] = m.b(1);
    }
  });
}

sl_status sl_is_stable(const sl_vehicle* vehicle, sl_gains gains,
                       double kappa0, sl_stability* out) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    Require(out, "out is NULL");
    const sensorlat::StabilityVerdict v =
        sensorlat::IsStable(kappa0, ToGains(gains), Vehicle(*vehicle));
    out->stable = v.stable ? 1 : 0;
    out->marginal = v.marginal ? 1 : 0;
    out->sufficient = static_cast<int>(v.sufficient);
    for (int i = 0; i < 2; ++i) {
      out->eig_re[i] = v.eigenvalues[i].real();
      out->eig_im[i] = v.eigenvalues[i].imag();
    }
  });
}

sl_status sl_amplification(const sl_vehicle* vehicle, sl_gains gains,
                           double kappa0, double omega, double* out) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    Require(out, "out is NULL");
    *out = sensorlat::Amplification(omega, kappa0, ToGains(gains),
                                    Vehicle(*vehicle));
  });
}

sl_status sl_peak_amplification(const sl_vehicle* vehicle, sl_gains gains,
                                double kappa0, double* m_max,
                                double* omega_m) {
  return Guard([&] {
    Require(vehicle, "vehicle is NULL");
    const sensorlat::PeakAmplification p = sensorlat::PeakAmplificationOf(
        kappa0, ToGains(gains), Vehicle(*vehicle));
    if (m_max != nullptr) *m_max = p.m_max;
    if (omega_m != nullptr) *omega_m = p.omega_m;
  });
}

sl_status sl_simulate(const sl_scenario* scenario, sl_trajectory** out) {
  return Guard([&] {
    Require(scenario, "scenario is NULL");
    Require(scenario->path, "scenario path is NULL");
    Require(out, "out is NULL");
    *out = nullptr;
    sensorlat::ScenarioConfig c;
    c.path = scenario->path->path.spec();
    c.vehicle = Vehicle(scenario->vehicle);
    c.gains = ToGains(scenario->control.gains);
    c.max_lateral_accel = scenario->control.max_lateral_accel;
    c.variant = ToVariant(scenario->control.variant);
    c.initial = {scenario->initial.s, scenario->initial.e,
                 scenario->initial.theta};
    if (scenario->dt > 0.0) c.dt = scenario->dt;
    c.t_end = scenario->t_end > 0.0
                  ? scenario->t_end
                  : sensorlat::DefaultHorizon(c.path, c.vehicle.speed);
    c.frame = ToFrame(scenario->frame);
    *out = new sl_trajectory{sensorlat::RunScenario(c)};
  });
}

void sl_trajectory_destroy(sl_trajectory* trajectory) { delete trajectory; }

size_t sl_trajectory_rows(const sl_trajectory* trajectory) {
  return trajectory == nullptr
             ? 0
             : trajectory->result.trajectory.samples.size();
}

size_t sl_trajectory_columns(void) {
  return sensorlat::kTrajectoryColumns.size();
}

const char* sl_trajectory_column_name(size_t column) {
  if (column >= sensorlat::kTrajectoryColumns.size()) return nullptr;
  // The names are string literals, so data() is NUL-terminated.
  return sensorlat::kTrajectoryColumns[column].data();
}

sl_status sl_trajectory_value(const sl_trajectory* trajectory, size_t row,
                              size_t column, double* out) {
  return Guard([&] {
    Require(trajectory, "trajectory is NULL");
    Require(out, "out is NULL");
    const auto& samples = trajectory->result.trajectory.samples;
    if (row >= samples.size() ||
        column >= sensorlat::kTrajectoryColumns.size()) {
      throw InvalidArgument{"row or column out of range"};
    }
    *out = sensorlat::TrajectoryColumn(samples[row], column);
  });
}

sl_status sl_trajectory_metrics(const sl_trajectory* trajectory,
                                sl_metrics* out) {
  return Guard([&] {
    Require(trajectory, "trajectory is NULL");
    Require(out, "out is NULL");
    const sensorlat::SimResult& r = trajectory->result;
    const sensorlat::TrackingMetrics& m = r.metrics;
    out->settling_time = m.settling_time;
    out->settled = m.settled ? 1 : 0;
    out->steady_e = m.steady_e;
    out->steady_theta = m.steady_theta;
    out->steady_theta_hat = m.steady_theta_hat;
    out->steady_gamma_fb = m.steady_gamma_fb;
    out->sway_amplitude = m.sway_amplitude;
    out->overshoot = m.overshoot;
    out->saturation_fraction = m.saturation_fraction;
    out->clamped_steps = m.clamped_steps;
    out->g_sat = r.g_sat;
    out->frame_max_position_error =
        r.frames ? r.frames->max_position_error : -1.0;
    out->frame_max_heading_error =
        r.frames ? r.frames->max_heading_error : -1.0;
  });
}

sl_status sl_run_command(const char* command, const char* config_path,
                         const char* out_dir, const sl_run_options* options) {
  return Guard([&] {
    Require(command, "command is NULL");
    Require(out_dir, "out_dir is NULL");
    const sensorlat::Command cmd = sensorlat::ParseCommand(command);
    if (cmd != sensorlat::Command::kFigsRepro && config_path == nullptr) {
      throw InvalidArgument{"config_path is NULL"};
    }
    sensorlat::RunOptions opts;
    if (options != nullptr) {
      if (options->dt > 0.0) opts.dt = options->dt;
      if (options->variant != nullptr) {
        opts.variant = sensorlat::ParseVariant(options->variant);
      }
      opts.seedless = options->seedless != 0;
      opts.threads = options->threads;
      if (options->log != nullptr) {
        const sl_log_fn fn = options->log;
        void* user = options->log_user;
        opts.log = [fn, user](std::string_view msg) {
          const std::string line(msg);
          fn(line.c_str(), user);
        };
      }
    }
    sensorlat::RunCommand(cmd, config_path == nullptr ? "" : config_path,
                          out_dir, opts);
  });
}

}  // extern "C"
