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


// C interface to the sensorlat lateral path-following library.
//
// Objects are opaque handles created and destroyed through this API. Every
// fallible call returns an sl_status; on failure sl_last_error() describes
// the problem for the calling thread. Angles are radians, lengths meters,
// times seconds.

#ifndef SENSORLAT_SENSORLAT_H_
#define SENSORLAT_SENSORLAT_H_

#include <stddef.h>

#if defined(SENSORLAT_BUILDING_LIBRARY)
#define SL_API __attribute__((visibility("default")))
#else
#define SL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_INVALID_ARGUMENT = 1,
  SL_ERR_CONFIG = 2,
  SL_ERR_DOMAIN = 3,
  SL_ERR_IO = 4,
  SL_ERR_SINGULARITY = 5,
  SL_ERR_PROJECTION = 6,
  SL_ERR_INTERNAL = 7
} sl_status;

typedef enum sl_variant {
  SL_VARIANT_FULL = 0,
  SL_VARIANT_NAIVE = 1,
  SL_VARIANT_UNWRAPPED = 2,
  SL_VARIANT_LINEAR = 3
} sl_variant;

typedef enum sl_frame {
  SL_FRAME_BOTH = 0,
  SL_FRAME_PATH = 1,
  SL_FRAME_EARTH = 2
} sl_frame;

typedef struct sl_pose {
  double x;
  double y;
  double psi;
} sl_pose;

typedef struct sl_path_state {
  double s;
  double e;
  double theta;
} sl_path_state;

typedef struct sl_vehicle {
  double wheelbase;
  double sensor_offset;
  double max_steer;
  double speed;
} sl_vehicle;

typedef struct sl_gains {
  double k1;
  double k2;
} sl_gains;

typedef struct sl_control_params {
  sl_gains gains;
  double max_lateral_accel;
  sl_variant variant;
} sl_control_params;

typedef struct sl_steering {
  double gamma_des;
  double gamma_ff;
  double gamma_fb;
  double theta_0;
  double feedback_demand;
  double g_sat;
  int saturated;
  int clamped;
} sl_steering;

typedef struct sl_stability {
  int stable;
  int marginal;
  // 0 none, 1 negative-feedback condition, 2 positive-feedback condition.
  int sufficient;
  double eig_re[2];
  double eig_im[2];
} sl_stability;

typedef struct sl_metrics {
  double settling_time;
  int settled;
  double steady_e;
  double steady_theta;
  double steady_theta_hat;
  double steady_gamma_fb;
  double sway_amplitude;
  double overshoot;
  double saturation_fraction;
  int clamped_steps;
  double g_sat;
  // Negative when the run did not integrate both frames.
  double frame_max_position_error;
  double frame_max_heading_error;
} sl_metrics;

typedef struct sl_path sl_path;
typedef struct sl_trajectory sl_trajectory;

SL_API const char* sl_version(void);
SL_API const char* sl_last_error(void);
SL_API const char* sl_status_name(sl_status status);
// Process exit code used by the command-line tool for a status.
SL_API int sl_exit_code(sl_status status);

// Paths. anchor may be NULL for the origin.
SL_API sl_status sl_path_create_straight(const sl_pose* anchor, sl_path** out);
SL_API sl_status sl_path_create_circular(double radius, const sl_pose* anchor,
                                         sl_path** out);
SL_API sl_status sl_path_create_cosine(double kappa_max, double period,
                                       int periods, const sl_pose* anchor,
                                       sl_path** out);
SL_API sl_status sl_path_create_sampled(const double* s, const double* kappa,
                                        size_t count, const sl_pose* anchor,
                                        sl_path** out);
SL_API void sl_path_destroy(sl_path* path);

SL_API sl_status sl_path_curvature(const sl_path* path, double s,
                                   double* kappa, double* dkappa_ds);
SL_API sl_status sl_path_pose(const sl_path* path, double s, sl_pose* out);
SL_API sl_status sl_path_to_earth(const sl_path* path,
                                  const sl_path_state* state, sl_pose* out);
SL_API sl_status sl_path_project(const sl_path* path, const sl_pose* pose,
                                 double s_hint, sl_path_state* out);

// Controller.
SL_API sl_status sl_max_allowable_steer(const sl_vehicle* vehicle,
                                        double max_lateral_accel, double* out);
SL_API sl_status sl_control(const sl_vehicle* vehicle,
                            const sl_control_params* control,
                            const sl_path_state* state, double kappa,
                            sl_steering* out);

// Linear analysis about a constant curvature kappa0.
SL_API sl_status sl_kappa_bar(const sl_vehicle* vehicle, double* out);
// a is 2x2 row-major, b has two entries.
SL_API sl_status sl_linearize(const sl_vehicle* vehicle, sl_gains gains,
                              double kappa0, double a[4], double b[2]);
SL_API sl_status sl_is_stable(const sl_vehicle* vehicle, sl_gains gains,
                              double kappa0, sl_stability* out);
SL_API sl_status sl_amplification(const sl_vehicle* vehicle, sl_gains gains,
                                  double kappa0, double omega, double* out);
SL_API sl_status sl_peak_amplification(const sl_vehicle* vehicle,
                                       sl_gains gains, double kappa0,
                                       double* m_max, double* omega_m);

// Closed-loop simulation. dt <= 0 selects 1 ms; t_end <= 0 selects the
// default horizon for the path.
typedef struct sl_scenario {
  const sl_path* path;
  sl_vehicle vehicle;
  sl_control_params control;
  sl_path_state initial;
  double dt;
  double t_end;
  sl_frame frame;
} sl_scenario;

SL_API sl_status sl_simulate(const sl_scenario* scenario, sl_trajectory** out);
SL_API void sl_trajectory_destroy(sl_trajectory* trajectory);
SL_API size_t sl_trajectory_rows(const sl_trajectory* trajectory);
SL_API size_t sl_trajectory_columns(void);
// NULL for an out-of-range column.
SL_API const char* sl_trajectory_column_name(size_t column);
SL_API sl_status sl_trajectory_value(const sl_trajectory* trajectory,
                                     size_t row, size_t column, double* out);
SL_API sl_status sl_trajectory_metrics(const sl_trajectory* trajectory,
                                       sl_metrics* out);

// Batch workflows: "simulate", "compare", "stability-map", "freq-response"
// and "figs-repro".
typedef void (*sl_log_fn)(const char* message, void* user);

typedef struct sl_run_options {
  double dt;            // > 0 overrides the config
  const char* variant;  // non-NULL overrides the config
  int seedless;
  unsigned threads;  // 0: hardware concurrency
  sl_log_fn log;
  void* log_user;
} sl_run_options;

// options may be NULL. config_path may be NULL for figs-repro.
SL_API sl_status sl_run_command(const char* command, const char* config_path,
                                const char* out_dir,
                                const sl_run_options* options);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // SENSORLAT_SENSORLAT_H_
