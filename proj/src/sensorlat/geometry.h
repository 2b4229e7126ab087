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

#ifndef SENSORLAT_GEOMETRY_H_
#define SENSORLAT_GEOMETRY_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace sensorlat {

// Planar pose: position in meters, heading in radians from the x axis.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
};

// Vehicle state relative to the reference path, expressed at the closest
// path point D: arc length s, signed lateral deviation e (positive when the
// feedback point is left of the path) and yaw angle error theta.
struct PathState {
  double s = 0.0;
  double e = 0.0;
  double theta = 0.0;
};

// Feedback point A and vehicle yaw in the earth-fixed frame.
struct EarthState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
};

struct CurvatureSample {
  double kappa = 0.0;      // 1/m
  double dkappa_ds = 0.0;  // 1/m^2
};

struct StraightShape {};

// Left-turning circle.
struct CircularShape {
  double radius = 0.0;
};

// kappa(s) = kappa_max / 2 * (1 - cos(2 pi s / period)) on [0, periods *
// period]; the curvature stays at its end value beyond that.
struct CosineShape {
  double kappa_max = 0.0;
  double period = 0.0;
  int periods = 1;
};

// Tabulated curvature, interpolated with a monotone (PCHIP) cubic.
struct SampledShape {
  std::vector<double> s;
  std::vector<double> kappa;
};

using PathShape =
    std::variant<StraightShape, CircularShape, CosineShape, SampledShape>;

// The anchor is the path pose at the first arc length of the domain (s = 0
// for the analytic shapes, the first table entry for sampled paths).
struct PathSpec {
  PathShape shape;
  Pose2 anchor;
};

// Immutable arc-length parameterized reference path. Copies share the
// cached pose table and may be read concurrently.
class Path {
 public:
  // Throws ConfigError when the spec violates its invariants.
  explicit Path(PathSpec spec);

  const PathSpec& spec() const { return spec_; }

  // Throws DomainError for s outside the table of a sampled path.
  CurvatureSample CurvatureAt(double s) const;
  Pose2 PoseAt(double s) const;

  // Arc-length domain; analytic shapes are unbounded.
  double domain_begin() const;
  double domain_end() const;

  // Largest |kappa| attained anywhere on the path.
  double MaxAbsCurvature() const;

  // Period and number of periods of a cosine path.
  std::optional<CosineShape> cosine() const;

 private:
  struct PoseTable;

  Pose2 TablePose(double s) const;

  PathSpec spec_;
  std::vector<double> pchip_slopes_;
  std::shared_ptr<const PoseTable> table_;
};

// Grid step of the cached pose integration for non-closed-form shapes.
inline constexpr double kPoseTableStep = 0.01;

Path BuildPath(const PathSpec& spec);

// Maps a path-frame state to the earth frame:
//   x_A = x_D - e sin(psi_D), y_A = y_D + e cos(psi_D), psi = psi_D + theta.
EarthState PathToEarth(const Path& path, const PathState& state);

// Closest-point projection of an earth-frame state onto the path. Newton
// iteration on (A - D(s)) . t_D(s) = 0 seeded at s_hint.
//
// Throws ProjectionError when the search does not converge in
// kProjectionMaxIterations and DomainError when the projection is ambiguous
// (|e * kappa| >= 1).
PathState ProjectToPath(const Path& path, const EarthState& state,
                        double s_hint);

inline constexpr int kProjectionMaxIterations = 50;
inline constexpr double kProjectionTolerance = 1e-10;

// Signed lateral deviation of point (x, y) from the path pose d.
double LateralDeviation(const Pose2& d, double x, double y);

// psi - psi_d reduced to [-pi, pi). Ties round half to even and the result
// pi maps to -pi.
double WrapAngleError(double psi, double psi_d);

// Reads a two-column curvature table with the header
// "s_meters,kappa_per_meter". Throws IoError or ConfigError.
SampledShape LoadCurvatureCsv(const std::filesystem::path& file);

}  // namespace sensorlat

#endif  // SENSORLAT_GEOMETRY_H_
