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

#ifndef SENSORLAT_ANALYSIS_H_
#define SENSORLAT_ANALYSIS_H_

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sensorlat/controller.h"
#include "sensorlat/vehicle.h"

namespace sensorlat {

// Curvature-dependent coefficients of the closed loop linearized around
// steady tracking of a constant curvature kappa0.
//   l1 = sqrt(1 - d^2 k0^2)
//   l2 = 1 + (l^2 - d^2) k0^2
//   l3 = l1 l2 k1 k2 - d k0^2 l2 k1 - l k0^2
//   l4 = V^2 / (l^2 l1^2) (2 l l3 + l2^2 k1^2 (l1 + d k2)^2)
struct Lambdas {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;
};

// Throws DomainError when |d kappa0| >= 1.
Lambdas ComputeLambdas(double kappa0, Gains gains, const VehicleParams& params);

// Largest curvature the vehicle can follow at full steering lock.
double KappaBar(const VehicleParams& params);
// Lower bound of l1 over |kappa0| <= KappaBar.
double Lambda1Lower(const VehicleParams& params);
// k2 threshold of the curvature-independent negative-feedback condition.
double NegativeFeedbackK2Threshold(const VehicleParams& params);
// Gain k1 = -l / (d l2) that zeroes the curvature-to-deviation response.
// Throws DomainError for d == 0.
double ZeroAmplificationGain(double kappa0, const VehicleParams& params);

// Reduced lateral model x = (e~, theta~), u = dkappa/dt, y = e~.
struct LinearModel {
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
  Eigen::RowVector2d c;
  double kappa0 = 0.0;
  Gains gains;
  VehicleParams params;
};

LinearModel Linearize(double kappa0, Gains gains, const VehicleParams& params);

// det(sI - A) = s^2 + c1 s + c0.
struct CharacteristicPolynomial {
  double c1 = 0.0;
  double c0 = 0.0;
};

CharacteristicPolynomial CharacteristicCoefficients(const LinearModel& model);

// Roots of the characteristic polynomial, larger real part first.
std::array<std::complex<double>, 2> Eigenvalues(const LinearModel& model);

enum class SufficientCondition {
  kNone,
  kNegativeFeedback,  // k1 < 0 and k2 > NegativeFeedbackK2Threshold
  kPositiveFeedback,  // k1 > 0 and k2 < -1/d
};

std::string_view SufficientConditionName(SufficientCondition condition);

// Half-width of the band around either Routh-Hurwitz inequality that is
// reported as marginal.
inline constexpr double kStabilityBoundaryTolerance = 1e-9;

struct StabilityVerdict {
  // k1 (l1 + d k2) < 0 and l3 < 0.
  bool stable = false;
  // Either inequality within kStabilityBoundaryTolerance of zero.
  bool marginal = false;
  SufficientCondition sufficient = SufficientCondition::kNone;
  std::array<std::complex<double>, 2> eigenvalues;
};

StabilityVerdict IsStable(double kappa0, Gains gains,
                          const VehicleParams& params);

// Amplification ratio M(omega) = |G(j omega)| from curvature variation to
// lateral deviation, in meters of deviation per 1/m of curvature.
double Amplification(double omega, double kappa0, Gains gains,
                     const VehicleParams& params);

struct PeakAmplification {
  double m_max = 0.0;
  double omega_m = 0.0;
  // False when the denominator of M_max vanishes (m_max is then +inf).
  bool bounded = true;
  bool stable = false;
};

PeakAmplification PeakAmplificationOf(double kappa0, Gains gains,
                                      const VehicleParams& params);

struct FrequencySample {
  double omega = 0.0;
  double m = 0.0;
};

struct FreqResponse {
  std::vector<FrequencySample> samples;  // ascending omega
  PeakAmplification peak;
};

// Log-spaced samples over [omega_min, omega_max] plus omega_m when it falls
// inside the range.
FreqResponse SampleFrequencyResponse(double kappa0, Gains gains,
                                     const VehicleParams& params,
                                     double omega_min, double omega_max,
                                     int points);

struct ScanSpec {
  double k1_min = -3.0;
  double k1_max = 3.0;
  double k2_min = -3.0;
  double k2_max = 3.0;
  int resolution = 200;  // points per axis, endpoints included
  std::vector<double> kappa0s;
};

struct ScanCell {
  double k1 = 0.0;
  double k2 = 0.0;
  double kappa0 = 0.0;
  StabilityVerdict verdict;
  PeakAmplification peak;
  std::string error;  // non-empty when the cell hit a domain error
};

// Cells ordered by kappa0, then k2, then k1. Evaluated on `threads`
// workers; the result does not depend on the thread count.
std::vector<ScanCell> StabilityRegionScan(const ScanSpec& spec,
                                          const VehicleParams& params,
                                          unsigned threads = 0);

}  // namespace sensorlat

#endif  // SENSORLAT_ANALYSIS_H_
