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

#include "sensorlat/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "sensorlat/error.h"

namespace sensorlat {

namespace {

// l + d l2 k1, written as d l2 (k1 - k1_zero) so that it is exactly zero at
// the gain returned by ZeroAmplificationGain.
double DeviationGainFactor(double k1, double l2, const VehicleParams& p) {
  if (p.sensor_offset == 0.0) return p.wheelbase;
  const double k1_zero = -p.wheelbase / (p.sensor_offset * l2);
  return p.sensor_offset * l2 * (k1 - k1_zero);
}

}  // namespace

Lambdas ComputeLambdas(double kappa0, Gains gains, const VehicleParams& p) {
  const double l = p.wheelbase;
  const double d = p.sensor_offset;
  const double dk = d * kappa0;
  if (!(std::abs(dk) < 1.0)) {
    throw DomainError("path untrackable for sensor offset: |d*kappa0| >= 1");
  }
  const auto [k1, k2] = gains;
  const double k0sq = kappa0 * kappa0;
  Lambdas out;
  out.l1 = std::sqrt(1.0 - dk * dk);
  out.l2 = 1.0 + (l * l - d * d) * k0sq;
  out.l3 = out.l1 * out.l2 * k1 * k2 - d * k0sq * out.l2 * k1 - l * k0sq;
  const double damping = out.l2 * k1 * (out.l1 + d * k2);
  out.l4 = p.speed * p.speed / (l * l * out.l1 * out.l1) *
           (2.0 * l * out.l3 + damping * damping);
  return out;
}

double KappaBar(const VehicleParams& p) {
  const double t = std::tan(p.max_steer);
  return t / std::hypot(p.wheelbase, p.sensor_offset * t);
}

double Lambda1Lower(const VehicleParams& p) {
  const double t = std::tan(p.max_steer);
  return p.wheelbase / std::hypot(p.wheelbase, p.sensor_offset * t);
}

double NegativeFeedbackK2Threshold(const VehicleParams& p) {
  const double t = std::tan(p.max_steer);
  return p.sensor_offset / p.wheelbase * t * t /
         std::hypot(p.wheelbase, p.sensor_offset * t);
}

double ZeroAmplificationGain(double kappa0, const VehicleParams& p) {
  if (p.sensor_offset == 0.0) {
    throw DomainError("zero-amplification gain undefined for d = 0");
  }
  const Lambdas lam = ComputeLambdas(kappa0, {}, p);
  return -p.wheelbase / (p.sensor_offset * lam.l2);
}

LinearModel Linearize(double kappa0, Gains gains, const VehicleParams& p) {
  const Lambdas lam = ComputeLambdas(kappa0, gains, p);
  const double l = p.wheelbase;
  const double d = p.sensor_offset;
  const double v = p.speed;
  const auto [k1, k2] = gains;
  LinearModel m;
  m.a(0, 0) = v * d / l * lam.l2 / lam.l1 * k1 * k2;
  m.a(0, 1) = v / lam.l1 * (1.0 + d / l * lam.l2 * k1);
  m.a(1, 0) = v / l * (lam.l2 * k1 * k2 - l / lam.l1 * kappa0 * kappa0);
  m.a(1, 1) = v * lam.l2 / l * k1;
  m.b << 0.0, d / lam.l1;
  m.c << 1.0, 0.0;
  m.kappa0 = kappa0;
  m.gains = gains;
  m.params = p;
  return m;
}

CharacteristicPolynomial CharacteristicCoefficients(const LinearModel& model) {
  const VehicleParams& p = model.params;
  const Lambdas lam = ComputeLambdas(model.kappa0, model.gains, p);
  CharacteristicPolynomial out;
  out.c1 = -p.speed * model.gains.k1 * lam.l2 / (p.wheelbase * lam.l1) *
           (lam.l1 + p.sensor_offset * model.gains.k2);
  out.c0 = -p.speed * p.speed * lam.l3 / (p.wheelbase * lam.l1 * lam.l1);
  return out;
}

std::array<std::complex<double>, 2> Eigenvalues(const LinearModel& model) {
  const auto [c1, c0] = CharacteristicCoefficients(model);
  const double disc = c1 * c1 - 4.0 * c0;
  std::array<std::complex<double>, 2> roots;
  if (disc >= 0.0) {
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    const double r1 = q;
    const double r2 = q != 0.0 ? c0 / q : 0.0;
    roots = {std::complex<double>(std::max(r1, r2), 0.0),
             std::complex<double>(std::min(r1, r2), 0.0)};
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    roots = {std::complex<double>(-0.5 * c1, im),
             std::complex<double>(-0.5 * c1, -im)};
  }
  return roots;
}

std::string_view SufficientConditionName(SufficientCondition condition) {
  switch (condition) {
    case SufficientCondition::kNone:
      return "none";
    case SufficientCondition::kNegativeFeedback:
      return "negative_feedback";
    case SufficientCondition::kPositiveFeedback:
      return "positive_feedback";
  }
  return "none";
}

StabilityVerdict IsStable(double kappa0, Gains gains,
                          const VehicleParams& p) {
  const Lambdas lam = ComputeLambdas(kappa0, gains, p);
  const auto [k1, k2] = gains;
  const double d = p.sensor_offset;
  const double damping = k1 * (lam.l1 + d * k2);
  StabilityVerdict v;
  v.stable = damping < 0.0 && lam.l3 < 0.0;
  v.marginal = std::abs(damping) < kStabilityBoundaryTolerance ||
               std::abs(lam.l3) < kStabilityBoundaryTolerance;
  if (k1 < 0.0 && k2 > NegativeFeedbackK2Threshold(p)) {
    v.sufficient = SufficientCondition::kNegativeFeedback;
  } else if (d > 0.0 && k1 > 0.0 && k2 < -1.0 / d) {
    v.sufficient = SufficientCondition::kPositiveFeedback;
  }
  v.eigenvalues = Eigenvalues(Linearize(kappa0, gains, p));
  return v;
}

double Amplification(double omega, double kappa0, Gains gains,
                     const VehicleParams& p) {
  const Lambdas lam = ComputeLambdas(kappa0, gains, p);
  const double l = p.wheelbase;
  const double v = p.speed;
  const double l1sq = lam.l1 * lam.l1;
  // V |d| / l1^2 * |1 + (d/l) l2 k1| * omega
  const double numerator = v * std::abs(p.sensor_offset) / l1sq *
                           std::abs(DeviationGainFactor(gains.k1, lam.l2, p)) /
                           l * std::abs(omega);
  if (numerator == 0.0) return 0.0;
  const double w2 = omega * omega;
  const double c0 = v * v * lam.l3 / (l * l1sq);
  const double denominator = w2 * w2 + lam.l4 * w2 + c0 * c0;
  return numerator / std::sqrt(denominator);
}

PeakAmplification PeakAmplificationOf(double kappa0, Gains gains,
                                      const VehicleParams& p) {
  const Lambdas lam = ComputeLambdas(kappa0, gains, p);
  const double l = p.wheelbase;
  const double d = p.sensor_offset;
  const auto [k1, k2] = gains;
  PeakAmplification out;
  out.stable = k1 * (lam.l1 + d * k2) < 0.0 && lam.l3 < 0.0;
  out.omega_m = p.speed / lam.l1 * std::sqrt(std::abs(lam.l3) / l);
  const double numerator =
      std::abs(d) / lam.l1 * std::abs(DeviationGainFactor(k1, lam.l2, p));
  const double damping = lam.l2 * k1 * (lam.l1 + d * k2);
  const double radicand =
      2.0 * l * (lam.l3 + std::abs(lam.l3)) + damping * damping;
  if (numerator == 0.0) {
    out.m_max = 0.0;
  } else if (!(radicand > 0.0)) {
    out.m_max = std::numeric_limits<double>::infinity();
    out.bounded = false;
  } else {
    out.m_max = numerator / std::sqrt(radicand);
  }
  return out;
}

FreqResponse SampleFrequencyResponse(double kappa0, Gains gains,
                                     const VehicleParams& p, double omega_min,
                                     double omega_max, int points) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || points < 2) {
    throw ConfigError(
        "frequency range needs 0 < omega_min < omega_max and >= 2 points");
  }
  FreqResponse out;
  out.peak = PeakAmplificationOf(kappa0, gains, p);
  std::vector<double> omegas;
  omegas.reserve(static_cast<size_t>(points) + 1);
  const double ratio = std::log(omega_max / omega_min);
  for (int i = 0; i < points; ++i) {
    omegas.push_back(omega_min *
                     std::exp(ratio * static_cast<double>(i) / (points - 1)));
  }
  omegas.back() = omega_max;
  if (out.peak.omega_m >= omega_min && out.peak.omega_m <= omega_max) {
    omegas.push_back(out.peak.omega_m);
  }
  std::sort(omegas.begin(), omegas.end());
  omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());
  out.samples.reserve(omegas.size());
  for (double w : omegas) {
    out.samples.push_back({w, Amplification(w, kappa0, gains, p)});
  }
  return out;
}

std::vector<ScanCell> StabilityRegionScan(const ScanSpec& spec,
                                          const VehicleParams& params,
                                          unsigned threads) {
  if (spec.resolution < 2) {
    throw ConfigError("scan resolution must be at least 2");
  }
  const auto n = static_cast<size_t>(spec.resolution);
  auto axis = [n](double lo, double hi, size_t i) {
    return i + 1 == n ? hi
                      : lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(n - 1);
  };
  std::vector<ScanCell> cells(spec.kappa0s.size() * n * n);
  for (size_t k = 0; k < spec.kappa0s.size(); ++k) {
    for (size_t j = 0; j < n; ++j) {
      for (size_t i = 0; i < n; ++i) {
        ScanCell& cell = cells[(k * n + j) * n + i];
        cell.kappa0 = spec.kappa0s[k];
        cell.k2 = axis(spec.k2_min, spec.k2_max, j);
        cell.k1 = axis(spec.k1_min, spec.k1_max, i);
      }
    }
  }
  auto evaluate = [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      ScanCell& cell = cells[c];
      try {
        const Gains g{cell.k1, cell.k2};
        cell.verdict = IsStable(cell.kappa0, g, params);
        cell.peak = PeakAmplificationOf(cell.kappa0, g, params);
      } catch (const DomainError& e) {
        cell.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
  if (threads <= 1) {
    evaluate(0, cells.size());
    return cells;
  }
  {
    std::vector<std::jthread> workers;
    const size_t chunk = (cells.size() + threads - 1) / threads;
    for (size_t begin = 0; begin < cells.size(); begin += chunk) {
      workers.emplace_back(evaluate, begin,
                           std::min(cells.size(), begin + chunk));
    }
  }
  return cells;
}

}  // namespace sensorlat
