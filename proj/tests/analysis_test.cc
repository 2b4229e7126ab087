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
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "expected_values.h"
#include "sensorlat/controller.h"
#include "sensorlat/error.h"
#include "sensorlat/vehicle.h"

namespace sensorlat {
namespace {

constexpr double kPi = std::numbers::pi;
const VehicleParams kBaseline{2.57, 2.0, kPi / 6.0, 20.0};
const Gains kBaselineGains{-0.8, 0.02};

double Rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

TEST(LambdasTest, Examples) {
  const Lambdas z = ComputeLambdas(0.0, {-0.7, 0.3}, kBaseline);
  EXPECT_EQ(z.l1, 1.0);
  EXPECT_EQ(z.l2, 1.0);
  EXPECT_DOUBLE_EQ(z.l3, -0.7 * 0.3);
  EXPECT_NEAR(ComputeLambdas(0.0, kBaselineGains, kBaseline).l3, -0.016, 1e-17);
  const Lambdas at_bar = ComputeLambdas(KappaBar(kBaseline), kBaselineGains, kBaseline);
  EXPECT_NEAR(at_bar.l1, expected::kLambda1Lower, 1e-15);
  EXPECT_NEAR(Lambda1Lower(kBaseline), expected::kLambda1Lower, 1e-15);
  EXPECT_THROW(ComputeLambdas(0.5, kBaselineGains, kBaseline), DomainError);
}

TEST(KappaBarTest, Examples) {
  EXPECT_NEAR(KappaBar(kBaseline), expected::kKappaBar, 1e-16);
  VehicleParams rear = kBaseline;
  rear.sensor_offset = 0.0;
  EXPECT_DOUBLE_EQ(KappaBar(rear), std::tan(kPi / 6.0) / 2.57);
  EXPECT_NEAR(Feedforward(KappaBar(kBaseline), kBaseline, Variant::kFull),
              kBaseline.max_steer, 1e-14);
  EXPECT_NEAR(NegativeFeedbackK2Threshold(kBaseline),
              expected::kProp1Cond1Threshold, 1e-16);
}

TEST(LinearizeTest, BaselineMatrix) {
  const LinearModel m = Linearize(0.0, kBaselineGains, kBaseline);
  EXPECT_NEAR(m.a(0, 0), expected::kA11, 1e-14);
  EXPECT_NEAR(m.a(0, 1), expected::kA12, 1e-13);
  EXPECT_NEAR(m.a(1, 0), expected::kA21, 1e-14);
  EXPECT_NEAR(m.a(1, 1), expected::kA22, 1e-13);
  EXPECT_EQ(m.b(0), 0.0);
  EXPECT_EQ(m.b(1), 2.0);
  EXPECT_EQ(m.c(0), 1.0);
  EXPECT_EQ(m.c(1), 0.0);
  VehicleParams rear = kBaseline;
  rear.sensor_offset = 0.0;
  const LinearModel r = Linearize(0.01, kBaselineGains, rear);
  EXPECT_EQ(r.b(0), 0.0);
  EXPECT_EQ(r.b(1), 0.0);
}

// Central-difference Jacobian of the nonlinear closed loop in (e, theta_hat)
// at the desired solution.
TEST(LinearizeTest, MatchesNumericJacobianOfClosedLoop) {
  const Gains gains_list[] = {kBaselineGains, {-2.57 / 2.0, 0.02}, {0.8, -2.0}};
  const double kbar = KappaBar(kBaseline);
  for (const Gains& gains : gains_list) {
    const ControlConfig c = ControlConfig::Make(gains, 4.0, Variant::kFull, kBaseline);
    for (double kappa0 : {0.0, 0.005, 0.5 * kbar, -0.8 * kbar}) {
      const double theta0 = DesiredYawError(kappa0, kBaseline.sensor_offset);
      auto rates = [&](double e, double theta_hat) {
        const SteeringDecision dec =
            Control({0.0, e, theta_hat + theta0}, kappa0, c, kBaseline);
        const PathRates r = HatPathDerivatives({0.0, e, theta_hat},
                                               dec.gamma_des, kBaseline, kappa0, 0.0);
        return Eigen::Vector2d(r.e_dot, r.theta_dot);
      };
      const double h = 1e-6;
      Eigen::Matrix2d jac;
      jac.col(0) = (rates(h, 0.0) - rates(-h, 0.0)) / (2 * h);
      jac.col(1) = (rates(0.0, h) - rates(0.0, -h)) / (2 * h);
      const LinearModel m = Linearize(kappa0, gains, kBaseline);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          EXPECT_NEAR(jac(i, j), m.a(i, j), 1e-6)
              << "k1=" << gains.k1 << " kappa0=" << kappa0 << " (" << i << j << ")";
        }
      }
    }
  }
}

TEST(EigenvaluesTest, Baseline) {
  const auto ev = Eigenvalues(Linearize(0.0, kBaselineGains, kBaseline));
  EXPECT_NEAR(ev[0].real(), expected::kEigSlow, 1e-13);
  EXPECT_NEAR(ev[1].real(), expected::kEigFast, 1e-12);
  EXPECT_EQ(ev[0].imag(), 0.0);
}

TEST(EigenvaluesTest, NoFeedbackOnStraightRoadIsDoubleZero) {
  const auto ev = Eigenvalues(Linearize(0.0, {0.0, 0.3}, kBaseline));
  EXPECT_EQ(std::abs(ev[0]), 0.0);
  EXPECT_EQ(std::abs(ev[1]), 0.0);
}

TEST(EigenvaluesTest, MatchEigenSolverAndTraceDeterminant) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ug(-3.0, 3.0);
  std::uniform_real_distribution<double> uk(-1.0, 1.0);
  const double kbar = KappaBar(kBaseline);
  for (int i = 0; i < 2000; ++i) {
    const Gains g{ug(rng), ug(rng)};
    const double kappa0 = uk(rng) * kbar;
    const LinearModel m = Linearize(kappa0, g, kBaseline);
    const CharacteristicPolynomial p = CharacteristicCoefficients(m);
    const double scale = 1.0 + std::abs(m.a.trace()) + std::abs(m.a.determinant());
    ASSERT_NEAR(p.c1, -m.a.trace(), 1e-12 * scale);
    ASSERT_NEAR(p.c0, m.a.determinant(), 1e-12 * scale);
    Eigen::EigenSolver<Eigen::Matrix2d> solver(m.a);
    std::array<std::complex<double>, 2> ref{solver.eigenvalues()(0),
                                            solver.eigenvalues()(1)};
    auto key = [](const std::complex<double>& z) {
      return std::make_pair(z.real(), z.imag());
    };
    std::sort(ref.begin(), ref.end(), [&](auto a, auto b) { return key(a) > key(b); });
    auto ours = Eigenvalues(m);
    std::sort(ours.begin(), ours.end(), [&](auto a, auto b) { return key(a) > key(b); });
    for (int k = 0; k < 2; ++k) {
      ASSERT_LT(std::abs(ours[k] - ref[k]), 1e-9 * (1.0 + std::abs(ref[k])));
    }
  }
}

TEST(IsStableTest, Examples) {
  const StabilityVerdict v = IsStable(0.0, kBaselineGains, kBaseline);
  EXPECT_TRUE(v.stable);
  EXPECT_FALSE(v.marginal);
  EXPECT_EQ(v.sufficient, SufficientCondition::kNone);  // 0.02 < 0.092
  const StabilityVerdict h = IsStable(0.0, {0.8, -2.0}, kBaseline);
  EXPECT_TRUE(h.stable);
  EXPECT_EQ(h.sufficient, SufficientCondition::kPositiveFeedback);
  const StabilityVerdict n = IsStable(0.1, {-0.8, 0.1}, kBaseline);
  EXPECT_EQ(n.sufficient, SufficientCondition::kNegativeFeedback);
  EXPECT_EQ(SufficientConditionName(n.sufficient), "negative_feedback");
}

TEST(IsStableTest, VerdictFlipsAcrossDampingBoundary) {
  for (double kappa0 : {0.0, 0.05, 0.15}) {
    const double l1 = ComputeLambdas(kappa0, {}, kBaseline).l1;
    const double k2_boundary = -l1 / kBaseline.sensor_offset;
    const StabilityVerdict inside = IsStable(kappa0, {0.8, k2_boundary - 1e-6}, kBaseline);
    const StabilityVerdict outside = IsStable(kappa0, {0.8, k2_boundary + 1e-6}, kBaseline);
    EXPECT_TRUE(inside.stable) << kappa0;
    EXPECT_FALSE(outside.stable) << kappa0;
    EXPECT_TRUE(IsStable(kappa0, {0.8, k2_boundary}, kBaseline).marginal);
  }
}

TEST(LambdaBoundsTest, LambdaBoundsOverCurvatureRange) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double d : {0.0, 0.5, 2.0, 3.0, 6.0}) {
    VehicleParams p = kBaseline;
    p.sensor_offset = d;
    const double kbar = KappaBar(p);
    const double lower = Lambda1Lower(p);
    for (int i = 0; i < 1000; ++i) {
      const Lambdas lam = ComputeLambdas(u(rng) * kbar, {}, p);
      ASSERT_GE(lam.l1, lower - 1e-15);
      ASSERT_LE(lam.l1, 1.0);
      ASSERT_GT(lam.l2, 0.0);
      if (d > p.wheelbase) ASSERT_GT(lam.l2, p.wheelbase * p.wheelbase / (d * d));
    }
  }
}

TEST(SufficientConditionTest, SufficientConditionsImplyStability) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ud(0.1, 5.0);
  std::uniform_real_distribution<double> ul(1.0, 5.0);
  std::uniform_real_distribution<double> ug(0.05, 1.2);
  std::uniform_real_distribution<double> uk1(0.01, 5.0);
  std::uniform_real_distribution<double> uextra(1e-6, 5.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    VehicleParams p{ul(rng), ud(rng), ug(rng), 20.0};
    Gains g;
    if (i % 2 == 0) {
      g = {-uk1(rng), NegativeFeedbackK2Threshold(p) + uextra(rng)};
    } else {
      g = {uk1(rng), -1.0 / p.sensor_offset - uextra(rng)};
    }
    const double kbar = KappaBar(p);
    for (int j = 0; j < 50; ++j) {
      const double kappa0 = u(rng) * kbar;
      const StabilityVerdict v = IsStable(kappa0, g, p);
      ASSERT_NE(v.sufficient, SufficientCondition::kNone);
      ASSERT_TRUE(v.stable) << "l=" << p.wheelbase << " d=" << p.sensor_offset
                            << " k1=" << g.k1 << " k2=" << g.k2 << " kappa0=" << kappa0;
    }
  }
}

// With a sensor near the rear axle the positive-feedback condition needs a
// large |k2|, and a 10 m initial deviation then saturates the feedback.
TEST(SmallOffsetTest, SmallOffsetPositiveFeedbackSaturates) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ud(0.01, 0.5);
  std::uniform_real_distribution<double> uk1(0.05, 3.0);
  std::uniform_real_distribution<double> uextra(1e-6, 3.0);
  for (int i = 0; i < 500; ++i) {
    VehicleParams p = kBaseline;
    p.sensor_offset = ud(rng);
    const Gains g{uk1(rng), -1.0 / p.sensor_offset - uextra(rng)};
    ASSERT_EQ(IsStable(0.0, g, p).sufficient, SufficientCondition::kPositiveFeedback);
    ASSERT_GE(std::abs(g.k2), 2.0);
    const ControlConfig c = ControlConfig::Make(g, 4.0, Variant::kFull, p);
    const SteeringDecision d = Control({0.0, -10.0, 0.0}, 0.0, c, p);
    ASSERT_TRUE(d.saturated);
  }
}

TEST(AmplificationTest, Examples) {
  EXPECT_EQ(Amplification(0.0, 0.0, kBaselineGains, kBaseline), 0.0);
  VehicleParams rear = kBaseline;
  rear.sensor_offset = 0.0;
  for (double w : {0.1, 1.0, 10.0}) {
    EXPECT_EQ(Amplification(w, 0.05, kBaselineGains, rear), 0.0);
  }
  EXPECT_NEAR(Amplification(2 * kPi * 20.0 / 250.0, 0.0, kBaselineGains, kBaseline),
              expected::kAmplificationAtCosineFreq, 1e-14);
}

// |C (j w I - A)^-1 B j w| evaluated with complex linear algebra.
double ResolventMagnitude(const LinearModel& m, double omega) {
  using C = std::complex<double>;
  const Eigen::Matrix2cd a = m.a.cast<C>();
  const Eigen::Matrix2cd sys = C(0.0, omega) * Eigen::Matrix2cd::Identity() - a;
  const Eigen::Vector2cd x = sys.partialPivLu().solve(m.b.cast<C>());
  return std::abs((m.c.cast<C>() * x)(0) * C(0.0, omega));
}

TEST(AmplificationTest, MatchesResolvent) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ulog(-3.0, 3.0);
  const double kbar = KappaBar(kBaseline);
  const Gains gains_list[] = {kBaselineGains, {-2.57 / 2.0, 0.02}, {0.8, -2.0}, {-2.0, 1.5}};
  for (const Gains& g : gains_list) {
    for (double kappa0 : {0.0, 0.5 * kbar, kbar}) {
      const LinearModel m = Linearize(kappa0, g, kBaseline);
      for (int i = 0; i < 100; ++i) {
        const double w = std::pow(10.0, ulog(rng));
        const double closed = Amplification(w, kappa0, g, kBaseline);
        const double numeric = ResolventMagnitude(m, w);
        ASSERT_NEAR(closed, numeric, 1e-10 * std::max(1.0, numeric))
            << "w=" << w << " kappa0=" << kappa0;
      }
    }
  }
}

double GoldenSectionMaxLog(const std::function<double(double)>& f, double lo,
                           double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo);
  double b = std::log(hi);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (f(std::exp(c)) > f(std::exp(d))) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return std::exp(0.5 * (a + b));
}

TEST(PeakAmplificationTest, BaselineClosedForm) {
  const PeakAmplification p = PeakAmplificationOf(0.0, kBaselineGains, kBaseline);
  EXPECT_TRUE(p.stable);
  EXPECT_TRUE(p.bounded);
  EXPECT_NEAR(p.m_max, expected::kMMaxBaseline, 1e-13);
  EXPECT_NEAR(p.omega_m, expected::kOmegaMBaseline, 1e-14);
}

TEST(PeakAmplificationTest, MatchesNumericMaximization) {
  const double kbar = KappaBar(kBaseline);
  const Gains gains_list[] = {kBaselineGains, {0.8, -2.0}, {-2.0, 1.5}, {-0.3, 0.5}};
  for (const Gains& g : gains_list) {
    for (double kappa0 : {0.0, 0.5 * kbar, kbar}) {
      const PeakAmplification p = PeakAmplificationOf(kappa0, g, kBaseline);
      ASSERT_TRUE(p.stable);
      auto m = [&](double w) { return Amplification(w, kappa0, g, kBaseline); };
      // Coarse grid brackets the peak; golden section refines it.
      double best_w = 1e-3;
      for (int i = 0; i <= 4000; ++i) {
        const double w = std::pow(10.0, -3.0 + 6.0 * i / 4000.0);
        if (m(w) > m(best_w)) best_w = w;
      }
      const double w_star = GoldenSectionMaxLog(m, best_w / 1.01, best_w * 1.01);
      EXPECT_LT(Rel(m(w_star), p.m_max), 1e-6) << "k1=" << g.k1 << " kappa0=" << kappa0;
      EXPECT_LT(Rel(w_star, p.omega_m), 1e-4) << "k1=" << g.k1 << " kappa0=" << kappa0;
    }
  }
}

TEST(PeakAmplificationTest, ZeroAtOptimalGain) {
  const double kbar = KappaBar(kBaseline);
  for (double f : {-1.0, -0.5, 0.0, 0.1, 0.5, 0.77, 1.0}) {
    const double kappa0 = f * kbar;
    const Gains g{ZeroAmplificationGain(kappa0, kBaseline), 0.02};
    EXPECT_EQ(PeakAmplificationOf(kappa0, g, kBaseline).m_max, 0.0) << f;
    EXPECT_EQ(Amplification(1.3, kappa0, g, kBaseline), 0.0) << f;
  }
  EXPECT_EQ(ZeroAmplificationGain(0.0, kBaseline), -2.57 / 2.0);
}

// k1 = -l/d cancels the amplification only at kappa0 = 0; for curved roads
// its peak grows roughly with kappa0^2 relative to the baseline gains.
TEST(PeakAmplificationTest, FixedOptimalGainNearStraightRoad) {
  const double kbar = KappaBar(kBaseline);
  const Gains q{-2.57 / 2.0, 0.02};
  EXPECT_EQ(PeakAmplificationOf(0.0, q, kBaseline).m_max, 0.0);
  for (double f = -0.05; f <= 0.05; f += 0.005) {
    const double kappa0 = f * kbar;
    const double ratio = PeakAmplificationOf(kappa0, q, kBaseline).m_max /
                         PeakAmplificationOf(kappa0, kBaselineGains, kBaseline).m_max;
    EXPECT_LE(ratio, 1e-3) << f;
  }
  const double half = PeakAmplificationOf(0.5 * kbar, q, kBaseline).m_max /
                      PeakAmplificationOf(0.5 * kbar, kBaselineGains, kBaseline).m_max;
  EXPECT_LT(half, 0.05);
}

TEST(FrequencyResponseTest, SamplesBoundedByPeak) {
  const FreqResponse fr = SampleFrequencyResponse(0.05, kBaselineGains, kBaseline,
                                                  1e-3, 1e3, 400);
  ASSERT_GE(fr.samples.size(), 400u);
  EXPECT_EQ(fr.samples.front().omega, 1e-3);
  EXPECT_EQ(fr.samples.back().omega, 1e3);
  bool has_peak = false;
  for (size_t i = 0; i < fr.samples.size(); ++i) {
    if (i > 0) EXPECT_GT(fr.samples[i].omega, fr.samples[i - 1].omega);
    EXPECT_LE(fr.samples[i].m, fr.peak.m_max * (1 + 1e-12));
    has_peak |= fr.samples[i].omega == fr.peak.omega_m;
  }
  EXPECT_TRUE(has_peak);
  EXPECT_THROW(SampleFrequencyResponse(0.0, kBaselineGains, kBaseline, 0.0, 1.0, 10),
               ConfigError);
}

TEST(StabilityRegionScanTest, LayoutAndKnownCells) {
  const double kbar = KappaBar(kBaseline);
  ScanSpec spec;
  spec.k1_min = -0.8;
  spec.k1_max = 0.8;
  spec.k2_min = -2.0;
  spec.k2_max = 0.02;
  spec.resolution = 3;
  spec.kappa0s = {0.0, 0.5 * kbar, kbar};
  const auto cells = StabilityRegionScan(spec, kBaseline, 1);
  ASSERT_EQ(cells.size(), 27u);
  // Order: kappa0, then k2, then k1 varies fastest.
  EXPECT_EQ(cells[1].k1, 0.0);
  EXPECT_EQ(cells[3].k2, -0.99);
  EXPECT_EQ(cells[9].kappa0, 0.5 * kbar);
  for (size_t k = 0; k < 3; ++k) {
    const ScanCell& baseline = cells[k * 9 + 6];  // k1 = -0.8, k2 = 0.02
    EXPECT_EQ(baseline.k1, -0.8);
    EXPECT_EQ(baseline.k2, 0.02);
    EXPECT_TRUE(baseline.verdict.stable);
    const ScanCell& h = cells[k * 9 + 2];  // k1 = 0.8, k2 = -2
    EXPECT_TRUE(h.verdict.stable);
  }
}

TEST(StabilityRegionScanTest, ThreadCountDoesNotChangeResults) {
  ScanSpec spec;
  spec.resolution = 60;
  spec.kappa0s = {0.0, 0.1, 0.6};  // 0.6 is untrackable for d = 2
  const auto a = StabilityRegionScan(spec, kBaseline, 1);
  const auto b = StabilityRegionScan(spec, kBaseline, 7);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].verdict.stable, b[i].verdict.stable);
    ASSERT_EQ(std::memcmp(&a[i].peak.m_max, &b[i].peak.m_max, sizeof(double)), 0);
    ASSERT_EQ(a[i].error, b[i].error);
  }
  EXPECT_FALSE(a.back().error.empty());
  EXPECT_TRUE(a.front().error.empty());
}

TEST(StabilityRegionScanTest, PredicateMatchesEigenvaluesOnGrid) {
  ScanSpec spec;
  spec.resolution = 80;
  spec.kappa0s = {0.0, 0.5 * KappaBar(kBaseline), KappaBar(kBaseline)};
  for (const ScanCell& c : StabilityRegionScan(spec, kBaseline)) {
    if (c.verdict.marginal) continue;
    const Eigen::Matrix2d a = Linearize(c.kappa0, {c.k1, c.k2}, kBaseline).a;
    const double max_re = Eigen::EigenSolver<Eigen::Matrix2d>(a).eigenvalues().real().maxCoeff();
    ASSERT_EQ(c.verdict.stable, max_re < 0.0) << c.k1 << " " << c.k2 << " " << c.kappa0;
  }
}

// For d > l the set of gains reaching a given peak amplification is
// narrower than for d < l.
TEST(StabilityRegionScanTest, IsoAmplificationRegionNarrowerForLargeOffset) {
  ScanSpec spec;
  spec.resolution = 200;
  spec.kappa0s = {0.0};
  VehicleParams far = kBaseline;
  far.sensor_offset = 3.0;
  auto count_below = [&](const VehicleParams& p, double level) {
    int n = 0;
    for (const ScanCell& c : StabilityRegionScan(spec, p)) {
      n += c.verdict.stable && c.peak.m_max <= level ? 1 : 0;
    }
    return n;
  };
  for (double level : {0.5, 1.0, 2.0}) {
    EXPECT_LT(count_below(far, level), count_below(kBaseline, level)) << level;
  }
}

}  // namespace
}  // namespace sensorlat
