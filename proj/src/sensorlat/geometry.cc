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

#include "sensorlat/geometry.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "sensorlat/error.h"

namespace sensorlat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Shape-preserving derivative estimates (Fritsch-Carlson with the
// Fritsch-Butland weighted harmonic mean in the interior).
std::vector<double> PchipSlopes(const std::vector<double>& s,
                                const std::vector<double>& y) {
  const size_t n = s.size();
  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = (y[1] - y[0]) / (s[1] - s[0]);
    return m;
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = s[k + 1] - s[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) {
      d = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) {
      d = 3.0 * d0;
    }
    return d;
  };
  m[0] = edge(h[0], h[1], delta[0], delta[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return m;
}

double CosineKappa(const CosineShape& c, double s) {
  return 0.5 * c.kappa_max * (1.0 - std::cos(kTwoPi * s / c.period));
}

double CosineDKappa(const CosineShape& c, double s) {
  return c.kappa_max * std::numbers::pi / c.period *
         std::sin(kTwoPi * s / c.period);
}

void Validate(const PathSpec& spec) {
  const auto& a = spec.anchor;
  if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.psi)) {
    throw ConfigError("path anchor must be finite");
  }
  std::visit(
      Overloaded{
          [](const StraightShape&) {},
          [](const CircularShape& c) {
            if (!(c.radius > 0.0) || !std::isfinite(c.radius)) {
              throw ConfigError("circular path radius must be positive");
            }
          },
          [](const CosineShape& c) {
            if (!(c.period > 0.0) || !std::isfinite(c.period)) {
              throw ConfigError("cosine path period must be positive");
            }
            if (!(c.kappa_max >= 0.0) || !std::isfinite(c.kappa_max)) {
              throw ConfigError("cosine path kappa_max must be >= 0");
            }
            if (c.periods < 1) {
              throw ConfigError("cosine path needs at least one period");
            }
          },
          [](const SampledShape& t) {
            if (t.s.size() != t.kappa.size() || t.s.size() < 2) {
              throw ConfigError(
                  "sampled path needs at least two (s, kappa) rows");
            }
            for (size_t k = 0; k < t.s.size(); ++k) {
              if (!std::isfinite(t.s[k]) || !std::isfinite(t.kappa[k])) {
                throw ConfigError("sampled path contains non-finite values");
              }
              if (k > 0 && !(t.s[k] > t.s[k - 1])) {
                throw ConfigError(
                    "sampled path arc lengths must be strictly increasing");
              }
            }
          },
      },
      spec.shape);
}

}  // namespace

struct Path::PoseTable {
  double s0 = 0.0;
  double step = 0.0;
  std::vector<Pose2> poses;
  std::vector<double> kappa;

  double s_end() const {
    return s0 + step * static_cast<double>(poses.size() - 1);
  }
};

Path::Path(PathSpec spec) : spec_(std::move(spec)) {
  Validate(spec_);

  double s0 = 0.0;
  double s1 = 0.0;
  if (const auto* t = std::get_if<SampledShape>(&spec_.shape)) {
    pchip_slopes_ = PchipSlopes(t->s, t->kappa);
    s0 = t->s.front();
    s1 = t->s.back();
  } else if (const auto* c = std::get_if<CosineShape>(&spec_.shape)) {
    s1 = c->period * c->periods;
  } else {
    return;
  }

  // Integrate (cos psi, sin psi, kappa) with fixed-step RK4 and cache the
  // poses on the grid.
  auto table = std::make_shared<PoseTable>();
  const auto steps = static_cast<size_t>(std::ceil((s1 - s0) / kPoseTableStep));
  table->s0 = s0;
  table->step = (s1 - s0) / static_cast<double>(steps);
  table->poses.resize(steps + 1);
  table->kappa.resize(steps + 1);
  table->poses[0] = spec_.anchor;
  table->kappa[0] = CurvatureAt(s0).kappa;
  const double h = table->step;
  for (size_t k = 0; k < steps; ++k) {
    const double s = s0 + h * static_cast<double>(k);
    const Pose2& p = table->poses[k];
    const double kap_mid = CurvatureAt(s + 0.5 * h).kappa;
    const double kap_end = k + 1 == steps ? CurvatureAt(s1).kappa
                                          : CurvatureAt(s + h).kappa;
    const double k1 = table->kappa[k];
    // Heading stages: psi' = kappa(s) does not depend on the pose.
    const double psi2 = p.psi + 0.5 * h * k1;
    const double psi3 = p.psi + 0.5 * h * kap_mid;
    const double psi4 = p.psi + h * kap_mid;
    Pose2 next;
    next.x = p.x + h / 6.0 *
                       (std::cos(p.psi) + 2.0 * std::cos(psi2) +
                        2.0 * std::cos(psi3) + std::cos(psi4));
    next.y = p.y + h / 6.0 *
                       (std::sin(p.psi) + 2.0 * std::sin(psi2) +
                        2.0 * std::sin(psi3) + std::sin(psi4));
    next.psi = p.psi + h / 6.0 * (k1 + 4.0 * kap_mid + kap_end);
    table->poses[k + 1] = next;
    table->kappa[k + 1] = kap_end;
  }
  table_ = std::move(table);
}

double Path::domain_begin() const {
  if (const auto* t = std::get_if<SampledShape>(&spec_.shape)) {
    return t->s.front();
  }
  return -std::numeric_limits<double>::infinity();
}

double Path::domain_end() const {
  if (const auto* t = std::get_if<SampledShape>(&spec_.shape)) {
    return t->s.back();
  }
  return std::numeric_limits<double>::infinity();
}

std::optional<CosineShape> Path::cosine() const {
  if (const auto* c = std::get_if<CosineShape>(&spec_.shape)) return *c;
  return std::nullopt;
}

double Path::MaxAbsCurvature() const {
  return std::visit(
      Overloaded{
          [](const StraightShape&) { return 0.0; },
          [](const CircularShape& c) { return 1.0 / c.radius; },
          [](const CosineShape& c) { return c.kappa_max; },
          [](const SampledShape& t) {
            // A monotone cubic never leaves the range of its knot values.
            double m = 0.0;
            for (double k : t.kappa) m = std::max(m, std::abs(k));
            return m;
          },
      },
      spec_.shape);
}

CurvatureSample Path::CurvatureAt(double s) const {
  return std::visit(
      Overloaded{
          [](const StraightShape&) { return CurvatureSample{}; },
          [](const CircularShape& c) {
            return CurvatureSample{1.0 / c.radius, 0.0};
          },
          [s](const CosineShape& c) {
            const double end = c.period * c.periods;
            if (s <= 0.0) return CurvatureSample{CosineKappa(c, 0.0), 0.0};
            if (s >= end) return CurvatureSample{CosineKappa(c, end), 0.0};
            return CurvatureSample{CosineKappa(c, s), CosineDKappa(c, s)};
          },
          [this, s](const SampledShape& t) {
            if (!(s >= t.s.front() && s <= t.s.back())) {
              throw DomainError("arc length " + std::to_string(s) +
                                " outside sampled path table");
            }
            const auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
            size_t k = static_cast<size_t>(it - t.s.begin());
            k = std::clamp<size_t>(k, 1, t.s.size() - 1) - 1;
            const double h = t.s[k + 1] - t.s[k];
            const double u = (s - t.s[k]) / h;
            const double y0 = t.kappa[k];
            const double y1 = t.kappa[k + 1];
            const double m0 = pchip_slopes_[k];
            const double m1 = pchip_slopes_[k + 1];
            const double u2 = u * u;
            const double u3 = u2 * u;
            const double kappa = (2 * u3 - 3 * u2 + 1) * y0 +
                                 (u3 - 2 * u2 + u) * h * m0 +
                                 (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * m1;
            const double dkappa = (6 * u2 - 6 * u) * (y0 - y1) / h +
                                  (3 * u2 - 4 * u + 1) * m0 +
                                  (3 * u2 - 2 * u) * m1;
            return CurvatureSample{kappa, dkappa};
          },
      },
      spec_.shape);
}

Pose2 Path::TablePose(double s) const {
  const PoseTable& t = *table_;
  const double s_end = t.s_end();
  if (s <= t.s0 || s >= s_end) {
    // Straight extension with the end-point heading.
    const bool before = s <= t.s0;
    const Pose2& p = before ? t.poses.front() : t.poses.back();
    const double ds = s - (before ? t.s0 : s_end);
    return {p.x + ds * std::cos(p.psi), p.y + ds * std::sin(p.psi), p.psi};
  }
  const double r = (s - t.s0) / t.step;
  size_t k = static_cast<size_t>(r);
  k = std::min(k, t.poses.size() - 2);
  const double u = r - static_cast<double>(k);
  const double h = t.step;
  const Pose2& a = t.poses[k];
  const Pose2& b = t.poses[k + 1];
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  auto hermite = [&](double y0, double y1, double d0, double d1) {
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  };
  return {hermite(a.x, b.x, std::cos(a.psi), std::cos(b.psi)),
          hermite(a.y, b.y, std::sin(a.psi), std::sin(b.psi)),
          hermite(a.psi, b.psi, t.kappa[k], t.kappa[k + 1])};
}

Pose2 Path::PoseAt(double s) const {
  const Pose2& a = spec_.anchor;
  return std::visit(
      Overloaded{
          [&](const StraightShape&) {
            return Pose2{a.x + s * std::cos(a.psi), a.y + s * std::sin(a.psi),
                         a.psi};
          },
          [&](const CircularShape& c) {
            const double psi = a.psi + s / c.radius;
            return Pose2{a.x + c.radius * (std::sin(psi) - std::sin(a.psi)),
                         a.y - c.radius * (std::cos(psi) - std::cos(a.psi)),
                         psi};
          },
          [&](const CosineShape&) { return TablePose(s); },
          [&](const SampledShape& t) {
            if (!(s >= t.s.front() && s <= t.s.back())) {
              throw DomainError("arc length " + std::to_string(s) +
                                " outside sampled path table");
            }
            return TablePose(s);
          },
      },
      spec_.shape);
}

Path BuildPath(const PathSpec& spec) { return Path(spec); }

EarthState PathToEarth(const Path& path, const PathState& state) {
  const Pose2 d = path.PoseAt(state.s);
  return {d.x - state.e * std::sin(d.psi), d.y + state.e * std::cos(d.psi),
          d.psi + state.theta};
}

double LateralDeviation(const Pose2& d, double x, double y) {
  return -(x - d.x) * std::sin(d.psi) + (y - d.y) * std::cos(d.psi);
}

PathState ProjectToPath(const Path& path, const EarthState& state,
                        double s_hint) {
  double s = s_hint;
  bool converged = false;
  for (int it = 0; it < kProjectionMaxIterations; ++it) {
    const Pose2 d = path.PoseAt(s);
    const double rx = state.x - d.x;
    const double ry = state.y - d.y;
    const double c = std::cos(d.psi);
    const double sn = std::sin(d.psi);
    const double f = rx * c + ry * sn;
    const double e = -rx * sn + ry * c;
    const double kappa = path.CurvatureAt(s).kappa;
    const double slope = -(1.0 - kappa * e);
    if (std::abs(slope) < 1e-12) {
      throw DomainError("ambiguous projection: point at curvature center");
    }
    const double ds = -f / slope;
    s += ds;
    if (!std::isfinite(s)) break;
    if (std::abs(ds) < kProjectionTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ProjectionError("closest-point search did not converge from s = " +
                          std::to_string(s_hint));
  }
  const Pose2 d = path.PoseAt(s);
  PathState out;
  out.s = s;
  out.e = LateralDeviation(d, state.x, state.y);
  if (std::abs(out.e * path.CurvatureAt(s).kappa) >= 1.0) {
    throw DomainError("ambiguous projection: |e * kappa| >= 1");
  }
  out.theta = WrapAngleError(state.psi, d.psi);
  return out;
}

double WrapAngleError(double psi, double psi_d) {
  const double diff = psi - psi_d;
  // nearbyint honors the default round-half-to-even mode.
  double out = diff - kTwoPi * std::nearbyint(diff / kTwoPi);
  if (out >= std::numbers::pi) out -= kTwoPi;
  if (out < -std::numbers::pi) out += kTwoPi;
  return out;
}

SampledShape LoadCurvatureCsv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open curvature table " + file.string());
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t\r");
    const auto e = v.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  };
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(file.string() + ": empty curvature table");
  }
  {
    std::istringstream header(line);
    std::string a, b;
    std::getline(header, a, ',');
    std::getline(header, b);
    if (trim(a) != "s_meters" || trim(b) != "kappa_per_meter") {
      throw ConfigError(file.string() +
                        ": header must be 's_meters,kappa_per_meter'");
    }
  }
  SampledShape out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string a, b;
    std::getline(fields, a, ',');
    std::getline(fields, b);
    try {
      size_t pa = 0, pb = 0;
      const double s = std::stod(trim(a), &pa);
      const double k = std::stod(trim(b), &pb);
      if (pa != trim(a).size() || pb != trim(b).size()) throw std::exception();
      out.s.push_back(s);
      out.kappa.push_back(k);
    } catch (const std::exception&) {
      throw ConfigError(file.string() + ": malformed row " +
                        std::to_string(row));
    }
  }
  return out;
}

}  // namespace sensorlat
