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


#include "sensorlat/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "sensorlat/error.h"

namespace sensorlat {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

struct UnitFactor {
  std::string_view unit;
  double factor;
};

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<UnitFactor> UnitsFor(Dimension dimension) {
  switch (dimension) {
    case Dimension::kLength:
      return {{"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}, {"mm", 1e-3}};
    case Dimension::kInverseLength:
      return {{"1/m", 1.0}, {"m^-1", 1.0}, {"1/km", 1e-3}};
    case Dimension::kSpeed:
      return {{"m/s", 1.0}, {"km/h", 1.0 / 3.6}};
    case Dimension::kAcceleration:
      return {{"m/s^2", 1.0}, {"m/s2", 1.0}};
    case Dimension::kAngle:
      return {{"rad", 1.0}, {"deg", kDeg}};
    case Dimension::kTime:
      return {{"s", 1.0}, {"ms", 1e-3}};
    case Dimension::kAngularRate:
      return {{"rad/s", 1.0}, {"1/s", 1.0}};
  }
  return {};
}

std::string_view DimensionName(Dimension dimension) {
  switch (dimension) {
    case Dimension::kLength: return "length";
    case Dimension::kInverseLength: return "inverse length";
    case Dimension::kSpeed: return "speed";
    case Dimension::kAcceleration: return "acceleration";
    case Dimension::kAngle: return "angle";
    case Dimension::kTime: return "time";
    case Dimension::kAngularRate: return "angular rate";
  }
  return "quantity";
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

// A JSON object being consumed key by key. Absent required keys are
// collected rather than thrown so one error can list all of them.
class Section {
 public:
  Section(const Json* node, std::string prefix,
          std::vector<std::string>* missing)
      : node_(node), prefix_(std::move(prefix)), missing_(missing) {
    if (node_ != nullptr && !node_->is_object()) {
      throw ConfigError(Name() + " must be an object");
    }
  }

  bool present() const { return node_ != nullptr; }

  std::string Key(std::string_view key) const {
    return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
  }

  const Json* Find(std::string_view key, bool required) {
    used_.insert(std::string(key));
    if (node_ != nullptr) {
      auto it = node_->find(std::string(key));
      if (it != node_->end() && !it->is_null()) return &*it;
    }
    if (required) missing_->push_back(Key(key));
    return nullptr;
  }

  std::optional<double> Quantity(std::string_view key, Dimension dimension,
                                 bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return std::nullopt;
    if (v->is_number()) {
      if (dimension == Dimension::kAngle) {
        throw ConfigError(Key(key) + ": angles need a unit suffix (deg or rad)");
      }
      return Finite(key, v->get<double>());
    }
    if (v->is_string()) {
      return ParseQuantity(v->get<std::string>(), dimension, Key(key));
    }
    throw ConfigError(Key(key) + ": expected a number or a \"<value> <unit>\" string");
  }

  std::optional<double> Number(std::string_view key, bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) throw ConfigError(Key(key) + ": expected a number");
    return Finite(key, v->get<double>());
  }

  std::optional<int> Integer(std::string_view key, bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      throw ConfigError(Key(key) + ": expected an integer");
    }
    return v->get<int>();
  }

  std::optional<std::string> String(std::string_view key,
                                    bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) throw ConfigError(Key(key) + ": expected a string");
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> Numbers(std::string_view key,
                                             bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array()) throw ConfigError(Key(key) + ": expected an array");
    std::vector<double> out;
    for (const auto& item : *v) {
      if (!item.is_number()) {
        throw ConfigError(Key(key) + ": expected an array of numbers");
      }
      out.push_back(Finite(key, item.get<double>()));
    }
    return out;
  }

  Section Child(std::string_view key) {
    return Section(Find(key, false), Key(key), missing_);
  }

  // Throws on any key that was never looked up.
  void RejectUnknown() const {
    if (node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!used_.count(key)) throw ConfigError("unknown key '" + Key(key) + "'");
    }
  }

 private:
  std::string Name() const { return prefix_.empty() ? "config" : prefix_; }

  double Finite(std::string_view key, double v) const {
    if (!std::isfinite(v)) throw ConfigError(Key(key) + ": value is not finite");
    return v;
  }

  const Json* node_;
  std::string prefix_;
  std::vector<std::string>* missing_;
  std::set<std::string> used_;
};

VehicleParams ParseVehicle(Section& root, std::vector<std::string>* warnings) {
  Section s = root.Child("vehicle");
  VehicleParams p;
  p.wheelbase = s.Quantity("wheelbase", Dimension::kLength).value_or(0.0);
  p.sensor_offset = s.Quantity("sensor_offset", Dimension::kLength).value_or(0.0);
  p.max_steer = s.Quantity("max_steer", Dimension::kAngle).value_or(0.0);
  p.speed = s.Quantity("speed", Dimension::kSpeed).value_or(0.0);
  s.RejectUnknown();
  if (p.sensor_offset < 0.0) {
    warnings->push_back(
        "vehicle.sensor_offset is negative: the sensor sits behind the rear "
        "axle; the model remains valid but is outside the validated range");
  }
  return p;
}

Pose2 ParseAnchor(Section& path) {
  Section s = path.Child("anchor");
  Pose2 anchor;
  anchor.x = s.Quantity("x", Dimension::kLength, false).value_or(0.0);
  anchor.y = s.Quantity("y", Dimension::kLength, false).value_or(0.0);
  anchor.psi = s.Quantity("psi", Dimension::kAngle, false).value_or(0.0);
  s.RejectUnknown();
  return anchor;
}

PathSpec ParsePath(Section& root, const std::filesystem::path& base_dir,
                   std::vector<std::filesystem::path>* inputs) {
  Section s = root.Child("path");
  PathSpec spec;
  const std::string kind = s.String("kind").value_or("");
  if (kind == "straight" || kind.empty()) {
    spec.shape = StraightShape{};
  } else if (kind == "circular") {
    spec.shape =
        CircularShape{s.Quantity("radius", Dimension::kLength).value_or(0.0)};
  } else if (kind == "cosine") {
    CosineShape c;
    c.kappa_max = s.Quantity("kappa_max", Dimension::kInverseLength).value_or(0.0);
    c.period = s.Quantity("period", Dimension::kLength).value_or(0.0);
    c.periods = s.Integer("periods").value_or(1);
    spec.shape = c;
  } else if (kind == "sampled") {
    auto csv = s.String("csv", false);
    auto sv = s.Numbers("s", false);
    auto kv = s.Numbers("kappa", false);
    if (csv && (sv || kv)) {
      throw ConfigError(s.Key("csv") + ": give either a csv file or inline s/kappa arrays");
    }
    if (csv) {
      std::filesystem::path file(*csv);
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      inputs->push_back(file);
      spec.shape = LoadCurvatureCsv(file);
    } else if (sv && kv) {
      spec.shape = SampledShape{*sv, *kv};
    } else {
      throw ConfigError(s.Key("csv") + ": sampled path needs a csv file or s/kappa arrays");
    }
  } else {
    throw ConfigError(s.Key("kind") + ": unknown path kind '" + kind +
                      "' (expected straight, circular, cosine or sampled)");
  }
  spec.anchor = ParseAnchor(s);
  s.RejectUnknown();
  return spec;
}

Variant ParseVariantAt(const std::string& name, const std::string& key) {
  try {
    return ParseVariant(name);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

ScenarioFile ParseScenario(Section& root, const std::filesystem::path& base_dir,
                           LoadedConfig* out,
                           std::vector<std::string>* missing) {
  ScenarioFile file;
  ScenarioConfig& c = file.scenario;
  c.vehicle = ParseVehicle(root, &out->warnings);

  Section control = root.Child("control");
  c.gains.k1 = control.Number("k1").value_or(0.0);
  c.gains.k2 = control.Quantity("k2", Dimension::kInverseLength).value_or(0.0);
  c.max_lateral_accel =
      control.Quantity("max_lateral_accel", Dimension::kAcceleration).value_or(0.0);
  if (auto v = control.String("variant", false)) {
    c.variant = ParseVariantAt(*v, control.Key("variant"));
  }
  control.RejectUnknown();

  c.path = ParsePath(root, base_dir, &out->inputs);

  Section initial = root.Child("initial");
  c.initial.s = initial.Quantity("s", Dimension::kLength, false).value_or(0.0);
  c.initial.e = initial.Quantity("e", Dimension::kLength, false).value_or(0.0);
  c.initial.theta =
      initial.Quantity("theta", Dimension::kAngle, false).value_or(0.0);
  initial.RejectUnknown();

  Section sim = root.Child("simulation");
  c.dt = sim.Quantity("dt", Dimension::kTime, false).value_or(c.dt);
  auto t_end = sim.Quantity("t_end", Dimension::kTime, false);
  if (auto f = sim.String("frame", false)) {
    try {
      c.frame = ParseFrame(*f);
    } catch (const ConfigError& e) {
      throw ConfigError(sim.Key("frame") + ": " + e.what());
    }
  }
  c.output_interval = sim.Quantity("output_interval", Dimension::kTime, false)
                          .value_or(c.output_interval);
  sim.RejectUnknown();

  Section compare = root.Child("compare");
  if (const Json* v = compare.Find("variants", false)) {
    if (!v->is_array() || v->empty()) {
      throw ConfigError(compare.Key("variants") + ": expected a non-empty array");
    }
    file.compare.clear();
    for (const auto& item : *v) {
      if (!item.is_string()) {
        throw ConfigError(compare.Key("variants") + ": expected variant names");
      }
      file.compare.push_back(
          ParseVariantAt(item.get<std::string>(), compare.Key("variants")));
    }
  }
  compare.RejectUnknown();

  if (!missing->empty()) return file;
  c.t_end = t_end ? *t_end : DefaultHorizon(c.path, c.vehicle.speed);
  c.Validate();
  Path validated(c.path);
  (void)validated;
  return file;
}

AnalysisFile ParseAnalysis(Section& root, LoadedConfig* out,
                           std::vector<std::string>* missing) {
  AnalysisFile file;
  file.vehicle = ParseVehicle(root, &out->warnings);

  const Json* gains = root.Find("gains", true);
  if (gains != nullptr) {
    if (!gains->is_array() || gains->empty()) {
      throw ConfigError("gains: expected a non-empty array of {name, k1, k2}");
    }
    for (size_t i = 0; i < gains->size(); ++i) {
      Section g(&(*gains)[i], "gains[" + std::to_string(i) + "]", missing);
      GainPoint point;
      point.name = g.String("name", false).value_or("G" + std::to_string(i));
      point.gains.k1 = g.Number("k1").value_or(0.0);
      point.gains.k2 = g.Quantity("k2", Dimension::kInverseLength).value_or(0.0);
      g.RejectUnknown();
      file.points.push_back(point);
    }
  }

  auto fractions = root.Numbers("kappa0_fractions", false);
  const Json* absolute = root.Find("kappa0", false);
  if (fractions && absolute != nullptr) {
    throw ConfigError("kappa0: give either kappa0 or kappa0_fractions, not both");
  }

  Section scan = root.Child("scan");
  file.scan.k1_min = scan.Number("k1_min", false).value_or(file.scan.k1_min);
  file.scan.k1_max = scan.Number("k1_max", false).value_or(file.scan.k1_max);
  file.scan.k2_min = scan.Quantity("k2_min", Dimension::kInverseLength, false)
                         .value_or(file.scan.k2_min);
  file.scan.k2_max = scan.Quantity("k2_max", Dimension::kInverseLength, false)
                         .value_or(file.scan.k2_max);
  file.scan.resolution =
      scan.Integer("resolution", false).value_or(file.scan.resolution);
  scan.RejectUnknown();
  if (!(file.scan.k1_max > file.scan.k1_min) ||
      !(file.scan.k2_max > file.scan.k2_min)) {
    throw ConfigError("scan: ranges must satisfy min < max");
  }
  if (file.scan.resolution < 2) {
    throw ConfigError("scan.resolution: need at least 2 points per axis");
  }

  Section freq = root.Child("frequency");
  file.frequency.omega_min =
      freq.Quantity("omega_min", Dimension::kAngularRate, false)
          .value_or(file.frequency.omega_min);
  file.frequency.omega_max =
      freq.Quantity("omega_max", Dimension::kAngularRate, false)
          .value_or(file.frequency.omega_max);
  file.frequency.points =
      freq.Integer("points", false).value_or(file.frequency.points);
  freq.RejectUnknown();
  if (!(file.frequency.omega_min > 0.0) ||
      !(file.frequency.omega_max > file.frequency.omega_min)) {
    throw ConfigError("frequency: need 0 < omega_min < omega_max");
  }
  if (file.frequency.points < 2) {
    throw ConfigError("frequency.points: need at least 2 points");
  }

  if (!missing->empty()) return file;
  file.vehicle.Validate();
  if (absolute != nullptr) {
    if (absolute->is_array()) {
      for (size_t i = 0; i < absolute->size(); ++i) {
        const Json& item = (*absolute)[i];
        const std::string key = "kappa0[" + std::to_string(i) + "]";
        if (item.is_number()) {
          file.kappa0s.push_back(item.get<double>());
        } else if (item.is_string()) {
          file.kappa0s.push_back(ParseQuantity(item.get<std::string>(),
                                               Dimension::kInverseLength, key));
        } else {
          throw ConfigError(key + ": expected a curvature");
        }
      }
    } else {
      throw ConfigError("kappa0: expected an array");
    }
  } else {
    const std::vector<double> f = fractions.value_or(std::vector<double>{0.0, 0.5, 1.0});
    const double kbar = KappaBar(file.vehicle);
    for (double x : f) file.kappa0s.push_back(x * kbar);
  }
  if (file.kappa0s.empty()) throw ConfigError("kappa0: list is empty");
  file.scan.kappa0s = file.kappa0s;
  return file;
}

}  // namespace

double ParseQuantity(std::string_view text, Dimension dimension,
                     std::string_view key) {
  const std::string k(key);
  std::string_view t = Trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || !std::isfinite(value)) {
    throw ConfigError(k + ": cannot read a number from '" + std::string(text) + "'");
  }
  const std::string_view unit = Trim(std::string_view(ptr, end - ptr));
  if (unit.empty()) {
    if (dimension == Dimension::kAngle) {
      throw ConfigError(k + ": angles need a unit suffix (deg or rad)");
    }
    return value;
  }
  std::string expected;
  for (const auto& u : UnitsFor(dimension)) {
    if (u.unit == unit) return value * u.factor;
    if (!expected.empty()) expected += ", ";
    expected += u.unit;
  }
  throw ConfigError(k + ": unit '" + std::string(unit) + "' is not a " +
                    std::string(DimensionName(dimension)) + " unit (expected " +
                    expected + ")");
}

LoadedConfig ParseConfig(std::string_view text,
                         const std::filesystem::path& base_dir) {
  Json doc;
  if (Trim(text).empty()) {
    doc = Json::object();
  } else {
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  LoadedConfig out;
  std::vector<std::string> missing;
  Section root(&doc, "", &missing);
  const std::string type = root.String("type", false).value_or("scenario");
  if (type == "scenario") {
    out.value = ParseScenario(root, base_dir, &out, &missing);
  } else if (type == "analysis") {
    out.value = ParseAnalysis(root, &out, &missing);
  } else {
    throw ConfigError("type: unknown config type '" + type +
                      "' (expected scenario or analysis)");
  }
  root.RejectUnknown();
  if (!missing.empty()) {
    throw ConfigError("missing required keys: " + Join(missing));
  }
  return out;
}

LoadedConfig LoadConfigFile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open config " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config " + file.string());
  LoadedConfig config = ParseConfig(buf.str(), file.parent_path());
  config.inputs.insert(config.inputs.begin(), file);
  return config;
}

namespace {

OrderedJson VehicleJson(const VehicleParams& p) {
  OrderedJson v;
  v["wheelbase"] = p.wheelbase;
  v["sensor_offset"] = p.sensor_offset;
  v["max_steer"] = Fmt17(p.max_steer) + " rad";
  v["speed"] = p.speed;
  return v;
}

OrderedJson PathJson(const PathSpec& spec) {
  OrderedJson p;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, StraightShape>) {
          p["kind"] = "straight";
        } else if constexpr (std::is_same_v<T, CircularShape>) {
          p["kind"] = "circular";
          p["radius"] = shape.radius;
        } else if constexpr (std::is_same_v<T, CosineShape>) {
          p["kind"] = "cosine";
          p["kappa_max"] = shape.kappa_max;
          p["period"] = shape.period;
          p["periods"] = shape.periods;
        } else {
          p["kind"] = "sampled";
          p["s"] = shape.s;
          p["kappa"] = shape.kappa;
        }
      },
      spec.shape);
  p["anchor"] = {{"x", spec.anchor.x},
                 {"y", spec.anchor.y},
                 {"psi", Fmt17(spec.anchor.psi) + " rad"}};
  return p;
}

}  // namespace

std::string ResolvedConfigJson(const ScenarioFile& file) {
  const ScenarioConfig& c = file.scenario;
  OrderedJson j;
  j["type"] = "scenario";
  j["vehicle"] = VehicleJson(c.vehicle);
  j["control"] = {{"k1", c.gains.k1},
                  {"k2", c.gains.k2},
                  {"max_lateral_accel", c.max_lateral_accel},
                  {"variant", std::string(VariantName(c.variant))}};
  j["path"] = PathJson(c.path);
  j["initial"] = {{"s", c.initial.s},
                  {"e", c.initial.e},
                  {"theta", Fmt17(c.initial.theta) + " rad"}};
  j["simulation"] = {{"dt", c.dt},
                     {"t_end", c.t_end},
                     {"frame", std::string(FrameName(c.frame))},
                     {"output_interval", c.output_interval}};
  OrderedJson variants = OrderedJson::array();
  for (Variant v : file.compare) variants.push_back(std::string(VariantName(v)));
  j["compare"] = {{"variants", variants}};
  return j.dump(2) + "\n";
}

std::string ResolvedConfigJson(const AnalysisFile& file) {
  OrderedJson j;
  j["type"] = "analysis";
  j["vehicle"] = VehicleJson(file.vehicle);
  OrderedJson gains = OrderedJson::array();
  for (const auto& p : file.points) {
    gains.push_back({{"name", p.name}, {"k1", p.gains.k1}, {"k2", p.gains.k2}});
  }
  j["gains"] = gains;
  j["kappa0"] = file.kappa0s;
  j["scan"] = {{"k1_min", file.scan.k1_min},
               {"k1_max", file.scan.k1_max},
               {"k2_min", file.scan.k2_min},
               {"k2_max", file.scan.k2_max},
               {"resolution", file.scan.resolution}};
  j["frequency"] = {{"omega_min", file.frequency.omega_min},
                    {"omega_max", file.frequency.omega_max},
                    {"points", file.frequency.points}};
  return j.dump(2) + "\n";
}

}  // namespace sensorlat
