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


// Scenario and analysis configuration files.
//
// Configs are JSON objects. Dimensioned values are either a bare number in
// SI units or a string "<number> <unit>"; angles always need a "deg" or
// "rad" suffix.

#ifndef SENSORLAT_CONFIG_H_
#define SENSORLAT_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sensorlat/analysis.h"
#include "sensorlat/controller.h"
#include "sensorlat/sim.h"
#include "sensorlat/vehicle.h"

namespace sensorlat {

struct ScenarioFile {
  ScenarioConfig scenario;
  // Variants run by the compare command.
  std::vector<Variant> compare{Variant::kNaive, Variant::kFull};
};

struct GainPoint {
  std::string name;
  Gains gains;
};

struct FrequencyGrid {
  double omega_min = 1e-3;  // rad/s
  double omega_max = 1e3;   // rad/s
  int points = 400;
};

struct AnalysisFile {
  VehicleParams vehicle;
  std::vector<GainPoint> points;
  // Absolute kappa0 values; scan.kappa0s holds the same list.
  std::vector<double> kappa0s;
  ScanSpec scan;
  FrequencyGrid frequency;
};

struct LoadedConfig {
  std::variant<ScenarioFile, AnalysisFile> value;
  std::vector<std::string> warnings;
  // Files read while resolving the config (the config itself first).
  std::vector<std::filesystem::path> inputs;
};

// Throws ConfigError naming the offending key. Relative file references
// (sampled curvature tables) resolve against base_dir.
LoadedConfig ParseConfig(std::string_view text,
                         const std::filesystem::path& base_dir = {});

// Throws IoError when the file cannot be read.
LoadedConfig LoadConfigFile(const std::filesystem::path& file);

// Fully resolved config in SI units with every default spelled out.
// Parsing the result yields the same config.
std::string ResolvedConfigJson(const ScenarioFile& config);
std::string ResolvedConfigJson(const AnalysisFile& config);

// "<number> <unit>" or a bare SI number, converted to SI. Throws
// ConfigError mentioning key on a unit mismatch.
enum class Dimension { kLength, kInverseLength, kSpeed, kAcceleration,
                       kAngle, kTime, kAngularRate };
double ParseQuantity(std::string_view text, Dimension dimension,
                     std::string_view key);

}  // namespace sensorlat

#endif  // SENSORLAT_CONFIG_H_
