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


// Batch workflows behind the command-line front end. Each command reads one
// config file, writes its artifacts into an output directory and records a
// manifest.json describing the run.

#ifndef SENSORLAT_WORKFLOWS_H_
#define SENSORLAT_WORKFLOWS_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sensorlat/controller.h"
#include "sensorlat/sim.h"

namespace sensorlat {

enum class Command {
  kSimulate,
  kCompare,
  kStabilityMap,
  kFreqResponse,
  kFigsRepro,
};

std::string_view CommandName(Command command);
// Throws ConfigError for unknown names.
Command ParseCommand(std::string_view name);

struct RunOptions {
  std::optional<double> dt;
  std::optional<Variant> variant;
  // Recorded in the manifest. Nothing in the library draws random numbers.
  bool seedless = false;
  unsigned threads = 0;  // 0: hardware concurrency
  std::function<void(std::string_view)> log;
};

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::string config_echo;  // resolved config, JSON
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;  // relative to the output directory
  double wall_clock_s = 0.0;
  int exit_status = 0;
  std::vector<std::string> warnings;
  std::string error;
};

// Runs one command. On failure a manifest with the nonzero exit status is
// written when possible and the error is rethrown. figs-repro ignores
// config_file and may be given an empty path.
RunManifest RunCommand(Command command,
                       const std::filesystem::path& config_file,
                       const std::filesystem::path& out_dir,
                       const RunOptions& options);

std::string Sha256Hex(std::string_view bytes);
// Throws IoError.
std::string Sha256File(const std::filesystem::path& file);

// Rows every round(output_interval / dt) steps plus the final step.
std::string TrajectoryCsv(const Trajectory& trajectory, double output_interval);

std::string MetricsText(const SimResult& result);
std::string MetricsJson(const SimResult& result);

}  // namespace sensorlat

#endif  // SENSORLAT_WORKFLOWS_H_
