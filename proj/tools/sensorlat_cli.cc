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


// sensorlat: batch front end for the lateral path-following library.
//
//   sensorlat simulate --config scenario.json --out runs/fig7
//   sensorlat figs-repro --out figs

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sensorlat/sensorlat.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<double> dt;
  std::string variant;
  bool seedless = false;
  bool quiet = false;
};

void PrintLog(const char* message, void* /*user*/) {
  std::fprintf(stderr, "%s\n", message);
}

CLI::App* AddCommand(CLI::App& app, const std::string& name,
                     const std::string& help, Flags& flags,
                     bool needs_config) {
  CLI::App* sub = app.add_subcommand(name, help);
  auto* config = sub->add_option("--config", flags.config, "Config file (JSON)");
  if (needs_config) config->required()->check(CLI::ExistingFile);
  sub->add_option("--out", flags.out, "Output directory")->required();
  sub->add_option("--dt", flags.dt, "Integration step override [s]")
      ->check(CLI::PositiveNumber);
  sub->add_option("--variant", flags.variant,
                  "Controller variant override: full, naive, unwrapped, linear")
      ->check(CLI::IsMember({"full", "naive", "unwrapped", "linear"}));
  sub->add_flag("--seedless", flags.seedless,
                "Assert a deterministic run (no random numbers are drawn)");
  sub->add_flag("-q,--quiet", flags.quiet, "Suppress progress messages");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lateral path-following controller for an offset sensor"};
  app.set_version_flag("--version", std::string(sl_version()));
  app.require_subcommand(1);
  Flags flags;
  AddCommand(app, "simulate", "Run one closed-loop scenario", flags, true);
  AddCommand(app, "compare", "Run a scenario once per controller variant",
             flags, true);
  AddCommand(app, "stability-map", "Scan the (k1, k2) stability region",
             flags, true);
  AddCommand(app, "freq-response", "Amplification ratio versus frequency",
             flags, true);
  AddCommand(app, "figs-repro", "Regenerate data for each figure data set",
             flags, false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  sl_run_options options{};
  options.dt = flags.dt.value_or(0.0);
  options.variant = flags.variant.empty() ? nullptr : flags.variant.c_str();
  options.seedless = flags.seedless ? 1 : 0;
  options.log = flags.quiet ? nullptr : &PrintLog;

  const sl_status status = sl_run_command(
      command.c_str(), flags.config.empty() ? nullptr : flags.config.c_str(),
      flags.out.c_str(), &options);
  if (status != SL_OK) {
    std::fprintf(stderr, "sensorlat %s: %s: %s\n", command.c_str(),
                 sl_status_name(status), sl_last_error());
  }
  return sl_exit_code(status);
}
