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


#include "sensorlat/workflows.h"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "sensorlat/analysis.h"
#include "sensorlat/config.h"
#include "sensorlat/error.h"

namespace sensorlat {
namespace {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Log(const RunOptions& options, const std::string& message) {
  if (options.log) options.log(message);
}

void WriteFile(const fs::path& file, std::string_view content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + file.string());
}

void MakeDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : ""));
  }
}

// Writes files below an output directory and records them in the manifest.
class Artifacts {
 public:
  Artifacts(fs::path root, RunManifest* manifest, const RunOptions* options)
      : root_(std::move(root)), manifest_(manifest), options_(options) {}

  void Write(const std::string& name, std::string_view content) {
    WriteFile(root_ / name, content);
    manifest_->outputs.push_back(name);
    Log(*options_, "wrote " + (root_ / name).string());
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  RunManifest* manifest_;
  const RunOptions* options_;
};

OrderedJson MetricsObject(const SimResult& r) {
  const TrackingMetrics& m = r.metrics;
  OrderedJson j;
  j["settling_time_s"] = m.settling_time;
  j["settled"] = m.settled;
  j["steady_e_D_m"] = m.steady_e;
  j["steady_theta_D_rad"] = m.steady_theta;
  j["steady_theta_hat_rad"] = m.steady_theta_hat;
  j["steady_gamma_fb_rad"] = m.steady_gamma_fb;
  j["sway_amplitude_m"] = m.sway_amplitude;
  j["overshoot_m"] = m.overshoot;
  j["saturation_fraction"] = m.saturation_fraction;
  j["clamped_steps"] = m.clamped_steps;
  j["g_sat_rad"] = r.g_sat;
  const auto& samples = r.trajectory.samples;
  j["final_e_D_m"] = samples.empty() ? 0.0 : samples.back().e;
  j["final_theta_D_rad"] = samples.empty() ? 0.0 : samples.back().theta;
  if (r.frames) {
    j["frame_max_position_error_m"] = r.frames->max_position_error;
    j["frame_max_heading_error_rad"] = r.frames->max_heading_error;
  }
  return j;
}

std::string FlatText(const OrderedJson& object) {
  std::string out;
  for (const auto& [key, value] : object.items()) {
    out += key;
    out += '=';
    if (value.is_number_float()) {
      out += Num(value.get<double>());
    } else {
      out += value.dump();
    }
    out += '\n';
  }
  return out;
}

ScenarioFile ApplyOverrides(ScenarioFile file, const RunOptions& options) {
  if (options.dt) {
    file.scenario.dt = *options.dt;
    file.scenario.Validate();
  }
  if (options.variant) file.scenario.variant = *options.variant;
  return file;
}

void RunSimulate(const ScenarioFile& file, Artifacts& out, RunManifest& m,
                 const RunOptions& options) {
  Log(options, "simulate: variant " +
                   std::string(VariantName(file.scenario.variant)));
  const SimResult r = RunScenario(file.scenario);
  m.warnings.insert(m.warnings.end(), r.warnings.begin(), r.warnings.end());
  out.Write("trajectory.csv",
            TrajectoryCsv(r.trajectory, file.scenario.output_interval));
  out.Write("metrics.txt", MetricsText(r));
  out.Write("metrics.json", MetricsJson(r));
}

void RunCompare(const ScenarioFile& file, Artifacts& out, RunManifest& m,
                const RunOptions& options) {
  Log(options, "compare: " + std::to_string(file.compare.size()) + " variants");
  const ComparisonReport report =
      CompareControllers(file.scenario, file.compare);
  OrderedJson runs = OrderedJson::array();
  std::string text;
  const VariantRun* failed = nullptr;
  for (size_t i = 0; i < report.runs.size(); ++i) {
    const VariantRun& run = report.runs[i];
    const std::string name(VariantName(run.variant));
    OrderedJson entry;
    entry["variant"] = name;
    if (run.result) {
      m.warnings.insert(m.warnings.end(), run.result->warnings.begin(),
                        run.result->warnings.end());
      out.Write("trajectory_" + name + ".csv",
                TrajectoryCsv(run.result->trajectory,
                              file.scenario.output_interval));
      entry["metrics"] = MetricsObject(*run.result);
      OrderedJson deltas;
      for (const auto& d : report.deltas[i]) {
        deltas[std::string(d.signal)] = d.max_abs;
      }
      entry["max_abs_delta_vs_" +
            std::string(VariantName(report.runs[0].variant))] = deltas;
      for (const auto& [key, value] : entry["metrics"].items()) {
        text += name + "." + key + "=" +
                (value.is_number_float() ? Num(value.get<double>())
                                         : value.dump()) +
                "\n";
      }
    } else {
      entry["error"] = run.error;
      text += name + ".error=" + run.error + "\n";
      if (failed == nullptr) failed = &run;
    }
    runs.push_back(entry);
  }
  OrderedJson doc;
  doc["runs"] = runs;
  out.Write("comparison.json", doc.dump(2) + "\n");
  out.Write("comparison.txt", text);
  if (failed != nullptr) {
    const std::string msg = std::string(VariantName(failed->variant)) +
                            " run failed: " + failed->error;
    switch (failed->error_code) {
      case ErrorCode::kConfig: throw ConfigError(msg);
      case ErrorCode::kSingularity: throw SingularityError(msg);
      case ErrorCode::kProjection: throw ProjectionError(msg);
      case ErrorCode::kIo: throw IoError(msg);
      case ErrorCode::kDomain: break;
    }
    throw DomainError(msg);
  }
}

std::string CellRow(const ScanCell& c) {
  const bool finite = c.verdict.stable && c.peak.bounded && c.error.empty();
  return Num(c.k1) + "," + Num(c.k2) + "," + Num(c.kappa0) + "," +
         (c.verdict.stable ? "1" : "0") + "," +
         (c.verdict.marginal ? "1" : "0") + "," +
         std::string(SufficientConditionName(c.verdict.sufficient)) + "," +
         (finite ? Num(c.peak.m_max) : "nan") + "," +
         (finite ? Num(c.peak.omega_m) : "nan") + "\n";
}

void RunStabilityMap(const AnalysisFile& file, Artifacts& out, RunManifest& m,
                     const RunOptions& options) {
  Log(options, "stability-map: " + std::to_string(file.scan.resolution) + "^2 x " +
                   std::to_string(file.kappa0s.size()) + " cells");
  const std::vector<ScanCell> cells =
      StabilityRegionScan(file.scan, file.vehicle, options.threads);
  std::string csv = "k1,k2,kappa0,stable,marginal,sufficient,M_max,omega_m\n";
  size_t domain_errors = 0;
  for (const auto& c : cells) {
    csv += CellRow(c);
    domain_errors += c.error.empty() ? 0 : 1;
  }
  out.Write("stability_map.csv", csv);
  if (domain_errors > 0) {
    m.warnings.push_back(std::to_string(domain_errors) +
                         " scan cells hit a domain error");
  }

  std::string points = "name,k1,k2,kappa0,stable,marginal,sufficient,M_max,omega_m\n";
  for (const auto& p : file.points) {
    for (double k0 : file.kappa0s) {
      ScanCell c;
      c.k1 = p.gains.k1;
      c.k2 = p.gains.k2;
      c.kappa0 = k0;
      c.verdict = IsStable(k0, p.gains, file.vehicle);
      c.peak = PeakAmplificationOf(k0, p.gains, file.vehicle);
      points += p.name + "," + CellRow(c);
    }
  }
  out.Write("points.csv", points);

  OrderedJson summary;
  summary["kappa_bar"] = KappaBar(file.vehicle);
  summary["lambda1_lower"] = Lambda1Lower(file.vehicle);
  summary["negative_feedback_k2_threshold"] =
      NegativeFeedbackK2Threshold(file.vehicle);
  OrderedJson zero = OrderedJson::array();
  for (double k0 : file.kappa0s) {
    zero.push_back({{"kappa0", k0},
                    {"k1", ZeroAmplificationGain(k0, file.vehicle)}});
  }
  summary["zero_amplification_k1"] = zero;
  out.Write("analysis_summary.json", summary.dump(2) + "\n");
}

void RunFreqResponse(const AnalysisFile& file, Artifacts& out, RunManifest& m,
                     const RunOptions& options) {
  (void)m;
  std::string peaks =
      "name,k1,k2,kappa0,stable,bounded,M_max,omega_m,sampled_M_max,"
      "sampled_omega\n";
  for (const auto& p : file.points) {
    for (size_t i = 0; i < file.kappa0s.size(); ++i) {
      const double k0 = file.kappa0s[i];
      Log(options, "freq-response: " + p.name + " kappa0=" + Num(k0));
      const FreqResponse fr = SampleFrequencyResponse(
          k0, p.gains, file.vehicle, file.frequency.omega_min,
          file.frequency.omega_max, file.frequency.points);
      std::string csv = "omega_rad_s,M\n";
      FrequencySample best;
      for (const auto& s : fr.samples) {
        csv += Num(s.omega) + "," + Num(s.m) + "\n";
        if (s.m > best.m) best = s;
      }
      out.Write("freq_" + p.name + "_k" + std::to_string(i) + ".csv", csv);
      peaks += p.name + "," + Num(p.gains.k1) + "," + Num(p.gains.k2) + "," +
               Num(k0) + "," + (fr.peak.stable ? "1" : "0") + "," +
               (fr.peak.bounded ? "1" : "0") + "," + Num(fr.peak.m_max) + "," +
               Num(fr.peak.omega_m) + "," + Num(best.m) + "," +
               Num(best.omega) + "\n";
    }
  }
  out.Write("peaks.csv", peaks);
}

// Curves that depend only on vehicle geometry: feedforward error, desired
// yaw error, wrapper, maximum steering and desired heading fields.
void WriteGeometryFigures(Artifacts& out) {
  VehicleParams v{2.57, 2.0, 30.0 * std::numbers::pi / 180.0, 20.0};
  const double offsets[] = {2.0, 3.0, 4.0};

  std::string ff = "kappa_per_m,dgamma_ff_d2,dgamma_ff_d3,dgamma_ff_d4\n";
  std::string th = "kappa_per_m,theta_0_d2,theta_0_d3,theta_0_d4\n";
  for (int i = 0; i <= 200; ++i) {
    const double kappa = 0.001 * i;
    ff += Num(kappa);
    th += Num(kappa);
    for (double d : offsets) {
      v.sensor_offset = d;
      ff += "," + Num(FeedforwardError(kappa, v));
      th += "," + Num(DesiredYawError(kappa, d));
    }
    ff += "\n";
    th += "\n";
  }
  out.Write("feedforward_error.csv", ff);
  out.Write("desired_yaw_error.csv", th);

  const double g_sats[] = {0.1, 0.25, 0.5};
  std::string wrap = "x,g_0.1,g_0.25,g_0.5\n";
  for (int i = -200; i <= 200; ++i) {
    const double x = 0.01 * i;
    wrap += Num(x);
    for (double g : g_sats) wrap += "," + Num(Wrapper(x, g));
    wrap += "\n";
  }
  out.Write("wrapper.csv", wrap);

  const double accels[] = {2.0, 4.0, 6.0, 8.0};
  std::string steer = "speed_m_s,a2,a4,a6,a8\n";
  for (int i = 1; i <= 80; ++i) {
    v.speed = 0.5 * i;
    steer += Num(v.speed);
    for (double a : accels) steer += "," + Num(MaxAllowableSteer(v, a));
    steer += "\n";
  }
  out.Write("max_steer.csv", steer);

  const double k2 = 0.02;
  std::string heading = "e_D,theta_des_nonlinear,theta_des_linear\n";
  for (int i = -80; i <= 80; ++i) {
    const double e = 5.0 * i;
    heading += Num(e) + "," + Num(DesiredHeading(e, k2, Variant::kFull)) + "," +
               Num(WrapAngleError(DesiredHeading(e, k2, Variant::kLinear), 0.0)) +
               "\n";
  }
  out.Write("desired_heading.csv", heading);
}

OrderedJson BaselineVehicle(const std::string& d = "2 m") {
  return {{"wheelbase", "2.57 m"},
          {"sensor_offset", d},
          {"max_steer", "30 deg"},
          {"speed", "20 m/s"}};
}

OrderedJson BaselineScenario(OrderedJson path, double k1, double k2,
                           const std::string& variant) {
  OrderedJson j;
  j["type"] = "scenario";
  j["vehicle"] = BaselineVehicle();
  j["control"] = {{"k1", k1},
                  {"k2", Num(k2) + " 1/m"},
                  {"max_lateral_accel", "4 m/s^2"},
                  {"variant", variant}};
  j["path"] = std::move(path);
  j["initial"] = {{"s", "0 m"}, {"e", "-10 m"}, {"theta", "0 deg"}};
  j["simulation"] = {{"dt", "1 ms"}, {"frame", "both"},
                     {"output_interval", "10 ms"}};
  j["compare"] = {{"variants", {"naive", "full"}}};
  return j;
}

OrderedJson CosinePath() {
  return {{"kind", "cosine"},
          {"kappa_max", Num(0.004 * std::numbers::pi) + " 1/m"},
          {"period", "250 m"},
          {"periods", 4}};
}

OrderedJson AnalysisPreset(const std::string& d, OrderedJson kappa0_fractions,
                           OrderedJson gains) {
  OrderedJson j;
  j["type"] = "analysis";
  j["vehicle"] = BaselineVehicle(d);
  j["gains"] = std::move(gains);
  j["kappa0_fractions"] = std::move(kappa0_fractions);
  j["scan"] = {{"k1_min", -3.0}, {"k1_max", 3.0}, {"k2_min", "-3 1/m"},
               {"k2_max", "3 1/m"}, {"resolution", 200}};
  j["frequency"] = {{"omega_min", "0.001 rad/s"},
                    {"omega_max", "1000 rad/s"},
                    {"points", 400}};
  return j;
}

struct Preset {
  std::string name;
  std::vector<Command> commands;
  OrderedJson config;
};

std::vector<Preset> FigurePresets() {
  const double l = 2.57;
  const double d = 2.0;
  OrderedJson pqh = OrderedJson::array();
  pqh.push_back({{"name", "P"}, {"k1", -0.8}, {"k2", "0.02 1/m"}});
  pqh.push_back({{"name", "Q"}, {"k1", -l / d}, {"k2", "0.02 1/m"}});
  pqh.push_back({{"name", "H"}, {"k1", 0.8}, {"k2", "-2 1/m"}});
  OrderedJson baseline_gain = OrderedJson::array();
  baseline_gain.push_back({{"name", "P"}, {"k1", -0.8}, {"k2", "0.02 1/m"}});

  std::vector<Preset> presets;
  presets.push_back({"fig4ab_stability_d2",
                     {Command::kStabilityMap, Command::kFreqResponse},
                     AnalysisPreset("2 m", {0.0, 0.5, 1.0}, pqh)});
  presets.push_back({"fig4c_mmax_d2", {Command::kStabilityMap},
                     AnalysisPreset("2 m", {0.0}, baseline_gain)});
  presets.push_back({"fig4d_mmax_d3", {Command::kStabilityMap},
                     AnalysisPreset("3 m", {0.0}, baseline_gain)});
  presets.push_back({"fig5_straight", {Command::kCompare},
                     BaselineScenario({{"kind", "straight"}}, -0.8, 0.02, "full")});
  presets.push_back(
      {"fig6_circular", {Command::kCompare},
       BaselineScenario({{"kind", "circular"}, {"radius", "200 m"}}, -0.8, 0.02,
                      "full")});
  presets.push_back({"fig7_cosine", {Command::kCompare},
                     BaselineScenario(CosinePath(), -0.8, 0.02, "full")});
  presets.push_back({"fig8_left_zero_amplification_gain", {Command::kSimulate},
                     BaselineScenario(CosinePath(), -l / d, 0.02, "full")});
  presets.push_back({"fig8_right_positive_feedback", {Command::kSimulate},
                     BaselineScenario(CosinePath(), 0.8, -2.0, "full")});
  return presets;
}

void Execute(Command command, const LoadedConfig& config, Artifacts& out,
             RunManifest& m, const RunOptions& options);

void RunFigsRepro(Artifacts& out, RunManifest& m, const RunOptions& options) {
  MakeDirectory(out.root() / "configs");
  MakeDirectory(out.root() / "fig2_fig3_geometry");
  {
    RunManifest sub;
    Artifacts geometry(out.root() / "fig2_fig3_geometry", &sub, &options);
    WriteGeometryFigures(geometry);
    for (const auto& o : sub.outputs) m.outputs.push_back("fig2_fig3_geometry/" + o);
  }
  RunOptions child = options;
  child.dt.reset();
  child.variant.reset();
  for (const Preset& preset : FigurePresets()) {
    const std::string config_name = "configs/" + preset.name + ".json";
    out.Write(config_name, preset.config.dump(2) + "\n");
    for (Command c : preset.commands) {
      const std::string dir = preset.name + "/" + std::string(CommandName(c));
      const RunManifest sub =
          RunCommand(c, out.root() / config_name, out.root() / dir, child);
      for (const auto& o : sub.outputs) m.outputs.push_back(dir + "/" + o);
      m.warnings.insert(m.warnings.end(), sub.warnings.begin(),
                        sub.warnings.end());
    }
  }
}

void Execute(Command command, const LoadedConfig& config, Artifacts& out,
             RunManifest& m, const RunOptions& options) {
  const auto* scenario = std::get_if<ScenarioFile>(&config.value);
  const auto* analysis = std::get_if<AnalysisFile>(&config.value);
  const bool wants_scenario =
      command == Command::kSimulate || command == Command::kCompare;
  if (wants_scenario && scenario == nullptr) {
    throw ConfigError(std::string(CommandName(command)) +
                      " needs a config with type \"scenario\"");
  }
  if (!wants_scenario && analysis == nullptr) {
    throw ConfigError(std::string(CommandName(command)) +
                      " needs a config with type \"analysis\"");
  }
  switch (command) {
    case Command::kSimulate:
      RunSimulate(*scenario, out, m, options);
      break;
    case Command::kCompare:
      RunCompare(*scenario, out, m, options);
      break;
    case Command::kStabilityMap:
      RunStabilityMap(*analysis, out, m, options);
      break;
    case Command::kFreqResponse:
      RunFreqResponse(*analysis, out, m, options);
      break;
    case Command::kFigsRepro:
      break;
  }
}

std::string ManifestJson(const RunManifest& m, const RunOptions& options) {
  OrderedJson j;
  j["command"] = m.command;
  if (!m.config_echo.empty()) {
    j["config"] = OrderedJson::parse(m.config_echo);
  }
  OrderedJson inputs = OrderedJson::array();
  for (const auto& in : m.inputs) {
    inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  }
  j["inputs"] = inputs;
  j["outputs"] = m.outputs;
  j["wall_clock_s"] = m.wall_clock_s;
  j["exit_status"] = m.exit_status;
  j["warnings"] = m.warnings;
  if (!m.error.empty()) j["error"] = m.error;
  j["seedless"] = options.seedless;
  if (options.dt) j["dt_override_s"] = *options.dt;
  if (options.variant) {
    j["variant_override"] = std::string(VariantName(*options.variant));
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kSimulate: return "simulate";
    case Command::kCompare: return "compare";
    case Command::kStabilityMap: return "stability-map";
    case Command::kFreqResponse: return "freq-response";
    case Command::kFigsRepro: return "figs-repro";
  }
  return "unknown";
}

Command ParseCommand(std::string_view name) {
  for (Command c : {Command::kSimulate, Command::kCompare,
                    Command::kStabilityMap, Command::kFreqResponse,
                    Command::kFigsRepro}) {
    if (CommandName(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

RunManifest RunCommand(Command command, const fs::path& config_file,
                       const fs::path& out_dir, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.command = std::string(CommandName(command));
  bool have_dir = false;
  auto finish = [&] {
    m.wall_clock_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    m.outputs.push_back("manifest.json");
    WriteFile(out_dir / "manifest.json", ManifestJson(m, options));
  };
  try {
    MakeDirectory(out_dir);
    have_dir = true;
    Artifacts out(out_dir, &m, &options);
    if (command == Command::kFigsRepro) {
      RunFigsRepro(out, m, options);
    } else {
      m.inputs.push_back({config_file.string(), Sha256File(config_file)});
      LoadedConfig config = LoadConfigFile(config_file);
      for (size_t i = 1; i < config.inputs.size(); ++i) {
        m.inputs.push_back(
            {config.inputs[i].string(), Sha256File(config.inputs[i])});
      }
      m.warnings = config.warnings;
      if (auto* s = std::get_if<ScenarioFile>(&config.value)) {
        *s = ApplyOverrides(std::move(*s), options);
        m.config_echo = ResolvedConfigJson(*s);
      } else {
        if (options.dt || options.variant) {
          m.warnings.push_back("--dt/--variant ignored for analysis configs");
        }
        m.config_echo = ResolvedConfigJson(std::get<AnalysisFile>(config.value));
      }
      out.Write("config.resolved.json", m.config_echo);
      Execute(command, config, out, m, options);
    }
    for (const auto& w : m.warnings) Log(options, "warning: " + w);
    finish();
  } catch (const Error& e) {
    m.exit_status = ExitCodeFor(e.code());
    m.error = e.what();
    if (have_dir) {
      try {
        finish();
      } catch (const Error&) {
      }
    }
    throw;
  } catch (const std::exception& e) {
    m.exit_status = 1;
    m.error = e.what();
    if (have_dir) {
      try {
        finish();
      } catch (const Error&) {
      }
    }
    throw;
  }
  return m;
}

std::string Sha256Hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw IoError("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string Sha256File(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string() + " for hashing");
  std::ostringstream buf;
  buf << in.rdbuf();
  return Sha256Hex(buf.str());
}

std::string TrajectoryCsv(const Trajectory& trajectory,
                          double output_interval) {
  std::string out;
  for (size_t c = 0; c < kTrajectoryColumns.size(); ++c) {
    if (c > 0) out += ',';
    out += kTrajectoryColumns[c];
  }
  out += '\n';
  const auto& samples = trajectory.samples;
  const long long stride = std::max<long long>(
      1, trajectory.dt > 0.0 ? std::llround(output_interval / trajectory.dt) : 1);
  for (size_t k = 0; k < samples.size(); ++k) {
    if (static_cast<long long>(k) % stride != 0 && k + 1 != samples.size()) {
      continue;
    }
    for (size_t c = 0; c < kTrajectoryColumns.size(); ++c) {
      if (c > 0) out += ',';
      out += Num(TrajectoryColumn(samples[k], c));
    }
    out += '\n';
  }
  return out;
}

std::string MetricsText(const SimResult& result) {
  return FlatText(MetricsObject(result));
}

std::string MetricsJson(const SimResult& result) {
  return MetricsObject(result).dump(2) + "\n";
}

}  // namespace sensorlat
