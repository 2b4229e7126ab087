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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "sensorlat/analysis.h"
#include "sensorlat/error.h"

namespace sensorlat {
namespace {

namespace fs = std::filesystem;

constexpr char kStraightConfig[] = R"({
  "vehicle": {"wheelbase": 2.57, "sensor_offset": 2, "max_steer": "30 deg", "speed": 20},
  "control": {"k1": -0.8, "k2": 0.02, "max_lateral_accel": 4},
  "path": {"kind": "straight"},
  "initial": {"e": -10},
  "simulation": {"t_end": 5, "output_interval": 0.1}
})";

constexpr char kAnalysisConfig[] = R"({
  "type": "analysis",
  "vehicle": {"wheelbase": 2.57, "sensor_offset": 2, "max_steer": "30 deg", "speed": 20},
  "gains": [{"name": "P", "k1": -0.8, "k2": 0.02}, {"name": "H", "k1": 0.8, "k2": -2}],
  "scan": {"resolution": 21},
  "frequency": {"points": 40}
})";

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> ReadCsv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(Slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class WorkflowsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sensorlat_wf_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& name, std::string_view text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  fs::path dir_;
};

TEST(Sha256Test, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_THROW(Sha256File("/nonexistent/file"), IoError);
}

TEST(CommandNameTest, RoundTrip) {
  for (Command c : {Command::kSimulate, Command::kCompare, Command::kStabilityMap,
                    Command::kFreqResponse, Command::kFigsRepro}) {
    EXPECT_EQ(ParseCommand(CommandName(c)), c);
  }
  EXPECT_THROW(ParseCommand("plot"), ConfigError);
}

TEST_F(WorkflowsTest, SimulateWritesArtifactsAndManifest) {
  const fs::path cfg = Write("straight.json", kStraightConfig);
  const RunManifest m = RunCommand(Command::kSimulate, cfg, dir_ / "out", {});
  EXPECT_EQ(m.exit_status, 0);
  for (const char* f : {"config.resolved.json", "trajectory.csv", "metrics.txt",
                        "metrics.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
    EXPECT_NE(std::find(m.outputs.begin(), m.outputs.end(), f), m.outputs.end()) << f;
  }
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["exit_status"], 0);
  EXPECT_EQ(manifest["inputs"][0]["sha256"], Sha256File(cfg));
  EXPECT_EQ(manifest["outputs"].size(), m.outputs.size());

  const auto rows = ReadCsv(dir_ / "out" / "trajectory.csv");
  ASSERT_EQ(rows[0].size(), kTrajectoryColumns.size());
  EXPECT_EQ(rows[0][0], "t");
  EXPECT_EQ(rows.size(), 52u);  // header, 0..5 s every 0.1 s
  EXPECT_EQ(std::stod(rows.back()[0]), 5.0);

  // Rerun from the resolved config reproduces the trajectory bit for bit.
  RunCommand(Command::kSimulate, dir_ / "out" / "config.resolved.json", dir_ / "again", {});
  EXPECT_EQ(Slurp(dir_ / "out" / "trajectory.csv"), Slurp(dir_ / "again" / "trajectory.csv"));
}

TEST_F(WorkflowsTest, OverridesAreApplied) {
  const fs::path cfg = Write("straight.json", kStraightConfig);
  RunOptions options;
  options.dt = 2e-3;
  options.variant = Variant::kNaive;
  options.seedless = true;
  RunCommand(Command::kSimulate, cfg, dir_ / "out", options);
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(manifest["seedless"], true);
  EXPECT_EQ(manifest["dt_override_s"], 2e-3);
  EXPECT_EQ(manifest["variant_override"], "naive");
  EXPECT_EQ(manifest["config"]["control"]["variant"], "naive");
}

TEST_F(WorkflowsTest, CompareWritesOneTrajectoryPerVariant) {
  const fs::path cfg = Write("straight.json", kStraightConfig);
  const RunManifest m = RunCommand(Command::kCompare, cfg, dir_ / "out", {});
  EXPECT_TRUE(fs::exists(dir_ / "out" / "trajectory_full.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "trajectory_naive.csv"));
  const auto cmp = nlohmann::json::parse(Slurp(dir_ / "out" / "comparison.json"));
  EXPECT_FALSE(cmp.dump().empty());
  // Full and naive coincide on a straight road.
  EXPECT_EQ(Slurp(dir_ / "out" / "trajectory_full.csv"),
            Slurp(dir_ / "out" / "trajectory_naive.csv"));
}

TEST_F(WorkflowsTest, StabilityMapMatchesPredicate) {
  const fs::path cfg = Write("analysis.json", kAnalysisConfig);
  RunCommand(Command::kStabilityMap, cfg, dir_ / "out", {});
  const auto rows = ReadCsv(dir_ / "out" / "stability_map.csv");
  ASSERT_EQ(rows[0], (std::vector<std::string>{"k1", "k2", "kappa0", "stable", "marginal",
                                               "sufficient", "M_max", "omega_m"}));
  ASSERT_EQ(rows.size(), 1u + 21 * 21 * 3);
  const VehicleParams p{2.57, 2.0, std::numbers::pi / 6.0, 20.0};
  for (size_t i = 1; i < rows.size(); ++i) {
    const Gains g{std::stod(rows[i][0]), std::stod(rows[i][1])};
    const double kappa0 = std::stod(rows[i][2]);
    const StabilityVerdict v = IsStable(kappa0, g, p);
    ASSERT_EQ(rows[i][3], v.stable ? "1" : "0") << i;
    ASSERT_EQ(rows[i][4], v.marginal ? "1" : "0") << i;
    ASSERT_EQ(rows[i][5], SufficientConditionName(v.sufficient)) << i;
    if (v.stable) {
      ASSERT_EQ(std::stod(rows[i][6]), PeakAmplificationOf(kappa0, g, p).m_max) << i;
    } else {
      ASSERT_EQ(rows[i][6], "nan") << i;
    }
  }
  EXPECT_TRUE(fs::exists(dir_ / "out" / "points.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "analysis_summary.json"));
}

TEST_F(WorkflowsTest, FreqResponsePeakMatchesClosedForm) {
  const fs::path cfg = Write("analysis.json", kAnalysisConfig);
  RunCommand(Command::kFreqResponse, cfg, dir_ / "out", {});
  const auto curve = ReadCsv(dir_ / "out" / "freq_P_k0.csv");
  EXPECT_EQ(curve[0], (std::vector<std::string>{"omega_rad_s", "M"}));
  double best = 0.0;
  for (size_t i = 1; i < curve.size(); ++i) best = std::max(best, std::stod(curve[i][1]));
  const VehicleParams p{2.57, 2.0, std::numbers::pi / 6.0, 20.0};
  const double m_max = PeakAmplificationOf(0.0, {-0.8, 0.02}, p).m_max;
  EXPECT_LT(std::abs(best - m_max) / m_max, 1e-6);
  const auto peaks = ReadCsv(dir_ / "out" / "peaks.csv");
  EXPECT_EQ(peaks.size(), 1u + 2 * 3);
}

TEST_F(WorkflowsTest, FigsReproProducesAllPresets) {
  const RunManifest m = RunCommand(Command::kFigsRepro, {}, dir_ / "figs", {});
  EXPECT_EQ(m.exit_status, 0);
  for (const auto& o : m.outputs) EXPECT_TRUE(fs::exists(dir_ / "figs" / o)) << o;
  EXPECT_TRUE(fs::exists(dir_ / "figs" / "fig2_fig3_geometry" / "feedforward_error.csv"));
  const auto rows = ReadCsv(dir_ / "figs" / "fig5_straight" / "compare" / "trajectory_full.csv");
  EXPECT_LT(std::abs(std::stod(rows.back()[2])), 0.01);
  for (const char* preset : {"fig4ab_stability_d2", "fig4c_mmax_d2", "fig4d_mmax_d3",
                             "fig5_straight", "fig6_circular", "fig7_cosine",
                             "fig8_left_zero_amplification_gain", "fig8_right_positive_feedback"}) {
    EXPECT_TRUE(fs::exists(dir_ / "figs" / "configs" / (std::string(preset) + ".json")))
        << preset;
  }
}

TEST_F(WorkflowsTest, FailuresWriteManifestAndRethrow) {
  std::string text = kStraightConfig;
  text.replace(text.find("\"straight\""), 10, "\"circular\", \"radius\": 1");
  const fs::path cfg = Write("tight.json", text);
  EXPECT_THROW(RunCommand(Command::kSimulate, cfg, dir_ / "out", {}), DomainError);
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(manifest["exit_status"], ExitCodeFor(ErrorCode::kDomain));
  EXPECT_EQ(manifest["inputs"][0]["sha256"], Sha256File(cfg));
  EXPECT_FALSE(manifest["error"].get<std::string>().empty());

  const fs::path empty = Write("empty.json", "{}");
  EXPECT_THROW(RunCommand(Command::kSimulate, empty, dir_ / "out2", {}), ConfigError);
  EXPECT_THROW(RunCommand(Command::kSimulate, dir_ / "missing.json", dir_ / "out3", {}),
               IoError);
  const fs::path analysis = Write("analysis.json", kAnalysisConfig);
  EXPECT_THROW(RunCommand(Command::kSimulate, analysis, dir_ / "out4", {}), ConfigError);
}

}  // namespace
}  // namespace sensorlat
