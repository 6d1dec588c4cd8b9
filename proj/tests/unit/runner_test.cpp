// Copyright 2026 The msmsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msmsq/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "msmsq/errors.hpp"

namespace msmsq {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

RunConfig small_config() {
  RunConfig cfg = parse_config("n_modes: 10\nn_steps: 48\n");
  return cfg;
}

TEST(ConfigTest, EmptyDocumentGivesDefaults) {
  const RunConfig cfg = parse_config("");
  EXPECT_EQ(cfg.n_modes, 40);
  EXPECT_EQ(cfg.n_steps, 512);
  EXPECT_FALSE(cfg.nonlinear_gain.has_value());
  EXPECT_DOUBLE_EQ(cfg.target_db, -13.7);
  EXPECT_EQ(cfg.experiment, Experiment::kFocusing);
}

TEST(ConfigTest, ParsesValuesAndCombinesAlphaPhase) {
  const RunConfig cfg = parse_config(
      "alpha0: 2.0\nalpha0_phase: 1.5707963267948966\nmodel: uniform\nuniform_chi_n: 0.5\n"
      "ordering: unordered\nalpha_grid: [1, 2]\nexperiment: width_vs_alpha\n");
  EXPECT_NEAR(cfg.physical.alpha0.real(), 0.0, 1e-15);
  EXPECT_NEAR(cfg.physical.alpha0.imag(), 2.0, 1e-15);
  EXPECT_EQ(cfg.model, ModelKind::kUniform);
  EXPECT_EQ(cfg.ordering, Ordering::kUnordered);
  EXPECT_EQ(cfg.alpha_grid, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(cfg.experiment, Experiment::kWidthVsAlpha);
}

TEST(ConfigTest, ErrorsNameKeyAndLine) {
  std::string msg = error_of("n_modes: 10\nbogus_key: 1\n");
  EXPECT_NE(msg.find("cfg.yaml:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("bogus_key"), std::string::npos) << msg;
  msg = error_of("n_steps: twelve\n");
  EXPECT_NE(msg.find("cfg.yaml:1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("n_steps"), std::string::npos) << msg;
  msg = error_of("atomic_density: -3e17\n");
  EXPECT_NE(msg.find("atomic_density"), std::string::npos) << msg;
  msg = error_of("model: magic\n");
  EXPECT_NE(msg.find("model"), std::string::npos) << msg;
  EXPECT_FALSE(error_of("n_modes: 0\n").empty());
  EXPECT_FALSE(error_of("- 1\n- 2\n").empty());
  EXPECT_FALSE(error_of("a: [1,\n").empty());
  EXPECT_THROW(load_config("/nonexistent/cfg.yaml"), ConfigError);
  EXPECT_THROW(parse_experiment("nope"), ConfigError);
}

TEST(ConfigTest, HashIsDeterministicAndSensitive) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const RunConfig a = parse_config("n_modes: 12\n");
  const RunConfig b = parse_config("n_modes: 12\n");
  const RunConfig c = parse_config("n_modes: 13\n");
  EXPECT_EQ(sha256_hex(a.canonical()), sha256_hex(b.canonical()));
  EXPECT_NE(sha256_hex(a.canonical()), sha256_hex(c.canonical()));
}

TEST(CalibrationTest, ZeroTargetNeedsNoGain) {
  const Calibration cal = calibrate_model(small_config(), 0.0);
  EXPECT_TRUE(cal.performed);
  EXPECT_EQ(cal.nonlinear_gain, 0.0);
  EXPECT_THROW(calibrate_model(small_config(), 1.0), ConfigError);
}

TEST(CalibrationTest, ReachesTargetAndIsReproducible) {
  const RunConfig cfg = small_config();
  const Calibration cal = calibrate_model(cfg, -3.0);
  EXPECT_NEAR(cal.achieved_db, -3.0, 0.05);
  EXPECT_GT(cal.nonlinear_gain, 0.0);
  EXPECT_NEAR(matched_squeezing_db(cfg, cal.nonlinear_gain), cal.achieved_db, 1e-12);
  const Calibration again = calibrate_model(cfg, -3.0);
  EXPECT_EQ(again.nonlinear_gain, cal.nonlinear_gain);
}

TEST(CalibrationTest, UnreachableTargetReportsAchievedRange) {
  try {
    calibrate_model(small_config(), -60.0);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("achieved range"), std::string::npos) << e.what();
  }
  RunConfig uniform = small_config();
  uniform.model = ModelKind::kUniform;
  EXPECT_THROW(calibrate_model(uniform, -3.0), ConfigError);
}

TEST(RunnerTest, OutputsAreByteIdenticalAcrossRuns) {
  RunConfig cfg = parse_config(
      "n_modes: 10\nn_steps: 48\nnonlinear_gain: 20\nexperiment: lo_waist_scan\n"
      "waist_scan: [1.0, 0.5, 0.2]\n");
  const RunResult a = run_experiment(cfg);
  const RunResult b = run_experiment(cfg);
  ASSERT_EQ(a.tables.size(), 1u);
  EXPECT_EQ(format_csv(a.tables[0]), format_csv(b.tables[0]));
  EXPECT_EQ(a.metadata_json, b.metadata_json);
  EXPECT_EQ(a.tables[0].rows.size(), 3u);

  const auto meta = nlohmann::json::parse(a.metadata_json);
  for (const char* key : {"config_hash", "version", "experiment", "n_modes", "n_steps",
                          "quadrature_nodes", "zeta_end", "symplectic_defect", "calibration",
                          "files", "config"}) {
    EXPECT_TRUE(meta.contains(key)) << key;
  }
  EXPECT_EQ(meta["config_hash"], sha256_hex(cfg.canonical()));
  EXPECT_FALSE(meta["calibration"]["performed"].get<bool>());

  const auto dir = std::filesystem::temp_directory_path() / "msmsq_runner_test";
  std::filesystem::remove_all(dir);
  write_outputs(a, dir.string());
  std::ifstream csv(dir / "lo_waist_scan.csv");
  std::stringstream body;
  body << csv.rdbuf();
  EXPECT_EQ(body.str(), format_csv(a.tables[0]));
  std::string header;
  std::getline(body, header);
  EXPECT_EQ(header, "x0_over_wp,wl_over_wp,theta,squeezing_db,antisqueezing_db,truncation_loss");
  EXPECT_TRUE(std::filesystem::exists(dir / "metadata.json"));
  std::filesystem::remove_all(dir);
}

TEST(RunnerTest, FocusingTablesHaveDocumentedColumns) {
  const RunConfig cfg = parse_config(
      "n_modes: 10\nn_steps: 32\nnonlinear_gain: 15\nfocusing_stations: 4\n"
      "classical_steps: 64\nclassical_points: 512\n");
  const RunResult r = run_experiment(cfg);
  ASSERT_EQ(r.tables.size(), 3u);
  EXPECT_EQ(r.tables[0].name, "focusing");
  EXPECT_EQ(r.tables[0].columns.front(), "zeta");
  EXPECT_EQ(r.tables[0].rows.size(), 5u);
  for (const auto& row : r.tables[0].rows) EXPECT_EQ(row.size(), r.tables[0].columns.size());
  EXPECT_TRUE(r.ok);
}

}  // namespace
}  // namespace msmsq
