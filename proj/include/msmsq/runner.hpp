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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msmsq/geometry.hpp"
#include "msmsq/medium.hpp"
#include "msmsq/modes.hpp"
#include "msmsq/observables.hpp"
#include "msmsq/propagator.hpp"

namespace msmsq {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment {
  kFocusing,
  kLoCenterScan,
  kLoWaistScan,
  kWidthVsAlpha,
  kLocalFluctuations,
  kClassicalCompare,
  kValidate,
};

const char* experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

enum class ModelKind { kGenericFwm, kTabulated, kUniform };

struct RunConfig {
  PhysicalParams physical;
  double alpha0_phase = 0.0;

  ModelKind model = ModelKind::kGenericFwm;
  double linear_gain = 3.0;
  std::optional<double> nonlinear_gain;  // unset: calibrate
  double target_db = -13.7;
  double density_ref = 3.0e17;
  std::string table_path;
  double uniform_chi_l = 0.0;
  double uniform_chi_n = 0.0;
  CurvatureConvention curvature = CurvatureConvention::kStandard;

  int n_modes = 40;
  int quadrature_nodes = 0;
  int n_steps = 512;
  Ordering ordering = Ordering::kOrdered;

  Experiment experiment = Experiment::kFocusing;
  std::string output_dir = "out";
  std::uint64_t seed = 20260101;

  ThetaPolicy theta_policy = ThetaPolicy::kOptimize;
  double theta = 0.0;
  std::vector<double> center_scan_waists{0.3, 0.2};
  double center_scan_max = 1.5;
  int center_scan_points = 61;
  std::vector<double> waist_scan{1.5, 1.25, 1.0, 0.8, 0.6, 0.5, 0.4, 0.3, 0.25,
                                 0.2, 0.15, 0.1, 0.07, 0.05, 0.03, 0.02};
  double waist_scan_center = 0.0;
  double scan_alpha_phase = 0.7853981633974483;  // pi/4
  std::vector<double> alpha_grid{0.2, 0.5, 1.0, 2.0, 3.0, 5.0};
  double detector_bin = 0.05;
  int classical_points = 2048;
  double classical_half_window = 8.0;
  int classical_steps = 1024;
  int focusing_stations = 32;
  double profile_half_width = 4.0;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  /// Sorted key: value listing of every resolved setting.
  std::string canonical() const;
};

/// Flat YAML mapping; unknown keys, type errors and invalid values raise
/// ConfigError with the key and line. An empty document yields defaults.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);

std::string sha256_hex(const std::string& data);

struct Calibration {
  bool performed = false;
  double nonlinear_gain = 0.0;
  double target_db = 0.0;
  double achieved_db = 0.0;
  int evaluations = 0;
};

/// Everything needed to evaluate observables for one configuration.
struct Simulation {
  ScaledGeometry geometry;
  ModeBasis basis;
  Medium medium;
  Calibration calibration;
  TransferMatrix transfer;

  double zeta_end() const { return geometry.zeta_end; }
  GaussianState output(cplx alpha0) const;
};

Medium make_medium(const RunConfig& cfg, double nonlinear_gain);

/// Matched-LO (w_l = w_p, centred) squeezing at the output for a GenericFWM
/// gain g_n, with every other setting from cfg.
double matched_squeezing_db(const RunConfig& cfg, double nonlinear_gain);

/// Tunes g_n so that matched-LO squeezing equals target_db within 0.05 dB.
/// The bracket is found by an increasing scan that stops at the first
/// crossing; squeezing must decrease monotonically over the scanned range.
Calibration calibrate_model(const RunConfig& cfg, double target_db);

/// Builds geometry, basis and medium, calibrates if needed and propagates.
Simulation prepare(const RunConfig& cfg);

struct ResultTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunResult {
  std::vector<ResultTable> tables;
  std::string metadata_json;
  bool ok = true;  // false when validation found a failing check
};

RunResult run_experiment(const RunConfig& cfg);
/// Writes <name>.csv per table and metadata.json into cfg.output_dir.
void write_outputs(const RunResult& result, const std::string& dir);

std::string format_csv(const ResultTable& table);

}  // namespace msmsq
