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

// Command line driver: runs one experiment and writes CSV tables plus
// metadata.json. Exit codes: 0 ok, 1 configuration error, 2 numerical
// integrity failure (including a failing validation run).

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "msmsq/errors.hpp"
#include "msmsq/runner.hpp"

namespace {

constexpr const char* kExperiments[] = {"focusing",           "lo_center_scan", "lo_waist_scan",
                                        "width_vs_alpha",     "local_fluctuations",
                                        "classical_compare",  "validate"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-spatial-mode squeezing simulator"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir;
  std::string experiment;
  int modes = 0;
  int steps = 0;
  bool validate = false;
  app.add_option("-c,--config", config_path, "YAML configuration file");
  app.add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("-e,--experiment", experiment, "experiment to run");
  app.add_option("-N,--modes", modes, "number of Hermite-Gauss modes")->check(CLI::PositiveNumber);
  app.add_option("-s,--steps", steps, "propagation steps")->check(CLI::PositiveNumber);
  app.add_flag("--validate", validate, "run the acceptance checks");
  for (const char* name : kExperiments) {
    app.add_subcommand(name, std::string("run the ") + name + " experiment")
        ->callback([&experiment, name] { experiment = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are configuration errors; --help exits 0.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    msmsq::RunConfig cfg =
        config_path.empty() ? msmsq::parse_config("", "defaults") : msmsq::load_config(config_path);
    if (validate) experiment = "validate";
    if (!experiment.empty()) cfg.experiment = msmsq::parse_experiment(experiment);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (modes > 0) cfg.n_modes = modes;
    if (steps > 0) cfg.n_steps = steps;
    cfg.validate();

    const msmsq::RunResult result = msmsq::run_experiment(cfg);
    msmsq::write_outputs(result, cfg.output_dir);
    std::printf("%s: wrote %zu table(s) to %s\n", msmsq::experiment_name(cfg.experiment),
                result.tables.size(), cfg.output_dir.c_str());
    return result.ok ? 0 : 2;
  } catch (const msmsq::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const msmsq::NumericalIntegrityError& e) {
    std::fprintf(stderr, "numerical integrity failure: %s\n", e.what());
    return 2;
  }
}
