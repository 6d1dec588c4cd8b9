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

// Python module msmsq._core: configuration-driven runs plus a few building
// blocks that are handy for plotting and for cross-checks from Python.

#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msmsq/baselines.hpp"
#include "msmsq/errors.hpp"
#include "msmsq/modes.hpp"
#include "msmsq/observables.hpp"
#include "msmsq/runner.hpp"
#include "msmsq/validation.hpp"

namespace py = pybind11;

namespace {

msmsq::RunConfig config_from(const std::string& text, const std::string& experiment) {
  msmsq::RunConfig cfg = msmsq::parse_config(text, "<python>");
  if (!experiment.empty()) cfg.experiment = msmsq::parse_experiment(experiment);
  return cfg;
}

py::dict table_dict(const msmsq::ResultTable& t) {
  Eigen::MatrixXd data(static_cast<Eigen::Index>(t.rows.size()),
                       static_cast<Eigen::Index>(t.columns.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.rows[i][j];
    }
  }
  py::dict d;
  d["columns"] = t.columns;
  d["data"] = data;
  return d;
}

py::dict run(const std::string& text, const std::string& experiment, const std::string& out_dir) {
  const msmsq::RunConfig cfg = config_from(text, experiment);
  msmsq::RunResult result;
  {
    py::gil_scoped_release release;
    result = msmsq::run_experiment(cfg);
    if (!out_dir.empty()) msmsq::write_outputs(result, out_dir);
  }
  py::dict tables;
  for (const auto& t : result.tables) tables[py::str(t.name)] = table_dict(t);
  py::dict out;
  out["tables"] = tables;
  out["metadata"] = result.metadata_json;
  out["ok"] = result.ok;
  return out;
}

py::list acceptance(const std::string& text) {
  const msmsq::RunConfig cfg = config_from(text, "");
  std::vector<msmsq::CriterionResult> results;
  {
    py::gil_scoped_release release;
    results = msmsq::run_acceptance(cfg);
  }
  py::list out;
  for (const auto& r : results) out.append(py::make_tuple(r.name, r.passed, r.detail));
  return out;
}

py::dict fock_moments(std::complex<double> alpha, double r, double phi, int cutoff) {
  if (cutoff <= 0) cutoff = msmsq::suggested_cutoff(std::abs(alpha), r);
  const auto oracle = msmsq::FockOracle::single_mode(alpha, r, phi, cutoff);
  msmsq::CMatrix one = msmsq::CMatrix::Ones(1, 1);
  const auto [n, var_n] = oracle.quadratic_moments(one);
  py::dict d;
  d["mean"] = oracle.mean(0);
  d["normal"] = oracle.normal(0, 0).real();
  d["anomalous"] = oracle.anomalous(0, 0);
  d["number_mean"] = n;
  d["number_variance"] = var_n;
  d["leakage"] = oracle.leakage();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-spatial-mode squeezing simulator core.";
  m.attr("__version__") = msmsq::kVersion;

  py::register_exception<msmsq::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<msmsq::NumericalIntegrityError>(m, "NumericalIntegrityError",
                                                         PyExc_ArithmeticError);

  m.def("experiments", [] {
    std::vector<std::string> names;
    for (auto e : {msmsq::Experiment::kFocusing, msmsq::Experiment::kLoCenterScan,
                   msmsq::Experiment::kLoWaistScan, msmsq::Experiment::kWidthVsAlpha,
                   msmsq::Experiment::kLocalFluctuations, msmsq::Experiment::kClassicalCompare,
                   msmsq::Experiment::kValidate}) {
      names.emplace_back(msmsq::experiment_name(e));
    }
    return names;
  }, "Names accepted by run().");

  m.def("canonical_config",
        [](const std::string& text) { return config_from(text, "").canonical(); },
        "Resolved settings of a YAML configuration, one key per line.", py::arg("text") = "");

  m.def("config_hash",
        [](const std::string& text) { return msmsq::sha256_hex(config_from(text, "").canonical()); },
        "SHA-256 of the resolved configuration.", py::arg("text") = "");

  m.def("run", &run,
        "Run one experiment from YAML text. Returns {'tables': {name: {'columns', 'data'}}, "
        "'metadata': json_text, 'ok': bool}; writes CSV files when out_dir is set.",
        py::arg("config") = "", py::arg("experiment") = "", py::arg("out_dir") = "");

  m.def("run_acceptance", &acceptance, "List of (name, passed, detail) per criterion.",
        py::arg("config") = "");

  m.def("mode_values",
        [](int n_modes, const std::vector<double>& xi, double zeta) {
          return msmsq::CMatrix(msmsq::ModeBasis(n_modes).values(xi, zeta));
        },
        "Hermite-Gauss mode values, shape (n_modes, len(xi)).", py::arg("n_modes"),
        py::arg("xi"), py::arg("zeta") = 0.0);

  m.def("width_matrix",
        [](int n_modes, double zeta) {
          return msmsq::WidthMeasure{}.matrix(msmsq::ModeBasis(n_modes), zeta);
        },
        "Matrix of 2 xi^2 in the mode basis.", py::arg("n_modes"), py::arg("zeta") = 0.0);

  m.def("fock_moments", &fock_moments,
        "Moments of D(alpha) S(r e^{i phi})|0> by truncated Fock-space evaluation.",
        py::arg("alpha"), py::arg("r") = 0.0, py::arg("phi") = 0.0, py::arg("cutoff") = 0);

  m.def("single_mode_width_baselines",
        [](const std::vector<double>& alphas, double squeeze_db, int n_modes) {
          const auto f = msmsq::WidthMeasure{}.matrix(msmsq::ModeBasis(n_modes), 0.0);
          py::list out;
          for (const auto& row : msmsq::single_mode_width_baselines(alphas, squeeze_db, f)) {
            py::dict d;
            d["alpha"] = row.alpha;
            d["coherent"] = row.coherent;
            d["squeezed"] = row.squeezed;
            d["photons_coherent"] = row.photons_coherent;
            d["photons_squeezed"] = row.photons_squeezed;
            out.append(d);
          }
          return out;
        },
        "Relative width uncertainty of single-mode coherent and amplitude-squeezed beams.",
        py::arg("alphas"), py::arg("squeeze_db") = -13.7, py::arg("n_modes") = 40);

  m.def("squeeze_parameter_for_db", &msmsq::squeeze_parameter_for_db, py::arg("db"));
}
