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

#include <openssl/evp.h>
#include <tbb/parallel_for.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <nlohmann/json.hpp>

#include "msmsq/baselines.hpp"
#include "msmsq/coupling.hpp"
#include "msmsq/errors.hpp"
#include "msmsq/qstate.hpp"
#include "msmsq/validation.hpp"

namespace msmsq {

namespace {

const std::map<Experiment, const char*> kExperimentNames = {
    {Experiment::kFocusing, "focusing"},
    {Experiment::kLoCenterScan, "lo_center_scan"},
    {Experiment::kLoWaistScan, "lo_waist_scan"},
    {Experiment::kWidthVsAlpha, "width_vs_alpha"},
    {Experiment::kLocalFluctuations, "local_fluctuations"},
    {Experiment::kClassicalCompare, "classical_compare"},
    {Experiment::kValidate, "validate"},
};

template <typename E>
std::string choices(const std::map<std::string, E>& m) {
  std::string out;
  for (const auto& [k, v] : m) out += (out.empty() ? "" : ", ") + k;
  return out;
}

const std::map<std::string, ModelKind> kModels = {
    {"generic_fwm", ModelKind::kGenericFwm},
    {"tabulated", ModelKind::kTabulated},
    {"uniform", ModelKind::kUniform},
};
const std::map<std::string, CurvatureConvention> kCurvatures = {
    {"standard", CurvatureConvention::kStandard},
    {"inverse_square", CurvatureConvention::kInverseSquare},
};
const std::map<std::string, Ordering> kOrderings = {
    {"ordered", Ordering::kOrdered},
    {"unordered", Ordering::kUnordered},
};
const std::map<std::string, ThetaPolicy> kThetaPolicies = {
    {"optimize", ThetaPolicy::kOptimize},
    {"fixed", ThetaPolicy::kFixed},
};

template <typename E>
std::string name_of(const std::map<std::string, E>& m, E value) {
  for (const auto& [k, v] : m) {
    if (v == value) return k;
  }
  return "?";
}

}  // namespace

const char* experiment_name(Experiment e) { return kExperimentNames.at(e); }

Experiment parse_experiment(const std::string& name) {
  for (const auto& [e, n] : kExperimentNames) {
    if (name == n) return e;
  }
  std::string all;
  for (const auto& [e, n] : kExperimentNames) all += (all.empty() ? "" : ", ") + std::string(n);
  throw ConfigError("unknown experiment '" + name + "' (expected one of: " + all + ")");
}

// ---- configuration ----

void RunConfig::validate() const {
  physical.validate();
  const auto require = [](bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ConfigError("invalid value for '" + key + "': " + why);
  };
  require(std::isfinite(alpha0_phase), "alpha0_phase", "must be finite");
  require(n_modes >= 1, "n_modes", "must be at least 1");
  require(quadrature_nodes == 0 || quadrature_nodes >= 2 * n_modes + 2, "quadrature_nodes",
          "must be 0 (automatic) or at least 2*n_modes+2");
  require(n_steps >= 1, "n_steps", "must be at least 1");
  require(std::isfinite(linear_gain), "linear_gain", "must be finite");
  require(!nonlinear_gain || std::isfinite(*nonlinear_gain), "nonlinear_gain", "must be finite");
  require(std::isfinite(target_db) && target_db <= 0.0, "target_db", "must be <= 0 dB");
  require(density_ref > 0.0, "density_ref", "must be positive");
  require(model != ModelKind::kTabulated || !table_path.empty(), "table_path",
          "required for the tabulated model");
  require(!center_scan_waists.empty(), "center_scan_waists", "must not be empty");
  for (double w : center_scan_waists) require(w > 0.0, "center_scan_waists", "must be positive");
  require(center_scan_max > 0.0, "center_scan_max", "must be positive");
  require(center_scan_points >= 2, "center_scan_points", "must be at least 2");
  require(!waist_scan.empty(), "waist_scan", "must not be empty");
  for (double w : waist_scan) require(w > 0.0, "waist_scan", "must be positive");
  require(!alpha_grid.empty(), "alpha_grid", "must not be empty");
  for (double a : alpha_grid) require(a > 0.0, "alpha_grid", "must be positive");
  require(detector_bin > 0.0, "detector_bin", "must be positive");
  require(classical_points >= 64 && classical_points % 2 == 0, "classical_points",
          "must be even and at least 64");
  require(classical_half_window > 0.0, "classical_half_window", "must be positive");
  require(classical_steps >= 1, "classical_steps", "must be at least 1");
  require(focusing_stations >= 1, "focusing_stations", "must be at least 1");
  require(profile_half_width > 0.0, "profile_half_width", "must be positive");
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + "]";
}

}  // namespace

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["alpha0"] = num(std::abs(physical.alpha0));
  kv["alpha0_phase"] = num(alpha0_phase);
  kv["alpha_grid"] = list(alpha_grid);
  kv["atomic_density"] = num(physical.atomic_density);
  kv["center_scan_max"] = num(center_scan_max);
  kv["center_scan_points"] = std::to_string(center_scan_points);
  kv["center_scan_waists"] = list(center_scan_waists);
  kv["classical_half_window"] = num(classical_half_window);
  kv["classical_points"] = std::to_string(classical_points);
  kv["classical_steps"] = std::to_string(classical_steps);
  kv["control_waist_ratio"] = num(physical.control_waist_ratio);
  kv["curvature"] = name_of(kCurvatures, curvature);
  kv["delta_c1"] = num(physical.delta_c1);
  kv["delta_c2"] = num(physical.delta_c2);
  kv["density_ref"] = num(density_ref);
  kv["detector_bin"] = num(detector_bin);
  kv["experiment"] = experiment_name(experiment);
  kv["scan_alpha_phase"] = num(scan_alpha_phase);
  kv["focusing_stations"] = std::to_string(focusing_stations);
  kv["gamma32"] = num(physical.gamma32);
  kv["linear_gain"] = num(linear_gain);
  kv["medium_length"] = num(physical.medium_length);
  kv["model"] = name_of(kModels, model);
  kv["n_modes"] = std::to_string(n_modes);
  kv["n_steps"] = std::to_string(n_steps);
  kv["nonlinear_gain"] = nonlinear_gain ? num(*nonlinear_gain) : "calibrate";
  kv["omega_c1"] = num(physical.omega_c1);
  kv["omega_c2"] = num(physical.omega_c2);
  kv["ordering"] = name_of(kOrderings, ordering);
  kv["probe_waist"] = num(physical.probe_waist);
  kv["probe_wavelength"] = num(physical.probe_wavelength);
  kv["profile_half_width"] = num(profile_half_width);
  kv["quadrature_nodes"] = std::to_string(quadrature_nodes);
  kv["seed"] = std::to_string(seed);
  kv["table_path"] = table_path;
  kv["target_db"] = num(target_db);
  kv["theta"] = num(theta);
  kv["theta_policy"] = name_of(kThetaPolicies, theta_policy);
  kv["uniform_chi_l"] = num(uniform_chi_l);
  kv["uniform_chi_n"] = num(uniform_chi_n);
  kv["waist_scan"] = list(waist_scan);
  kv["waist_scan_center"] = num(waist_scan_center);
  std::string out;
  for (const auto& [k, v] : kv) out += k + ": " + v + "\n";
  return out;
}

namespace {

using Setter = std::function<void(const YAML::Node&, RunConfig&)>;

template <typename T>
T scalar(const YAML::Node& n) {
  if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "expected a scalar");
  return n.as<T>();
}

std::vector<double> sequence(const YAML::Node& n) {
  if (!n.IsSequence()) throw YAML::Exception(n.Mark(), "expected a list of numbers");
  std::vector<double> out;
  for (const auto& item : n) out.push_back(scalar<double>(item));
  return out;
}

template <typename E>
E enumerated(const YAML::Node& n, const std::map<std::string, E>& m) {
  const auto s = scalar<std::string>(n);
  const auto it = m.find(s);
  if (it == m.end()) {
    throw YAML::Exception(n.Mark(), "'" + s + "' is not one of: " + choices(m));
  }
  return it->second;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"probe_wavelength", [](auto& n, auto& c) { c.physical.probe_wavelength = scalar<double>(n); }},
      {"probe_waist", [](auto& n, auto& c) { c.physical.probe_waist = scalar<double>(n); }},
      {"medium_length", [](auto& n, auto& c) { c.physical.medium_length = scalar<double>(n); }},
      {"atomic_density", [](auto& n, auto& c) { c.physical.atomic_density = scalar<double>(n); }},
      {"gamma32", [](auto& n, auto& c) { c.physical.gamma32 = scalar<double>(n); }},
      {"omega_c1", [](auto& n, auto& c) { c.physical.omega_c1 = scalar<double>(n); }},
      {"omega_c2", [](auto& n, auto& c) { c.physical.omega_c2 = scalar<double>(n); }},
      {"delta_c1", [](auto& n, auto& c) { c.physical.delta_c1 = scalar<double>(n); }},
      {"delta_c2", [](auto& n, auto& c) { c.physical.delta_c2 = scalar<double>(n); }},
      {"control_waist_ratio",
       [](auto& n, auto& c) { c.physical.control_waist_ratio = scalar<double>(n); }},
      {"alpha0", [](auto& n, auto& c) { c.physical.alpha0 = scalar<double>(n); }},
      {"alpha0_phase", [](auto& n, auto& c) { c.alpha0_phase = scalar<double>(n); }},
      {"model", [](auto& n, auto& c) { c.model = enumerated(n, kModels); }},
      {"linear_gain", [](auto& n, auto& c) { c.linear_gain = scalar<double>(n); }},
      {"nonlinear_gain",
       [](auto& n, auto& c) {
         if (n.IsNull()) {
           c.nonlinear_gain.reset();
         } else {
           c.nonlinear_gain = scalar<double>(n);
         }
       }},
      {"target_db", [](auto& n, auto& c) { c.target_db = scalar<double>(n); }},
      {"density_ref", [](auto& n, auto& c) { c.density_ref = scalar<double>(n); }},
      {"table_path", [](auto& n, auto& c) { c.table_path = scalar<std::string>(n); }},
      {"uniform_chi_l", [](auto& n, auto& c) { c.uniform_chi_l = scalar<double>(n); }},
      {"uniform_chi_n", [](auto& n, auto& c) { c.uniform_chi_n = scalar<double>(n); }},
      {"curvature", [](auto& n, auto& c) { c.curvature = enumerated(n, kCurvatures); }},
      {"n_modes", [](auto& n, auto& c) { c.n_modes = scalar<int>(n); }},
      {"quadrature_nodes", [](auto& n, auto& c) { c.quadrature_nodes = scalar<int>(n); }},
      {"n_steps", [](auto& n, auto& c) { c.n_steps = scalar<int>(n); }},
      {"ordering", [](auto& n, auto& c) { c.ordering = enumerated(n, kOrderings); }},
      {"experiment",
       [](auto& n, auto& c) {
         try {
           c.experiment = parse_experiment(scalar<std::string>(n));
         } catch (const ConfigError& e) {
           throw YAML::Exception(n.Mark(), e.what());
         }
       }},
      {"output_dir", [](auto& n, auto& c) { c.output_dir = scalar<std::string>(n); }},
      {"seed", [](auto& n, auto& c) { c.seed = scalar<std::uint64_t>(n); }},
      {"theta_policy", [](auto& n, auto& c) { c.theta_policy = enumerated(n, kThetaPolicies); }},
      {"theta", [](auto& n, auto& c) { c.theta = scalar<double>(n); }},
      {"center_scan_waists", [](auto& n, auto& c) { c.center_scan_waists = sequence(n); }},
      {"center_scan_max", [](auto& n, auto& c) { c.center_scan_max = scalar<double>(n); }},
      {"center_scan_points", [](auto& n, auto& c) { c.center_scan_points = scalar<int>(n); }},
      {"waist_scan", [](auto& n, auto& c) { c.waist_scan = sequence(n); }},
      {"waist_scan_center", [](auto& n, auto& c) { c.waist_scan_center = scalar<double>(n); }},
      {"scan_alpha_phase", [](auto& n, auto& c) { c.scan_alpha_phase = scalar<double>(n); }},
      {"alpha_grid", [](auto& n, auto& c) { c.alpha_grid = sequence(n); }},
      {"detector_bin", [](auto& n, auto& c) { c.detector_bin = scalar<double>(n); }},
      {"classical_points", [](auto& n, auto& c) { c.classical_points = scalar<int>(n); }},
      {"classical_half_window",
       [](auto& n, auto& c) { c.classical_half_window = scalar<double>(n); }},
      {"classical_steps", [](auto& n, auto& c) { c.classical_steps = scalar<int>(n); }},
      {"focusing_stations", [](auto& n, auto& c) { c.focusing_stations = scalar<int>(n); }},
      {"profile_half_width", [](auto& n, auto& c) { c.profile_half_width = scalar<double>(n); }},
  };
  return table;
}

std::string where(const std::string& origin, const YAML::Mark& mark) {
  return origin + ":" + std::to_string(mark.line + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(where(origin, e.mark) + ": malformed configuration: " + e.msg);
  }
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError(origin + ": configuration must be a key: value mapping");
  const auto& table = setters();
  for (const auto& item : root) {
    const std::string key = item.first.as<std::string>();
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError(where(origin, item.first.Mark()) + ": unknown key '" + key + "'");
    }
    try {
      it->second(item.second, cfg);
    } catch (const YAML::Exception& e) {
      const YAML::Mark mark = e.mark.is_null() ? item.second.Mark() : e.mark;
      throw ConfigError(where(origin, mark) + ": bad value for '" + key + "': " + e.msg);
    }
  }
  cfg.physical.alpha0 = std::polar(std::abs(cfg.physical.alpha0), cfg.alpha0_phase);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

// ---- model set-up and calibration ----

Medium make_medium(const RunConfig& cfg, double nonlinear_gain) {
  const ScaledGeometry g = make_scaled_geometry(cfg.physical);
  Medium m;
  m.beam.peak_rabi = cfg.physical.omega_c1;
  m.beam.waist = g.control_waist();
  m.beam.zeta_rayleigh = g.zeta_rayleigh_control();
  m.beam.curvature = cfg.curvature;
  switch (cfg.model) {
    case ModelKind::kGenericFwm: {
      GenericFwmModel model;
      model.linear_gain = cfg.linear_gain;
      model.nonlinear_gain = nonlinear_gain;
      model.omega_c2 = cfg.physical.omega_c2;
      model.density_scale = cfg.physical.atomic_density / cfg.density_ref;
      m.model = model;
      break;
    }
    case ModelKind::kTabulated:
      m.model = TabulatedModel::from_csv(cfg.table_path);
      break;
    case ModelKind::kUniform:
      m.model = UniformModel{cfg.uniform_chi_l, cfg.uniform_chi_n};
      break;
  }
  return m;
}

namespace {

ModeBasis make_basis(const RunConfig& cfg) {
  return ModeBasis(cfg.n_modes, 1.0, cfg.quadrature_nodes);
}

TransferMatrix propagate_config(const RunConfig& cfg, const Medium& medium,
                                const ModeBasis& basis) {
  const ScaledGeometry g = make_scaled_geometry(cfg.physical);
  PropagateOptions opts;
  opts.ordering = cfg.ordering;
  return propagate(medium, basis, g.zeta_end, cfg.n_steps, opts);
}

}  // namespace

double matched_squeezing_db(const RunConfig& cfg, double nonlinear_gain) {
  const ScaledGeometry g = make_scaled_geometry(cfg.physical);
  const ModeBasis basis = make_basis(cfg);
  const TransferMatrix t = propagate_config(cfg, make_medium(cfg, nonlinear_gain), basis);
  const GaussianState out = evolve(vacuum_state(cfg.n_modes), t);
  return squeezing_db(out, basis, g.zeta_end, LocalOscillator{0.0, 1.0}).db;
}

Calibration calibrate_model(const RunConfig& cfg, double target_db) {
  if (cfg.model != ModelKind::kGenericFwm) {
    throw ConfigError("calibration requires the generic_fwm model");
  }
  if (!(target_db <= 0.0)) throw ConfigError("calibration target must be <= 0 dB");
  Calibration cal;
  cal.performed = true;
  cal.target_db = target_db;
  if (target_db == 0.0) return cal;

  constexpr double kScanStep = 5.0;
  constexpr double kScanMax = 400.0;
  constexpr double kTolerance = 0.05;
  const auto eval = [&](double gn) {
    ++cal.evaluations;
    return matched_squeezing_db(cfg, gn);
  };

  double lo = 0.0;
  double s_lo = 0.0;
  double hi = 0.0;
  double s_hi = 0.0;
  double best = 0.0;
  double best_g = 0.0;
  for (double gn = kScanStep;; gn += kScanStep) {
    double s = 0.0;
    try {
      s = eval(gn);
    } catch (const NumericalIntegrityError& e) {
      std::ostringstream msg;
      msg << "calibration: target " << target_db << " dB not reached; achieved range [" << best
          << ", 0] dB for g_n in [0, " << gn - kScanStep << "] before numerical failure ("
          << e.what() << ")";
      throw ConfigError(msg.str());
    }
    if (s < best) {
      best = s;
      best_g = gn;
    }
    if (s <= target_db) {
      hi = gn;
      s_hi = s;
      break;
    }
    if (s >= s_lo || gn >= kScanMax) {
      std::ostringstream msg;
      msg << "calibration: target " << target_db << " dB unreachable; squeezing is monotone only "
          << "up to g_n=" << best_g << " where it reaches " << best << " dB (achieved range ["
          << best << ", 0] dB)";
      throw ConfigError(msg.str());
    }
    lo = gn;
    s_lo = s;
  }

  std::uintmax_t iterations = 60;
  const auto f = [&](double gn) { return (gn == lo ? s_lo : gn == hi ? s_hi : eval(gn)) - target_db; };
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, s_lo - target_db, s_hi - target_db,
      [](double x, double y) { return std::abs(y - x) < 1e-6 * std::max(1.0, std::abs(x)); },
      iterations);
  cal.nonlinear_gain = 0.5 * (a + b);
  cal.achieved_db = eval(cal.nonlinear_gain);
  if (std::abs(cal.achieved_db - target_db) > kTolerance) {
    std::ostringstream msg;
    msg << "calibration: root finder ended at " << cal.achieved_db << " dB, target " << target_db;
    throw NumericalIntegrityError(msg.str());
  }
  return cal;
}

GaussianState Simulation::output(cplx alpha0) const {
  return evolve(coherent_input(alpha0, basis.size()), transfer);
}

Simulation prepare(const RunConfig& cfg) {
  cfg.validate();
  const ScaledGeometry g = make_scaled_geometry(cfg.physical);
  Calibration cal;
  double gn = cfg.nonlinear_gain.value_or(0.0);
  if (cfg.model == ModelKind::kGenericFwm && !cfg.nonlinear_gain) {
    cal = calibrate_model(cfg, cfg.target_db);
    gn = cal.nonlinear_gain;
  } else {
    cal.nonlinear_gain = gn;
  }
  ModeBasis basis = make_basis(cfg);
  Medium medium = make_medium(cfg, gn);
  TransferMatrix t = propagate_config(cfg, medium, basis);
  return Simulation{g, std::move(basis), std::move(medium), cal, std::move(t)};
}

// ---- output ----

std::string format_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10e", row[i]);
      out += (i ? "," : "") + std::string(buf);
    }
    out += "\n";
  }
  return out;
}

void write_outputs(const RunResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  const auto write = [&](const std::string& name, const std::string& body) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << body;
  };
  for (const auto& t : result.tables) write(t.name + ".csv", format_csv(t));
  write("metadata.json", result.metadata_json);
}

// ---- experiments ----

namespace {

using json = nlohmann::ordered_json;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

cplx scan_alpha(const RunConfig& cfg, double magnitude) {
  return std::polar(magnitude, cfg.scan_alpha_phase);
}

std::function<cplx(double)> input_profile(cplx alpha0) {
  return [alpha0](double xi) {
    return alpha0 * std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  };
}

ClassicalField run_classical(const RunConfig& cfg, const Simulation& sim, ClassicalVariant v) {
  SplitStepOptions opts;
  opts.grid_points = cfg.classical_points;
  opts.half_window = cfg.classical_half_window;
  opts.variant = v;
  return classical_split_step(input_profile(cfg.physical.alpha0), sim.medium, sim.zeta_end(),
                              cfg.classical_steps, opts);
}

/// Indices of the classical grid within the profile window.
std::vector<Eigen::Index> window_indices(const ClassicalField& f, double half_width) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < f.xi.size(); ++k) {
    if (std::abs(f.xi[k]) <= half_width) out.push_back(k);
  }
  return out;
}

void focusing(const RunConfig& cfg, const Simulation& sim, RunResult& res, json& extra) {
  const double zend = sim.zeta_end();
  const SusceptibilityField field = sample_midpoints(sim.medium, sim.basis, 0.0, zend, cfg.n_steps);
  const int stride = std::max(1, cfg.n_steps / cfg.focusing_stations);
  const std::vector<double> xi = linspace(-cfg.profile_half_width, cfg.profile_half_width, 161);
  const GaussianState input = coherent_input(cfg.physical.alpha0, sim.basis.size());
  const WidthMeasure measure;

  ResultTable curve{"focusing", {"zeta", "z_over_zr", "sqrt_width", "peak_intensity", "photons"}, {}};
  ResultTable map{"intensity_map", {"zeta", "xi", "intensity"}, {}};
  const auto record = [&](double zeta, const TransferMatrix& t) {
    const GaussianState s = evolve(input, t);
    const RVector i = intensity_profile(s, sim.basis, zeta, xi);
    const double w = std::sqrt(width_mean(s, measure.matrix(sim.basis, zeta)));
    curve.rows.push_back({zeta, zeta / sim.basis.zeta_rayleigh(), w, i.maxCoeff(), s.photon_number()});
    for (std::size_t k = 0; k < xi.size(); ++k) map.rows.push_back({zeta, xi[k], i[k]});
  };
  TransferMatrix t = TransferMatrix::identity(sim.basis.size());
  record(0.0, t);
  const double h = field.step();
  for (int s = 0; s < field.steps(); ++s) {
    t = step(t, build_m(assemble_coupling(field.slices[s], sim.basis)), h);
    if ((s + 1) % stride == 0 || s + 1 == field.steps()) record((s + 1) * h, t);
  }

  const ClassicalField lin = run_classical(cfg, sim, ClassicalVariant::kLinearOnly);
  const ClassicalField full = run_classical(cfg, sim, ClassicalVariant::kFull);
  const auto idx = window_indices(lin, cfg.profile_half_width);
  std::vector<double> pxi;
  for (auto k : idx) pxi.push_back(lin.xi[k]);
  const RVector in_i = intensity_profile(input, sim.basis, 0.0, pxi);
  const GaussianState out = sim.output(cfg.physical.alpha0);
  const RVector out_i = intensity_profile(out, sim.basis, zend, pxi);
  ResultTable profiles{"profiles",
                       {"xi", "input_intensity", "output_intensity", "classical_linear_intensity",
                        "classical_full_intensity"},
                       {}};
  for (std::size_t j = 0; j < idx.size(); ++j) {
    profiles.rows.push_back({pxi[j], in_i[j], out_i[j], std::norm(lin.field[idx[j]]),
                             std::norm(full.field[idx[j]])});
  }
  res.tables.push_back(std::move(curve));
  res.tables.push_back(std::move(map));
  res.tables.push_back(std::move(profiles));
  extra["output_sqrt_width"] = std::sqrt(width_mean(out, measure.matrix(sim.basis, zend)));
  extra["output_photons"] = out.photon_number();
  extra["classical_linear_sqrt_width"] = std::sqrt(lin.width_mean());
  extra["classical_full_sqrt_width"] = std::sqrt(full.width_mean());
}

void lo_scan_rows(ResultTable& table, const std::vector<LoScanPoint>& pts) {
  for (const auto& p : pts) {
    table.rows.push_back({p.center, p.waist, p.result.theta, p.result.db,
                          p.result.antisqueezing_db, p.result.truncation_loss});
  }
}

const std::vector<std::string> kLoColumns = {"x0_over_wp",      "wl_over_wp",
                                             "theta",           "squeezing_db",
                                             "antisqueezing_db", "truncation_loss"};

void lo_center(const RunConfig& cfg, const Simulation& sim, RunResult& res, json& extra) {
  const GaussianState out = sim.output(cfg.physical.alpha0);
  const auto centers = linspace(-cfg.center_scan_max, cfg.center_scan_max, cfg.center_scan_points);
  ResultTable table{"lo_center_scan", kLoColumns, {}};
  for (double wl : cfg.center_scan_waists) {
    std::vector<LoScanPoint> pts(centers.size());
    tbb::parallel_for(std::size_t{0}, centers.size(), [&](std::size_t i) {
      pts[i] = {centers[i], wl,
                squeezing_db(out, sim.basis, sim.zeta_end(), {centers[i], wl}, cfg.theta_policy,
                             cfg.theta)};
    });
    lo_scan_rows(table, pts);
  }
  extra["center_scan_waists"] = cfg.center_scan_waists;
  res.tables.push_back(std::move(table));
}

void lo_waist(const RunConfig& cfg, const Simulation& sim, RunResult& res, json&) {
  const GaussianState out = sim.output(cfg.physical.alpha0);
  std::vector<LoScanPoint> pts(cfg.waist_scan.size());
  tbb::parallel_for(std::size_t{0}, pts.size(), [&](std::size_t i) {
    const double wl = cfg.waist_scan[i];
    pts[i] = {cfg.waist_scan_center, wl,
              squeezing_db(out, sim.basis, sim.zeta_end(), {cfg.waist_scan_center, wl},
                           cfg.theta_policy, cfg.theta)};
  });
  ResultTable table{"lo_waist_scan", kLoColumns, {}};
  lo_scan_rows(table, pts);
  res.tables.push_back(std::move(table));
}

void width_vs_alpha(const RunConfig& cfg, const Simulation& sim, RunResult& res, json& extra) {
  const CMatrix f_out = WidthMeasure{}.matrix(sim.basis, sim.zeta_end());
  const CMatrix f_in = WidthMeasure{}.matrix(sim.basis, 0.0);
  const auto& alphas = cfg.alpha_grid;
  std::vector<WidthUncertainty> msm(alphas.size());
  std::vector<double> photons(alphas.size());
  tbb::parallel_for(std::size_t{0}, alphas.size(), [&](std::size_t i) {
    const GaussianState s = sim.output(scan_alpha(cfg, alphas[i]));
    msm[i] = width_uncertainty(s, f_out);
    photons[i] = s.photon_number();
  });
  const double db = sim.calibration.performed ? sim.calibration.target_db : cfg.target_db;
  const auto base = single_mode_width_baselines(alphas, db, f_in);
  ResultTable table{"width_vs_alpha",
                    {"alpha", "msm_relative", "sm_squeezed_relative", "coherent_relative",
                     "msm_relative_length", "sm_squeezed_relative_length",
                     "coherent_relative_length", "msm_sqrt_width", "msm_photons"},
                    {}};
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    table.rows.push_back({alphas[i], msm[i].relative, base[i].squeezed, base[i].coherent,
                          msm[i].relative_length, 0.5 * base[i].squeezed, 0.5 * base[i].coherent,
                          std::sqrt(msm[i].mean), photons[i]});
  }
  extra["baseline_squeeze_db"] = db;
  extra["input_phase"] = cfg.scan_alpha_phase;
  res.tables.push_back(std::move(table));
}

void local_fluctuations(const RunConfig& cfg, const Simulation& sim, RunResult& res,
                        json& extra) {
  const double zend = sim.zeta_end();
  const double db = sim.calibration.performed ? sim.calibration.target_db : cfg.target_db;
  const double r = squeeze_parameter_for_db(db);
  const double half = 0.5 * cfg.detector_bin;
  const double u0_abs2 = std::norm(sim.basis.mode_value(0, 0.0, 0.0));
  const CMatrix bin_in = window_matrix(sim.basis, 0.0, -half, half);
  const double u0_bin = bin_in(0, 0).real();
  double cross = 0.0;
  for (Eigen::Index l = 1; l < bin_in.cols(); ++l) cross += std::norm(bin_in(0, l));

  ResultTable table{"local_fluctuations",
                    {"alpha", "msm_pointwise_normalized", "sm_pointwise_normalized",
                     "msm_binned_normalized", "sm_binned_normalized", "msm_pointwise_fano",
                     "msm_pointwise_relative_variance", "msm_pointwise_intensity",
                     "msm_pointwise_variance"},
                    {}};
  const auto& alphas = cfg.alpha_grid;
  table.rows.resize(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    const GaussianState s = sim.output(scan_alpha(cfg, a));
    const LocalFluctuation p = local_intensity_fluctuation(s, sim.basis, zend, 0.0);
    const LocalFluctuation b = binned_intensity_fluctuation(s, sim.basis, zend, 0.0, cfg.detector_bin);
    const FockOracle sm = FockOracle::single_mode(a, r, 0.0, suggested_cutoff(a, r));
    const SingleModeLocalNoise smp = single_mode_local_noise(sm, u0_abs2);
    CMatrix one(1, 1);
    one(0, 0) = 1.0;
    const auto [n, var_n] = sm.quadratic_moments(one);
    const double sm_bin_i = u0_bin * n;
    const double sm_bin_var = u0_bin * u0_bin * var_n + cross * n;
    // Reference: the coherent input a u0 at the input plane, in the same
    // truncated basis. Pointwise its relative variance is 1/I exactly.
    const double coh_point = 1.0 / (a * a * u0_abs2);
    const double coh_bin = (u0_bin * u0_bin + cross) / (a * a * u0_bin * u0_bin);
    table.rows[i] = {a,
                     p.relative_variance / coh_point,
                     smp.relative_variance / coh_point,
                     b.relative_variance / coh_bin,
                     sm_bin_var / (sm_bin_i * sm_bin_i) / coh_bin,
                     p.fano,
                     p.relative_variance,
                     p.intensity,
                     p.variance};
  }
  extra["detector_bin"] = cfg.detector_bin;
  extra["input_phase"] = cfg.scan_alpha_phase;
  extra["baseline_squeeze_db"] = db;
  res.tables.push_back(std::move(table));
}

void classical_compare(const RunConfig& cfg, const Simulation& sim, RunResult& res,
                       json& extra) {
  const ClassicalField full = run_classical(cfg, sim, ClassicalVariant::kFull);
  const ClassicalField lin = run_classical(cfg, sim, ClassicalVariant::kLinearOnly);
  const GaussianState out = sim.output(cfg.physical.alpha0);
  const std::vector<double> xi(full.xi.data(), full.xi.data() + full.xi.size());
  const CVector q = sim.basis.reconstruct(out.mean, xi, sim.zeta_end());
  ResultTable table{"classical_compare",
                    {"xi", "quantum_mean_re", "quantum_mean_im", "classical_full_re",
                     "classical_full_im", "classical_linear_re", "classical_linear_im"},
                    {}};
  for (const auto k : window_indices(full, cfg.profile_half_width)) {
    table.rows.push_back({xi[k], q[k].real(), q[k].imag(), full.field[k].real(),
                          full.field[k].imag(), lin.field[k].real(), lin.field[k].imag()});
  }
  extra["relative_l2"] = (q - full.field).norm() / full.field.norm();
  res.tables.push_back(std::move(table));
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg) {
  cfg.validate();
  RunResult res;
  json meta;
  meta["config_hash"] = sha256_hex(cfg.canonical());
  meta["version"] = kVersion;
  meta["experiment"] = experiment_name(cfg.experiment);
  meta["n_modes"] = cfg.n_modes;
  meta["n_steps"] = cfg.n_steps;
  json extra = json::object();

  if (cfg.experiment == Experiment::kValidate) {
    const auto results = run_acceptance(cfg);
    ResultTable table{"validate", {"criterion", "passed"}, {}};
    json list = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      table.rows.push_back({static_cast<double>(i + 1), results[i].passed ? 1.0 : 0.0});
      list.push_back({{"name", results[i].name},
                      {"passed", results[i].passed},
                      {"detail", results[i].detail}});
      res.ok = res.ok && results[i].passed;
    }
    meta["criteria"] = list;
    res.tables.push_back(std::move(table));
  } else {
    const Simulation sim = prepare(cfg);
    meta["quadrature_nodes"] = sim.basis.quadrature_nodes();
    meta["zeta_end"] = sim.zeta_end();
    meta["symplectic_defect"] = symplectic_defect(sim.transfer.t);
    meta["calibration"] = {{"performed", sim.calibration.performed},
                           {"nonlinear_gain", sim.calibration.nonlinear_gain},
                           {"target_db", sim.calibration.target_db},
                           {"achieved_db", sim.calibration.achieved_db},
                           {"evaluations", sim.calibration.evaluations}};
    switch (cfg.experiment) {
      case Experiment::kFocusing: focusing(cfg, sim, res, extra); break;
      case Experiment::kLoCenterScan: lo_center(cfg, sim, res, extra); break;
      case Experiment::kLoWaistScan: lo_waist(cfg, sim, res, extra); break;
      case Experiment::kWidthVsAlpha: width_vs_alpha(cfg, sim, res, extra); break;
      case Experiment::kLocalFluctuations: local_fluctuations(cfg, sim, res, extra); break;
      case Experiment::kClassicalCompare: classical_compare(cfg, sim, res, extra); break;
      case Experiment::kValidate: break;
    }
  }
  meta["results"] = extra;
  json files = json::array();
  for (const auto& t : res.tables) files.push_back(t.name + ".csv");
  meta["files"] = files;
  meta["config"] = cfg.canonical();
  res.metadata_json = meta.dump(2) + "\n";
  return res;
}

}  // namespace msmsq
