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

#include "msmsq/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "msmsq/errors.hpp"

namespace msmsq {

double ControlBeam::width_at(double zeta) const {
  const double r = zeta / zeta_rayleigh;
  return waist * std::sqrt(1.0 + r * r);
}

cplx control_value(const ControlBeam& beam, double xi, double zeta) {
  const double wz = beam.width_at(zeta);
  const double amp = beam.peak_rabi * beam.waist / wz * std::exp(-xi * xi / (2.0 * wz * wz));
  const double inv_r = zeta / (zeta * zeta + beam.zeta_rayleigh * beam.zeta_rayleigh);
  double curv = 0.0;
  switch (beam.curvature) {
    case CurvatureConvention::kStandard:
      curv = xi * xi * inv_r / 2.0;
      break;
    case CurvatureConvention::kInverseSquare:
      curv = -xi * xi * inv_r * inv_r / 4.0;
      break;
  }
  const double gouy = std::atan(zeta / beam.zeta_rayleigh);
  return amp * std::polar(1.0, curv + gouy);
}

namespace {

std::size_t locate(const RVector& axis, double v) {
  const auto* begin = axis.data();
  const auto* end = begin + axis.size();
  auto it = std::upper_bound(begin, end, v);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - begin - 1, 0));
  return std::min<std::size_t>(i, static_cast<std::size_t>(axis.size()) - 2);
}

}  // namespace

Susceptibility TabulatedModel::at(double x, double z) const {
  if (x < xi[0] || x > xi[xi.size() - 1]) return {};
  if (zeta.size() == 1) {
    const std::size_t i = locate(xi, x);
    const double t = (x - xi[i]) / (xi[i + 1] - xi[i]);
    return {(1 - t) * chi_l(0, i) + t * chi_l(0, i + 1), (1 - t) * chi_n(0, i) + t * chi_n(0, i + 1)};
  }
  z = std::clamp(z, zeta[0], zeta[zeta.size() - 1]);
  const std::size_t i = locate(xi, x);
  const std::size_t k = locate(zeta, z);
  const double t = (x - xi[i]) / (xi[i + 1] - xi[i]);
  const double s = (z - zeta[k]) / (zeta[k + 1] - zeta[k]);
  auto lerp2 = [&](const Eigen::MatrixXd& m) {
    return (1 - s) * ((1 - t) * m(k, i) + t * m(k, i + 1)) +
           s * ((1 - t) * m(k + 1, i) + t * m(k + 1, i + 1));
  };
  return {lerp2(chi_l), lerp2(chi_n)};
}

TabulatedModel TabulatedModel::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open susceptibility table " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty susceptibility table");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "xi,zeta,chi_l,chi_n") {
    throw ConfigError(path + ":1: expected header 'xi,zeta,chi_l,chi_n'");
  }
  std::map<std::pair<double, double>, Susceptibility> rows;
  std::map<double, int> xs, zs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, z, cl, cn;
    if (!(ss >> x >> z >> cl >> cn)) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected four numbers");
    }
    if (!std::isfinite(x) || !std::isfinite(z) || !std::isfinite(cl) || !std::isfinite(cn)) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": non-finite value");
    }
    rows[{z, x}] = {cl, cn};
    xs[x] = 0;
    zs[z] = 0;
  }
  if (xs.size() < 2) throw ConfigError(path + ": need at least two distinct xi values");
  if (rows.size() != xs.size() * zs.size()) {
    throw ConfigError(path + ": rows do not form a complete (xi, zeta) grid");
  }
  TabulatedModel t;
  t.xi.resize(static_cast<Eigen::Index>(xs.size()));
  t.zeta.resize(static_cast<Eigen::Index>(zs.size()));
  Eigen::Index i = 0;
  for (auto& [x, idx] : xs) { idx = static_cast<int>(i); t.xi[i++] = x; }
  i = 0;
  for (auto& [z, idx] : zs) { idx = static_cast<int>(i); t.zeta[i++] = z; }
  t.chi_l.resize(t.zeta.size(), t.xi.size());
  t.chi_n.resize(t.zeta.size(), t.xi.size());
  for (const auto& [key, v] : rows) {
    t.chi_l(zs[key.first], xs[key.second]) = v.chi_l;
    t.chi_n(zs[key.first], xs[key.second]) = v.chi_n;
  }
  return t;
}

namespace {

struct ModelEval {
  double xi, zeta;
  const ControlBeam& beam;

  Susceptibility operator()(const UniformModel& m) const { return {m.chi_l, m.chi_n}; }
  Susceptibility operator()(const TabulatedModel& m) const { return m.at(xi, zeta); }
  Susceptibility operator()(const GenericFwmModel& m) const {
    if (beam.peak_rabi == 0.0) return {};
    const double e = std::abs(control_value(beam, xi, zeta)) / m.omega_c1_ref;
    return {m.linear_gain * m.density_scale * e * e,
            m.nonlinear_gain * m.density_scale * e * m.omega_c2 / m.omega_c2_ref};
  }
};

}  // namespace

Susceptibility Medium::at(double xi, double zeta) const {
  const Susceptibility s = std::visit(ModelEval{xi, zeta, beam}, model);
  if (!std::isfinite(s.chi_l) || !std::isfinite(s.chi_n)) {
    std::ostringstream msg;
    msg << "non-finite susceptibility at xi=" << xi << ", zeta=" << zeta;
    throw NumericalIntegrityError(msg.str());
  }
  return s;
}

FieldSlice evaluate_susceptibility(const Medium& medium, const QuadratureGrid& grid) {
  FieldSlice slice{grid, RVector(grid.xi.size()), RVector(grid.xi.size())};
  for (Eigen::Index k = 0; k < grid.xi.size(); ++k) {
    const Susceptibility s = medium.at(grid.xi[k], grid.zeta);
    slice.chi_l[k] = s.chi_l;
    slice.chi_n[k] = s.chi_n;
  }
  return slice;
}

SusceptibilityField sample_midpoints(const Medium& medium, const ModeBasis& basis,
                                     double zeta_start, double zeta_end, int n_steps) {
  if (n_steps < 1) throw ConfigError("n_steps must be at least 1");
  if (!(zeta_end > zeta_start)) throw ConfigError("zeta_end must exceed zeta_start");
  SusceptibilityField field;
  field.zeta_start = zeta_start;
  field.zeta_end = zeta_end;
  field.slices.reserve(static_cast<std::size_t>(n_steps));
  const double h = (zeta_end - zeta_start) / n_steps;
  for (int s = 0; s < n_steps; ++s) {
    field.slices.push_back(evaluate_susceptibility(medium, basis.grid(zeta_start + (s + 0.5) * h)));
  }
  return field;
}

}  // namespace msmsq
