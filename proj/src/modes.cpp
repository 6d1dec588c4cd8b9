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

#include "msmsq/modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "msmsq/errors.hpp"

namespace msmsq {

RVector hermite_functions(int n, double x) {
  RVector phi(n);
  if (n == 0) return phi;
  phi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n > 1) phi[1] = std::numbers::sqrt2 * x * phi[0];
  for (int k = 2; k < n; ++k) {
    phi[k] = std::sqrt(2.0 / k) * x * phi[k - 1] - std::sqrt((k - 1.0) / k) * phi[k - 2];
  }
  return phi;
}

GaussHermiteRule quadrature_rule(int n) {
  if (n < 2) throw ConfigError("quadrature rule needs at least 2 nodes");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.scaled_weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = rule.nodes[k];
    for (int it = 0; it < 8; ++it) {
      RVector phi = hermite_functions(n + 1, x);
      const double deriv = std::sqrt(2.0 * n) * phi[n - 1] - x * phi[n];
      const double dx = phi[n] / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    RVector phi = hermite_functions(n, x);
    rule.nodes[k] = x;
    rule.scaled_weights[k] = 1.0 / (n * phi[n - 1] * phi[n - 1]);
  }
  // Exact antisymmetry of the node set keeps even integrands exactly even.
  for (int k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    const double w = 0.5 * (rule.scaled_weights[n - 1 - k] + rule.scaled_weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.scaled_weights[k] = rule.scaled_weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

ModeBasis::ModeBasis(int n_modes, double sigma0, int quadrature_nodes)
    : n_(n_modes), sigma0_(sigma0) {
  if (n_modes < 1) throw ConfigError("number of modes must be at least 1");
  if (!(sigma0 > 0.0)) throw ConfigError("mode waist sigma0 must be positive");
  const int nq = quadrature_nodes == 0 ? 4 * n_modes : quadrature_nodes;
  if (nq < 2 * n_modes + 2) {
    throw ConfigError("quadrature_nodes = " + std::to_string(nq) + " is below 2N+2 = " +
                      std::to_string(2 * n_modes + 2));
  }
  rule_ = quadrature_rule(nq);
}

double ModeBasis::width_at(double zeta) const {
  const double r = zeta / zeta_rayleigh();
  return sigma0_ * std::sqrt(1.0 + r * r);
}

double ModeBasis::gouy_angle(int j, double zeta) const {
  return (j + 0.5) * std::atan(zeta / zeta_rayleigh());
}

namespace {

// Wavefront phase xi^2 zeta / (2 (zeta^2 + zeta_R^2)) for unit wavenumber.
double curvature_phase(double xi, double zeta, double zeta_r) {
  return xi * xi * zeta / (2.0 * (zeta * zeta + zeta_r * zeta_r));
}

}  // namespace

cplx ModeBasis::mode_value(int j, double xi, double zeta) const {
  if (j < 0 || j >= n_) {
    throw std::out_of_range("mode index " + std::to_string(j) + " outside [0, " +
                            std::to_string(n_) + ")");
  }
  return values(xi, zeta)[j];
}

CVector ModeBasis::values(double xi, double zeta) const {
  const double w = width_at(zeta);
  const RVector phi = hermite_functions(n_, xi / w);
  const double curv = curvature_phase(xi, zeta, zeta_rayleigh());
  const double gouy = std::atan(zeta / zeta_rayleigh());
  const double amp = 1.0 / std::sqrt(w);
  CVector out(n_);
  for (int j = 0; j < n_; ++j) {
    const double phase = kDiffractionSign * (curv - (j + 0.5) * gouy);
    out[j] = amp * phi[j] * std::polar(1.0, phase);
  }
  return out;
}

CMatrix ModeBasis::values(std::span<const double> xi, double zeta) const {
  CMatrix out(n_, static_cast<Eigen::Index>(xi.size()));
  for (std::size_t k = 0; k < xi.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = values(xi[k], zeta);
  return out;
}

QuadratureGrid ModeBasis::grid(double zeta) const {
  const double w = width_at(zeta);
  QuadratureGrid g;
  g.zeta = zeta;
  g.xi = w * rule_.nodes;
  g.weights = w * rule_.scaled_weights;
  return g;
}

CMatrix ModeBasis::grid_values(const QuadratureGrid& g) const {
  return values(std::span<const double>(g.xi.data(), static_cast<std::size_t>(g.xi.size())), g.zeta);
}

TransverseProfile ModeBasis::sample(double zeta, const std::function<cplx(double)>& f) const {
  TransverseProfile p{grid(zeta), {}};
  p.samples.resize(p.grid.xi.size());
  for (Eigen::Index k = 0; k < p.grid.xi.size(); ++k) p.samples[k] = f(p.grid.xi[k]);
  return p;
}

Projection ModeBasis::project(const TransverseProfile& profile, double warn_threshold) const {
  if (profile.samples.size() != profile.grid.xi.size() ||
      profile.grid.xi.size() != rule_.nodes.size()) {
    throw ConfigError("profile is not sampled on this basis' quadrature grid");
  }
  const CMatrix u = grid_values(profile.grid);
  Projection out;
  out.coefficients = u.conjugate() * profile.grid.weights.cwiseProduct(profile.samples);
  const double norm2 = (profile.grid.weights.array() * profile.samples.array().abs2()).sum();
  if (norm2 > 0.0) {
    out.residual = std::max(0.0, 1.0 - out.coefficients.squaredNorm() / norm2);
  }
  out.truncated = out.residual > warn_threshold;
  return out;
}

CVector ModeBasis::reconstruct(const CVector& coefficients, std::span<const double> xi,
                               double zeta) const {
  return values(xi, zeta).transpose() * coefficients;
}

}  // namespace msmsq
