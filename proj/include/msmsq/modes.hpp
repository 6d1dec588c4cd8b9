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

#include <functional>
#include <span>

#include "msmsq/types.hpp"

namespace msmsq {

/// Sign s of the transverse term in the field equation
///   d_zeta a = s (i/2) d_xi^2 a + i chi_l a + i chi_n a^dag.
/// The mode functions satisfy d_zeta u = s (i/2) d_xi^2 u, which removes
/// free diffraction from the coupled-mode system. The split-step solver uses
/// the same constant.
inline constexpr double kDiffractionSign = -1.0;

/// Gauss-Hermite rule for weight e^{-x^2}. `scaled_weights` hold
/// w_k e^{x_k^2}, so that  int g(x) dx ~= sum_k scaled_weights[k] g(x_k)
/// for g = polynomial * e^{-x^2}, without under/overflow for large n.
struct GaussHermiteRule {
  RVector nodes;
  RVector scaled_weights;
};

/// Golub-Welsch start followed by Newton polishing on normalized Hermite
/// functions. Throws ConfigError for n < 2.
GaussHermiteRule quadrature_rule(int n);

/// Normalized Hermite functions phi_0..phi_{n-1} at x.
RVector hermite_functions(int n, double x);

/// Quadrature nodes in xi rescaled to the local beam width at zeta.
struct QuadratureGrid {
  double zeta = 0.0;
  RVector xi;
  RVector weights;
};

/// Samples of a transverse field on a QuadratureGrid.
struct TransverseProfile {
  QuadratureGrid grid;
  CVector samples;
};

struct Projection {
  CVector coefficients;
  double residual = 0.0;  // lost fraction of the norm, ||p - P p||^2 / ||p||^2
  bool truncated = false;
};

/// N one-dimensional Hermite-Gauss paraxial modes with waist sigma0 at zeta=0
/// and scaled Rayleigh length zeta_R = sigma0^2.
class ModeBasis {
 public:
  /// quadrature_nodes = 0 selects 4N. Fewer than 2N+2 nodes is a ConfigError.
  explicit ModeBasis(int n_modes, double sigma0 = 1.0, int quadrature_nodes = 0);

  int size() const { return n_; }
  double sigma0() const { return sigma0_; }
  double zeta_rayleigh() const { return sigma0_ * sigma0_; }
  int quadrature_nodes() const { return static_cast<int>(rule_.nodes.size()); }
  const GaussHermiteRule& rule() const { return rule_; }

  /// 1/sqrt(e) half-width of the amplitude envelope at zeta.
  double width_at(double zeta) const;
  /// (j + 1/2) arctan(zeta / zeta_R), without the sign convention applied.
  double gouy_angle(int j, double zeta) const;

  cplx mode_value(int j, double xi, double zeta) const;
  /// u_0..u_{N-1} at (xi, zeta).
  CVector values(double xi, double zeta) const;
  /// N x xi.size() matrix of mode values.
  CMatrix values(std::span<const double> xi, double zeta) const;

  QuadratureGrid grid(double zeta) const;
  /// Mode values on grid(zeta) nodes; N x N_q.
  CMatrix grid_values(const QuadratureGrid& g) const;

  TransverseProfile sample(double zeta, const std::function<cplx(double)>& f) const;
  Projection project(const TransverseProfile& profile, double warn_threshold = 1e-6) const;
  /// Sum_j c_j u_j(xi, zeta) at the given points.
  CVector reconstruct(const CVector& coefficients, std::span<const double> xi, double zeta) const;

 private:
  int n_;
  double sigma0_;
  GaussHermiteRule rule_;
};

}  // namespace msmsq
