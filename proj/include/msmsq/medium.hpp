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

#include <string>
#include <variant>
#include <vector>

#include "msmsq/modes.hpp"
#include "msmsq/types.hpp"

namespace msmsq {

enum class CurvatureConvention {
  kStandard,      // exp(+i xi^2 / (2 R(zeta)))
  kInverseSquare,  // exp(-i xi^2 / (4 R(zeta)^2))
};

/// Fundamental Hermite-Gauss control field Omega_c1 in scaled coordinates.
struct ControlBeam {
  double peak_rabi = 3.0;       // Gamma_32 units
  double waist = 0.8;           // scaled
  double zeta_rayleigh = 0.64;  // scaled
  CurvatureConvention curvature = CurvatureConvention::kStandard;

  double width_at(double zeta) const;
};

cplx control_value(const ControlBeam& beam, double xi, double zeta);

/// chi_l = chi_n = 0 is valid; anything non-finite is not.
struct Susceptibility {
  double chi_l = 0.0;
  double chi_n = 0.0;
};

struct UniformModel {
  double chi_l = 0.0;
  double chi_n = 0.0;
};

/// Far-detuned double-Lambda scaling with the atomic-structure prefactors
/// folded into two real constants:
///   chi_l = g_l (n/n_ref) |Omega_c1|^2 / Omega_ref^2
///   chi_n = g_n (n/n_ref) |Omega_c1| Omega_c2 / (Omega_ref Omega_c2_ref)
/// The reference values are the defaults the constants are calibrated at.
struct GenericFwmModel {
  double linear_gain = 3.0;     // g_l
  double nonlinear_gain = 0.0;  // g_n, usually from calibration
  double omega_c2 = 10.0;
  double density_scale = 1.0;   // n / n_ref
  double omega_c1_ref = 3.0;
  double omega_c2_ref = 10.0;
};

/// Samples on a rectilinear (zeta, xi) grid; bilinear in between. Zero
/// outside the tabulated xi span; zeta is clamped to the tabulated range.
struct TabulatedModel {
  RVector xi;
  RVector zeta;
  Eigen::MatrixXd chi_l;  // zeta.size() x xi.size()
  Eigen::MatrixXd chi_n;

  /// CSV with header xi,zeta,chi_l,chi_n and one row per grid point.
  static TabulatedModel from_csv(const std::string& path);
  Susceptibility at(double x, double z) const;
};

using SusceptibilityModel = std::variant<GenericFwmModel, TabulatedModel, UniformModel>;

struct Medium {
  SusceptibilityModel model = GenericFwmModel{};
  ControlBeam beam{};

  /// Throws NumericalIntegrityError on a non-finite value, naming (xi, zeta).
  Susceptibility at(double xi, double zeta) const;
};

struct FieldSlice {
  QuadratureGrid grid;
  RVector chi_l;
  RVector chi_n;
};

/// chi_l, chi_n sampled at the propagator's step midpoints on the basis grid.
struct SusceptibilityField {
  double zeta_start = 0.0;
  double zeta_end = 0.0;
  std::vector<FieldSlice> slices;

  int steps() const { return static_cast<int>(slices.size()); }
  double step() const { return (zeta_end - zeta_start) / steps(); }
};

FieldSlice evaluate_susceptibility(const Medium& medium, const QuadratureGrid& grid);

SusceptibilityField sample_midpoints(const Medium& medium, const ModeBasis& basis,
                                     double zeta_start, double zeta_end, int n_steps);

}  // namespace msmsq
