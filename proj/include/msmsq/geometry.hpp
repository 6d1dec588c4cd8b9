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

#include <complex>

namespace msmsq {

/// Lab-frame inputs. Angular frequencies are stored in units of the decay
/// rate Gamma_32; lengths in metres.
struct PhysicalParams {
  double probe_wavelength = 794.98e-9;  // Rb D1, configuration default
  double probe_waist = 1.0e-4;          // w_p
  double medium_length = 1.0e-2;        // L
  double atomic_density = 3.0e17;       // n, m^-3
  double gamma32 = 2.0 * 3.14159265358979323846 * 6.0e6;  // rad/s
  double omega_c1 = 3.0;                // peak Omega_c1, Gamma_32 units
  double omega_c2 = 10.0;
  double delta_c1 = 41.4;
  double delta_c2 = -50.0;
  double control_waist_ratio = 0.8;     // w_c / w_p
  std::complex<double> alpha0{0.2, 0.0};

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Dimensionless propagation frame: xi = x / S_perp, zeta = z / S_z with
/// S_z = k_p S_perp^2. With the e^{-xi^2/2} amplitude convention the probe
/// Rayleigh length is k_p w_p^2, so zeta_R = 1 when S_perp = w_p.
struct ScaledGeometry {
  double s_perp = 0.0;       // m
  double s_z = 0.0;          // m
  double zeta_end = 0.0;
  double k_probe = 0.0;      // 1/m
  double rayleigh_probe = 0.0;   // m
  double rayleigh_control = 0.0; // m

  double zeta_rayleigh_probe() const { return rayleigh_probe / s_z; }
  double zeta_rayleigh_control() const { return rayleigh_control / s_z; }
  /// Control waist in units of S_perp.
  double control_waist() const;
};

ScaledGeometry make_scaled_geometry(const PhysicalParams& p);

double to_physical_width(double w_scaled, const ScaledGeometry& g);
double to_scaled_width(double w_physical, const ScaledGeometry& g);

}  // namespace msmsq
