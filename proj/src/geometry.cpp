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

#include "msmsq/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "msmsq/errors.hpp"

namespace msmsq {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be a positive finite number (got " +
                      std::to_string(v) + ")");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
}

}  // namespace

void PhysicalParams::validate() const {
  require_positive(probe_wavelength, "probe_wavelength");
  require_positive(probe_waist, "probe_waist");
  require_positive(medium_length, "medium_length");
  require_positive(atomic_density, "atomic_density");
  require_positive(gamma32, "gamma32");
  require_positive(control_waist_ratio, "control_waist_ratio");
  if (!(omega_c1 >= 0.0) || !std::isfinite(omega_c1)) {
    throw ConfigError("omega_c1 must be non-negative and finite");
  }
  if (!(omega_c2 >= 0.0) || !std::isfinite(omega_c2)) {
    throw ConfigError("omega_c2 must be non-negative and finite");
  }
  require_finite(delta_c1, "delta_c1");
  require_finite(delta_c2, "delta_c2");
  require_finite(alpha0.real(), "alpha0");
  require_finite(alpha0.imag(), "alpha0");
}

double ScaledGeometry::control_waist() const {
  // z_C = k w_c^2 with k_c ~ k_p, hence w_c / S_perp = sqrt(z_C / S_z).
  return std::sqrt(rayleigh_control / s_z);
}

ScaledGeometry make_scaled_geometry(const PhysicalParams& p) {
  p.validate();
  ScaledGeometry g;
  g.k_probe = 2.0 * std::numbers::pi / p.probe_wavelength;
  g.s_perp = p.probe_waist;
  g.s_z = g.k_probe * g.s_perp * g.s_perp;
  g.zeta_end = p.medium_length / g.s_z;
  g.rayleigh_probe = g.k_probe * p.probe_waist * p.probe_waist;
  const double wc = p.control_waist_ratio * p.probe_waist;
  g.rayleigh_control = g.k_probe * wc * wc;
  return g;
}

double to_physical_width(double w_scaled, const ScaledGeometry& g) { return w_scaled * g.s_perp; }

double to_scaled_width(double w_physical, const ScaledGeometry& g) { return w_physical / g.s_perp; }

}  // namespace msmsq
