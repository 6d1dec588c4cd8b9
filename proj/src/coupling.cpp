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

#include "msmsq/coupling.hpp"

#include <algorithm>
#include <sstream>

#include "msmsq/errors.hpp"

namespace msmsq {

CouplingMatrices assemble_coupling(const FieldSlice& slice, const ModeBasis& basis,
                                   double tolerance) {
  if (slice.grid.xi.size() != basis.quadrature_nodes()) {
    throw ConfigError("susceptibility slice is not sampled on the basis grid");
  }
  const CMatrix u = basis.grid_values(slice.grid);
  const CMatrix ubar = u.conjugate();
  const RVector wl = slice.grid.weights.cwiseProduct(slice.chi_l);
  const RVector wn = slice.grid.weights.cwiseProduct(slice.chi_n);

  CouplingMatrices cm;
  cm.zeta = slice.grid.zeta;
  cm.c = ubar * wl.asDiagonal() * u.transpose();
  cm.d = ubar * wn.asDiagonal() * ubar.transpose();

  if (!cm.c.allFinite() || !cm.d.allFinite()) {
    std::ostringstream msg;
    msg << "coupling matrices at zeta=" << cm.zeta << " contain non-finite entries";
    throw NumericalIntegrityError(msg.str());
  }
  const double scale = std::max({1.0, max_abs(cm.c), max_abs(cm.d)});
  const double herm = max_abs(cm.c - cm.c.adjoint());
  const double sym = max_abs(cm.d - cm.d.transpose());
  if (herm > tolerance * scale || sym > tolerance * scale) {
    std::ostringstream msg;
    msg << "coupling matrices at zeta=" << cm.zeta << " lost symmetry: |C-C^H|=" << herm
        << ", |D-D^T|=" << sym;
    throw NumericalIntegrityError(msg.str());
  }
  cm.c = 0.5 * (cm.c + cm.c.adjoint()).eval();
  cm.d = 0.5 * (cm.d + cm.d.transpose()).eval();
  return cm;
}

PropagationMatrix build_m(const CouplingMatrices& cm) {
  const Eigen::Index n = cm.c.rows();
  PropagationMatrix pm;
  pm.m.resize(2 * n, 2 * n);
  pm.m.topLeftCorner(n, n) = cm.c;
  pm.m.topRightCorner(n, n) = cm.d;
  pm.m.bottomLeftCorner(n, n) = -cm.d.conjugate();
  pm.m.bottomRightCorner(n, n) = -cm.c.conjugate();
  return pm;
}

}  // namespace msmsq
