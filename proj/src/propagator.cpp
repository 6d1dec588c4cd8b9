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

#include "msmsq/propagator.hpp"

#include <cmath>
#include <algorithm>
#include <sstream>

#include "msmsq/errors.hpp"
#include "msmsq/expm.hpp"

namespace msmsq {

TransferMatrix TransferMatrix::identity(int n_modes) {
  return {CMatrix::Identity(2 * n_modes, 2 * n_modes), 0, 0.0};
}

double symplectic_defect(const CMatrix& t) {
  const Eigen::Index n = t.rows() / 2;
  const CMatrix u = t.topLeftCorner(n, n);
  const CMatrix v = t.topRightCorner(n, n);
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix uvt = u * v.transpose();
  const double comm = max_abs(u * u.adjoint() - v * v.adjoint() - id);
  const double sym = max_abs(uvt - uvt.transpose());
  const double conj = std::max(max_abs(t.bottomLeftCorner(n, n) - v.conjugate()),
                               max_abs(t.bottomRightCorner(n, n) - u.conjugate()));
  return std::max({comm, sym, conj});
}

TransferMatrix step(const TransferMatrix& t, const PropagationMatrix& m_mid, double dzeta) {
  if (!(dzeta > 0.0)) throw ConfigError("step size must be positive");
  TransferMatrix out;
  out.t = expm((kI * dzeta) * m_mid.m) * t.t;
  out.steps = t.steps + 1;
  out.defect = std::max(t.defect, symplectic_defect(out.t));
  return out;
}

namespace {

void check_defect(const TransferMatrix& t, double limit) {
  if (t.defect > limit) {
    std::ostringstream msg;
    msg << "symplectic defect " << t.defect << " exceeds " << limit << " after " << t.steps
        << " steps; increase the step count";
    throw NumericalIntegrityError(msg.str());
  }
}

}  // namespace

TransferMatrix propagate(const SusceptibilityField& field, const ModeBasis& basis,
                         const PropagateOptions& options) {
  if (field.steps() < 1) throw ConfigError("susceptibility field has no slices");
  const double h = field.step();
  TransferMatrix t = TransferMatrix::identity(basis.size());
  if (options.ordering == Ordering::kOrdered) {
    for (const FieldSlice& slice : field.slices) {
      t = step(t, build_m(assemble_coupling(slice, basis)), h);
    }
  } else {
    PropagationMatrix sum{CMatrix::Zero(2 * basis.size(), 2 * basis.size())};
    for (const FieldSlice& slice : field.slices) sum.m += build_m(assemble_coupling(slice, basis)).m;
    t = step(t, sum, h);
    t.steps = field.steps();
  }
  check_defect(t, options.defect_limit);
  return t;
}

TransferMatrix propagate(const Medium& medium, const ModeBasis& basis, double zeta_end,
                         int n_steps, const PropagateOptions& options) {
  return propagate(sample_midpoints(medium, basis, 0.0, zeta_end, n_steps), basis, options);
}

ConvergenceReport richardson_check(const Medium& medium, const ModeBasis& basis, double zeta_end,
                                   int n_steps) {
  const TransferMatrix t1 = propagate(medium, basis, zeta_end, n_steps);
  const TransferMatrix t2 = propagate(medium, basis, zeta_end, 2 * n_steps);
  const TransferMatrix t4 = propagate(medium, basis, zeta_end, 4 * n_steps);
  ConvergenceReport r;
  r.diff_coarse = max_abs(t1.t - t2.t);
  r.diff_fine = max_abs(t2.t - t4.t);
  // Below ~1e-13 the differences are rounding noise and carry no order information.
  if (r.diff_fine > 1e-13 && r.diff_coarse > 1e-13) {
    r.observed_order = std::log2(r.diff_coarse / r.diff_fine);
    r.degraded = r.observed_order < 1.5;
  } else {
    r.observed_order = INFINITY;
  }
  return r;
}

}  // namespace msmsq
