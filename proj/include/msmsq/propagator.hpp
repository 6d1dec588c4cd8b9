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

#include "msmsq/coupling.hpp"
#include "msmsq/medium.hpp"
#include "msmsq/modes.hpp"
#include "msmsq/types.hpp"

namespace msmsq {

/// Bogoliubov map (a, a^dag)_out = T (a, a^dag)_in with T = [[U, V], [V^*, U^*]].
struct TransferMatrix {
  CMatrix t;
  int steps = 0;
  double defect = 0.0;  // largest symplectic defect seen so far

  static TransferMatrix identity(int n_modes);
  int modes() const { return static_cast<int>(t.rows() / 2); }
  CMatrix u() const { return t.topLeftCorner(modes(), modes()); }
  CMatrix v() const { return t.topRightCorner(modes(), modes()); }
};

/// max of |UU^H - VV^H - I|, |UV^T - (UV^T)^T| and the deviation of the
/// lower blocks from the conjugates of the upper ones.
double symplectic_defect(const CMatrix& t);

enum class Ordering {
  kOrdered,    // product of midpoint exponentials (second-order Magnus)
  kUnordered,  // single exponential of the summed generator
};

struct PropagateOptions {
  Ordering ordering = Ordering::kOrdered;
  double defect_limit = 1e-6;
};

/// T <- exp(i M dzeta) T.
TransferMatrix step(const TransferMatrix& t, const PropagationMatrix& m_mid, double dzeta);

/// Throws NumericalIntegrityError when the final defect exceeds the limit.
TransferMatrix propagate(const SusceptibilityField& field, const ModeBasis& basis,
                         const PropagateOptions& options = {});

TransferMatrix propagate(const Medium& medium, const ModeBasis& basis, double zeta_end,
                         int n_steps, const PropagateOptions& options = {});

struct ConvergenceReport {
  double diff_coarse = 0.0;  // max |T_n - T_2n|
  double diff_fine = 0.0;    // max |T_2n - T_4n|
  double observed_order = 0.0;
  bool degraded = false;     // observed order well below 2
};

ConvergenceReport richardson_check(const Medium& medium, const ModeBasis& basis, double zeta_end,
                                   int n_steps);

}  // namespace msmsq
