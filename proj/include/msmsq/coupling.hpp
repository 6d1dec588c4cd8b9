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

#include "msmsq/medium.hpp"
#include "msmsq/modes.hpp"
#include "msmsq/types.hpp"

namespace msmsq {

/// c_pq = int u_p^* chi_l u_q,  d_pq = int u_p^* chi_n u_q^*  at one zeta.
/// For real chi, C is Hermitian and D symmetric.
struct CouplingMatrices {
  CMatrix c;
  CMatrix d;
  double zeta = 0.0;
};

/// 2N x 2N generator of d/dzeta (a, a^dag) = i M (a, a^dag):
///   M = [[C, D], [-D^*, -C^*]]
struct PropagationMatrix {
  CMatrix m;
  int modes() const { return static_cast<int>(m.rows() / 2); }
};

/// Quadrature of the slice against the basis. Throws NumericalIntegrityError
/// when C is not Hermitian or D not symmetric to `tolerance` (relative to the
/// largest entry); otherwise the returned pair is exactly (anti)symmetrized.
CouplingMatrices assemble_coupling(const FieldSlice& slice, const ModeBasis& basis,
                                   double tolerance = 1e-12);

PropagationMatrix build_m(const CouplingMatrices& cm);

}  // namespace msmsq
