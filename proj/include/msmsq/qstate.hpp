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

#include "msmsq/propagator.hpp"
#include "msmsq/types.hpp"

namespace msmsq {

/// Gaussian state in mode space: mean mu_j = <a_j>, normal fluctuations
/// n_pq = <da_p^dag da_q> and anomalous fluctuations m_pq = <da_p da_q>.
struct GaussianState {
  CVector mean;
  CMatrix n;
  CMatrix m;

  int modes() const { return static_cast<int>(mean.size()); }

  /// <a_j^dag a_l> including the mean.
  CMatrix normal_moments() const;
  /// <a_j a_l> including the mean.
  CMatrix anomalous_moments() const;
  double photon_number() const;

  /// <a_p^dag a_q a_r^dag a_s> by Wick expansion.
  cplx fourth_moment(int p, int q, int r, int s) const;
};

GaussianState vacuum_state(int n_modes);
GaussianState coherent_input(cplx alpha0, int n_modes);

/// Displaced squeezed state D(alpha) S(z) |0> in mode j (others vacuum) with
/// z = r e^{i phi}: n_jj = sinh^2 r, m_jj = -e^{i phi} sinh r cosh r.
GaussianState squeezed_coherent(int n_modes, int mode, cplx alpha, double r, double phi);

/// Apply a -> U a + V a^dag. Throws NumericalIntegrityError when T is not
/// symplectic to `defect_limit`.
GaussianState evolve(const GaussianState& state, const TransferMatrix& t,
                     double defect_limit = 1e-6);

/// Smallest eigenvalue of [[I + n^T, m], [m^*, n]]; negative values beyond
/// rounding violate the uncertainty relation.
double uncertainty_margin(const GaussianState& state);

/// Mean and variance of Q = sum_jl F_jl a_j^dag a_l for Hermitian F.
struct QuadraticMoments {
  double mean = 0.0;
  double variance = 0.0;
  double normal_ordered_variance = 0.0;  // <:Q^2:> - <Q>^2
};

QuadraticMoments quadratic_form_moments(const GaussianState& state, const CMatrix& f);

}  // namespace msmsq
