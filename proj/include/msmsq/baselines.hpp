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
#include <vector>

#include "msmsq/medium.hpp"
#include "msmsq/types.hpp"

namespace msmsq {

// ---- classical mean-field propagation on a uniform grid ----

enum class ClassicalVariant {
  kLinearOnly,  // chi_l only: the waveguide part of the dynamics
  kFull,        // chi_l a + chi_n a^*
};

struct SplitStepOptions {
  int grid_points = 2048;
  double half_window = 8.0;   // grid spans [-half_window, half_window)
  double boundary_tolerance = 1e-8;
  double spectral_tolerance = 1e-6;
  ClassicalVariant variant = ClassicalVariant::kFull;
};

struct ClassicalField {
  RVector xi;
  CVector field;
  double dxi = 0.0;
  double zeta = 0.0;

  double power() const;
  /// int 2 xi^2 |a|^2 / int |a|^2.
  double width_mean() const;
};

/// Strang splitting: spectral free diffraction half steps around an exact
/// local 2x2 step of d a = i (chi_l a + chi_n a^*) at the step midpoint.
/// Throws NumericalIntegrityError when the field reaches the window edge or
/// the spectrum reaches the Nyquist band.
ClassicalField classical_split_step(const std::function<cplx(double)>& input, const Medium& medium,
                                    double zeta_end, int n_steps,
                                    const SplitStepOptions& options = {});

// ---- truncated Fock-space brute force ----

/// Pure state D(alpha) S(Z) |0> of one or two modes, built by exponentiating
/// the linear and quadratic generators in a truncated Fock space, with
/// S(Z) = exp(1/2 sum (Z_jk^* a_j a_k - Z_jk a_j^dag a_k^dag)). The mean is
/// alpha; the fluctuations are those of S(Z)|0>.
class FockOracle {
 public:
  /// Levels above `cutoff` must carry less than `leakage_limit` probability.
  FockOracle(const CVector& alpha, const CMatrix& z, int cutoff, int padding = 8,
             double leakage_limit = 1e-8);

  static FockOracle single_mode(cplx alpha, double r, double phi, int cutoff, int padding = 8);

  int modes() const { return modes_; }
  int dimension() const { return dim_; }
  double leakage() const { return leakage_; }
  const CVector& state() const { return psi_; }

  cplx mean(int j) const;
  cplx normal(int p, int q) const;     // <a_p^dag a_q>
  cplx anomalous(int p, int q) const;  // <a_p a_q>
  cplx fourth_moment(int p, int q, int r, int s) const;  // <a_p^dag a_q a_r^dag a_s>
  /// <Q> and <Q^2> - <Q>^2 for Q = sum F_jl a_j^dag a_l.
  std::pair<double, double> quadratic_moments(const CMatrix& f) const;

 private:
  CVector apply_a(int j, const CVector& v) const;
  CVector apply_adag(int j, const CVector& v) const;

  int modes_;
  int dim_;  // levels per mode
  double leakage_ = 0.0;
  CVector psi_;
};

/// Bogoliubov map of S(Z): a -> cosh-like U a + V a^dag, generated by
/// [[0, -Z], [-Z^*, 0]].
CMatrix squeezer_transfer(const CMatrix& z);

/// r such that the squeezed quadrature variance is `db` below vacuum.
double squeeze_parameter_for_db(double db);

struct SingleModeWidth {
  double alpha = 0.0;
  double coherent = 0.0;  // relative width uncertainty (area)
  double squeezed = 0.0;
  double photons_coherent = 0.0;
  double photons_squeezed = 0.0;
};

/// Relative width uncertainty of a beam occupying mode 0 only, for coherent
/// and amplitude-squeezed light, from the Fock oracle. `f` is the width
/// matrix of the basis at the reference plane.
std::vector<SingleModeWidth> single_mode_width_baselines(std::span<const double> alphas,
                                                        double squeeze_db, const CMatrix& f);

/// Pointwise local intensity noise of a mode-0 state whose mode value at the
/// point is u0: normal-ordered variance plus <I>, as in the multimode case.
struct SingleModeLocalNoise {
  double intensity = 0.0;
  double variance = 0.0;
  double relative_variance = 0.0;
};

SingleModeLocalNoise single_mode_local_noise(const FockOracle& oracle, double u0_abs2);

/// Fock cutoff large enough for D(alpha) S(r)|0> to leak below 1e-8.
int suggested_cutoff(double alpha_abs, double r);

}  // namespace msmsq
