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

#include "msmsq/modes.hpp"
#include "msmsq/qstate.hpp"
#include "msmsq/types.hpp"

namespace msmsq {

/// F_jl = int f(xi) u_j^*(xi, zeta) u_l(xi, zeta) dxi. Default f = 2 xi^2.
struct WidthMeasure {
  std::function<double(double)> f = [](double xi) { return 2.0 * xi * xi; };

  CMatrix matrix(const ModeBasis& basis, double zeta) const;
};

/// <I(xi)> = sum_jl <a_j^dag a_l> u_j^* u_l. Throws NumericalIntegrityError
/// on negativity beyond rounding.
RVector intensity_profile(const GaussianState& state, const ModeBasis& basis, double zeta,
                          std::span<const double> xi);

/// <W> with the c-number photon number as denominator. Throws ConfigError
/// for an empty state.
double width_mean(const GaussianState& state, const CMatrix& f);

struct WidthUncertainty {
  double mean = 0.0;        // <W>
  double absolute = 0.0;    // sqrt(<dW^2>)
  double relative = 0.0;    // sqrt(<dW^2>) / <W>, uncertainty of the area
  double relative_length = 0.0;  // relative / 2, uncertainty of sqrt(W) to first order
};

WidthUncertainty width_uncertainty(const GaussianState& state, const CMatrix& f);

struct LocalOscillator {
  double center = 0.0;  // x0
  double waist = 1.0;   // w_l
};

struct LoProjection {
  CVector coefficients;       // <u_j | f> with f normalized to unit norm
  double truncation_loss = 0.0;  // 1 - sum |c_j|^2
};

/// Overlaps use a Gauss-Hermite rule centred on the LO so that narrow LOs
/// are resolved independently of the mode grid.
LoProjection project_lo(const LocalOscillator& lo, const ModeBasis& basis, double zeta);

enum class ThetaPolicy { kOptimize, kFixed };

struct SqueezingResult {
  double db = 0.0;
  double variance = 1.0;      // <dP^2>, vacuum = 1
  double theta = 0.0;
  double antisqueezing_db = 0.0;
  double truncation_loss = 0.0;
};

/// Variance of P = i(A e^{-i theta} - A^dag e^{i theta}) with A = sum_j c_j^* a_j,
/// relative to the vacuum level of a coherent or vacuum input.
SqueezingResult squeezing_db(const GaussianState& state, const LoProjection& lo,
                             ThetaPolicy policy = ThetaPolicy::kOptimize, double theta = 0.0);

SqueezingResult squeezing_db(const GaussianState& state, const ModeBasis& basis, double zeta,
                             const LocalOscillator& lo,
                             ThetaPolicy policy = ThetaPolicy::kOptimize, double theta = 0.0);

struct LoScanPoint {
  double center = 0.0;
  double waist = 0.0;
  SqueezingResult result;
};

std::vector<LoScanPoint> scan_lo_center(const GaussianState& state, const ModeBasis& basis,
                                        double zeta, double waist,
                                        std::span<const double> centers,
                                        ThetaPolicy policy = ThetaPolicy::kOptimize,
                                        double theta = 0.0);

std::vector<LoScanPoint> scan_lo_waist(const GaussianState& state, const ModeBasis& basis,
                                       double zeta, double center,
                                       std::span<const double> waists,
                                       ThetaPolicy policy = ThetaPolicy::kOptimize,
                                       double theta = 0.0);

struct LocalFluctuation {
  double xi = 0.0;
  double intensity = 0.0;  // <I>
  double variance = 0.0;   // <dI^2>
  double fano = 0.0;       // variance / intensity
  double relative_variance = 0.0;  // variance / intensity^2
};

/// Pointwise I(xi) = a^dag(xi) a(xi) in the truncated basis. The product of
/// two field operators at one point is singular, so the commutator term is
/// regularized to the shot-noise contribution <I(xi)>: the result is the
/// normal-ordered variance plus <I>.
LocalFluctuation local_intensity_fluctuation(const GaussianState& state, const ModeBasis& basis,
                                             double zeta, double xi);

/// Photon number in [xi - bin/2, xi + bin/2]; exact operator variance.
LocalFluctuation binned_intensity_fluctuation(const GaussianState& state,
                                              const ModeBasis& basis, double zeta, double xi,
                                              double bin = 0.05);

/// Matrix of int_{lo}^{hi} u_j^* u_l over a window.
CMatrix window_matrix(const ModeBasis& basis, double zeta, double lo, double hi);

}  // namespace msmsq
