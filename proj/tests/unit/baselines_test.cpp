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

#include "msmsq/baselines.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "msmsq/errors.hpp"
#include "msmsq/medium.hpp"
#include "msmsq/modes.hpp"
#include "msmsq/observables.hpp"

namespace msmsq {
namespace {

cplx gaussian(double xi) { return std::pow(std::numbers::pi, -0.25) * std::exp(-xi * xi / 2.0); }

TEST(SplitStepTest, FreeDiffractionMatchesClosedForm) {
  Medium m;
  m.model = UniformModel{0.0, 0.0};
  const ModeBasis basis(1);
  SplitStepOptions opts;
  opts.half_window = 12.0;
  const ClassicalField f = classical_split_step(gaussian, m, 1.0, 50, opts);
  double err = 0.0;
  for (Eigen::Index k = 0; k < f.xi.size(); ++k) {
    err = std::max(err, std::abs(f.field[k] - basis.mode_value(0, f.xi[k], 1.0)));
  }
  EXPECT_LT(err, 1e-10);
  EXPECT_NEAR(f.power(), 1.0, 1e-12);
  EXPECT_NEAR(f.width_mean(), 2.0, 1e-10);
}

TEST(SplitStepTest, UniformIndexOnlyAddsPhase) {
  Medium m;
  m.model = UniformModel{2.0, 0.0};
  Medium free;
  free.model = UniformModel{0.0, 0.0};
  const ClassicalField a = classical_split_step(gaussian, m, 0.3, 20);
  const ClassicalField b = classical_split_step(gaussian, free, 0.3, 20);
  EXPECT_LT(max_abs(a.field - std::exp(kI * 0.6) * b.field), 1e-12);
}

TEST(SplitStepTest, ParametricTermAmplifiesOnlyInFullVariant) {
  Medium m;
  m.model = UniformModel{0.0, 1.0};
  SplitStepOptions full;
  full.variant = ClassicalVariant::kFull;
  EXPECT_GT(classical_split_step(gaussian, m, 0.2, 40, full).power(), 1.0);
  SplitStepOptions linear;
  linear.variant = ClassicalVariant::kLinearOnly;
  EXPECT_NEAR(classical_split_step(gaussian, m, 0.2, 40, linear).power(), 1.0, 1e-12);
}

TEST(SplitStepTest, DetectsEdgeAndAliasing) {
  Medium m;
  m.model = UniformModel{0.0, 0.0};
  const auto wide = [](double xi) { return cplx(std::exp(-xi * xi / 32.0)); };
  EXPECT_THROW(classical_split_step(wide, m, 0.1, 4), NumericalIntegrityError);
  const auto narrow = [](double xi) { return cplx(std::exp(-xi * xi / (2 * 0.003 * 0.003))); };
  EXPECT_THROW(classical_split_step(narrow, m, 0.1, 4), NumericalIntegrityError);
  EXPECT_THROW(classical_split_step(gaussian, m, 0.1, 0), ConfigError);
  SplitStepOptions odd;
  odd.grid_points = 513;
  EXPECT_THROW(classical_split_step(gaussian, m, 0.1, 4, odd), ConfigError);
}

TEST(FockOracleTest, CoherentStateIsPoissonian) {
  for (double a : {0.5, 2.0}) {
    const FockOracle f = FockOracle::single_mode(a, 0.0, 0.0, suggested_cutoff(a, 0.0));
    EXPECT_NEAR(f.mean(0).real(), a, 1e-10);
    EXPECT_NEAR(f.normal(0, 0).real(), a * a, 1e-10);
    CMatrix one = CMatrix::Ones(1, 1);
    const auto [mean, var] = f.quadratic_moments(one);
    EXPECT_NEAR(mean, a * a, 1e-10);
    EXPECT_NEAR(var, a * a, 1e-9);
    EXPECT_LT(f.leakage(), 1e-8);
  }
}

TEST(FockOracleTest, SqueezedMomentsFollowHyperbolicIdentities) {
  const double r = 0.5;
  const double phi = 0.7;
  const cplx alpha(0.4, -0.3);
  const FockOracle f = FockOracle::single_mode(alpha, r, phi, suggested_cutoff(std::abs(alpha), r));
  const double s = std::sinh(r);
  const double c = std::cosh(r);
  EXPECT_LT(std::abs(f.mean(0) - alpha), 1e-10);
  EXPECT_NEAR(f.normal(0, 0).real(), std::norm(alpha) + s * s, 1e-10);
  EXPECT_LT(std::abs(f.anomalous(0, 0) - (alpha * alpha - std::polar(1.0, phi) * s * c)), 1e-10);
}

TEST(FockOracleTest, TwoModeSqueezedVacuumCorrelations) {
  const double r = 0.3;
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 1) = z(1, 0) = r;
  const FockOracle f(CVector::Zero(2), z, 14);
  const double s = std::sinh(r);
  EXPECT_NEAR(f.normal(0, 0).real(), s * s, 1e-9);
  EXPECT_NEAR(f.normal(1, 1).real(), s * s, 1e-9);
  EXPECT_NEAR(std::abs(f.anomalous(0, 1)), s * std::cosh(r), 1e-9);
  EXPECT_NEAR(std::abs(f.anomalous(0, 0)), 0.0, 1e-12);
  // Photon-number difference is exactly conserved.
  CMatrix diff = CMatrix::Zero(2, 2);
  diff(0, 0) = 1.0;
  diff(1, 1) = -1.0;
  EXPECT_NEAR(f.quadratic_moments(diff).second, 0.0, 1e-9);
}

TEST(FockOracleTest, RejectsInsufficientCutoffAndBadInput) {
  EXPECT_THROW(FockOracle::single_mode(3.0, 0.0, 0.0, 4), NumericalIntegrityError);
  CMatrix asym = CMatrix::Zero(2, 2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(FockOracle(CVector::Zero(2), asym, 6), ConfigError);
  EXPECT_THROW(FockOracle(CVector::Zero(3), CMatrix::Zero(3, 3), 4), ConfigError);
}

TEST(SqueezerTest, TransferAndDecibelConversion) {
  CMatrix z(1, 1);
  z(0, 0) = 0.9;
  const CMatrix t = squeezer_transfer(z);
  EXPECT_NEAR(t(0, 0).real(), std::cosh(0.9), 1e-14);
  EXPECT_NEAR(t(0, 1).real(), -std::sinh(0.9), 1e-14);
  EXPECT_NEAR(squeeze_parameter_for_db(-13.7), 13.7 * std::log(10.0) / 20.0, 1e-15);
  EXPECT_NEAR(squeeze_parameter_for_db(-13.7), 1.5773, 1e-4);
  // Quadrature variance e^{-2r} in dB recovers the input.
  EXPECT_NEAR(10.0 * std::log10(std::exp(-2.0 * squeeze_parameter_for_db(-6.0))), -6.0, 1e-12);
}

TEST(SingleModeBaselineTest, CoherentRelativeWidthIsSqrtThreeOverAlpha) {
  const ModeBasis basis(20);
  const CMatrix f = WidthMeasure{}.matrix(basis, 0.0);
  const std::vector<double> alphas{0.5, 1.0, 2.0};
  const auto rows = single_mode_width_baselines(alphas, -13.7, f);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.coherent, std::sqrt(3.0) / row.alpha, 1e-8) << row.alpha;
    EXPECT_NEAR(row.photons_coherent, row.alpha * row.alpha, 1e-8);
  }
  // Strong squeezing adds number noise of its own, so the squeezed beam only
  // wins once the coherent amplitude is comparable to it.
  EXPECT_LT(rows[1].squeezed, rows[1].coherent);
  // Amplitude-squeezed: Var n = a^2 e^{-2r} + 2 s^2 c^2, <n> = a^2 + s^2.
  const double r = squeeze_parameter_for_db(-13.7);
  const double s2 = std::sinh(r) * std::sinh(r);
  const double n = 1.0 + s2;
  const double var_n = std::exp(-2 * r) + 2 * s2 * (1 + s2);
  const double f00 = f(0, 0).real();
  double off = 0.0;
  for (int l = 1; l < 20; ++l) off += std::norm(f(0, l));
  const double expected = std::sqrt(f00 * f00 * var_n + off * n) / (f00 * n);
  EXPECT_NEAR(rows[1].squeezed, expected, 1e-8);
  EXPECT_THROW(single_mode_width_baselines(std::vector<double>{0.0}, -3.0, f), ConfigError);
}

TEST(SingleModeBaselineTest, LocalNoiseOfCoherentStateIsShotNoise) {
  const FockOracle coh = FockOracle::single_mode(1.5, 0.0, 0.0, suggested_cutoff(1.5, 0.0));
  const SingleModeLocalNoise n = single_mode_local_noise(coh, 0.4);
  EXPECT_NEAR(n.intensity, 2.25 * 0.4, 1e-9);
  EXPECT_NEAR(n.variance, n.intensity, 1e-9);
  EXPECT_NEAR(n.relative_variance, 1.0 / n.intensity, 1e-8);
}

}  // namespace
}  // namespace msmsq
