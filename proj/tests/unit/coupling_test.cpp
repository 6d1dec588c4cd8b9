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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "msmsq/errors.hpp"
#include "msmsq/medium.hpp"
#include "msmsq/modes.hpp"

namespace msmsq {
namespace {

FieldSlice constant_slice(const ModeBasis& basis, double zeta, double cl, double cn) {
  const QuadratureGrid g = basis.grid(zeta);
  return {g, RVector::Constant(g.xi.size(), cl), RVector::Constant(g.xi.size(), cn)};
}

TEST(CouplingTest, ConstantLinearTermIsDiagonal) {
  const ModeBasis basis(20);
  for (double zeta : {0.0, 0.06, 0.5}) {
    const CouplingMatrices cm = assemble_coupling(constant_slice(basis, zeta, 1.7, 0.0), basis);
    EXPECT_LT(max_abs(cm.c - 1.7 * CMatrix::Identity(20, 20)), 1e-12);
    EXPECT_EQ(max_abs(cm.d), 0.0);
  }
}

TEST(CouplingTest, ConstantNonlinearTermMatchesGaussianIntegral) {
  // d_00 = g int conj(u_0)^2 = g (1 - i s zeta)^{-1/2}; odd pairs vanish.
  const ModeBasis basis(10);
  const double g = 0.9;
  for (double zeta : {0.0, 0.1266, 1.0}) {
    const CouplingMatrices cm = assemble_coupling(constant_slice(basis, zeta, 0.0, g), basis);
    const cplx expected = g / std::sqrt(cplx(1.0, -kDiffractionSign * zeta));
    EXPECT_LT(std::abs(cm.d(0, 0) - expected), 1e-13) << zeta;
    EXPECT_LT(std::abs(cm.d(0, 1)), 1e-14);
    EXPECT_LT(std::abs(cm.d(2, 5)), 1e-14);
    EXPECT_LT(max_abs(cm.d - cm.d.transpose()), 1e-15);
  }
}

TEST(CouplingTest, QuadraticProfileGivesOscillatorMatrix) {
  // <u_j| 2 xi^2 |u_l> at the waist: 2j+1 on the diagonal and
  // sqrt((j+1)(j+2)) two off it. Away from the waist the diagonal scales
  // with the beam area 1 + zeta^2.
  const int n = 12;
  const ModeBasis basis(n);
  for (double zeta : {0.0, 0.3}) {
    const QuadratureGrid g = basis.grid(zeta);
    FieldSlice slice{g, RVector(g.xi.size()), RVector::Zero(g.xi.size())};
    for (Eigen::Index k = 0; k < g.xi.size(); ++k) slice.chi_l[k] = 2.0 * g.xi[k] * g.xi[k];
    const CouplingMatrices cm = assemble_coupling(slice, basis);
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR(cm.c(j, j).real(), (2 * j + 1) * (1.0 + zeta * zeta), 1e-11) << j;
      EXPECT_NEAR(cm.c(j, j).imag(), 0.0, 1e-15);
      if (j + 1 < n) {
        EXPECT_LT(std::abs(cm.c(j, j + 1)), 1e-12);
      }
      if (zeta == 0.0 && j + 2 < n) {
        EXPECT_NEAR(std::abs(cm.c(j, j + 2)), std::sqrt((j + 1.0) * (j + 2.0)), 1e-11);
      }
    }
  }
}

TEST(CouplingTest, PropagationMatrixPreservesSymplecticForm) {
  Medium medium;
  medium.model = GenericFwmModel{3.0, 25.0};
  const ModeBasis basis(8);
  const CouplingMatrices cm =
      assemble_coupling(evaluate_susceptibility(medium, basis.grid(0.04)), basis);
  EXPECT_LT(max_abs(cm.c - cm.c.adjoint()), 1e-15);
  EXPECT_LT(max_abs(cm.d - cm.d.transpose()), 1e-15);
  const PropagationMatrix pm = build_m(cm);
  ASSERT_EQ(pm.modes(), 8);
  EXPECT_EQ(pm.m.topLeftCorner(8, 8), cm.c);
  EXPECT_EQ(pm.m.topRightCorner(8, 8), cm.d);
  EXPECT_EQ(pm.m.bottomLeftCorner(8, 8), CMatrix(-cm.d.conjugate()));
  EXPECT_EQ(pm.m.bottomRightCorner(8, 8), CMatrix(-cm.c.conjugate()));
  // J M = M^H J with J = diag(I, -I) makes exp(i M h) J-unitary.
  Eigen::VectorXcd jd(16);
  jd << Eigen::VectorXcd::Ones(8), -Eigen::VectorXcd::Ones(8);
  const CMatrix j = jd.asDiagonal();
  EXPECT_LT(max_abs(j * pm.m - pm.m.adjoint() * j), 1e-14);
}

TEST(CouplingTest, IndependentOfQuadratureResolution) {
  Medium medium;
  medium.model = GenericFwmModel{3.0, 25.0};
  const ModeBasis coarse(20, 1.0, 80);
  const ModeBasis fine(20, 1.0, 160);
  const auto a = assemble_coupling(evaluate_susceptibility(medium, coarse.grid(0.09)), coarse);
  const auto b = assemble_coupling(evaluate_susceptibility(medium, fine.grid(0.09)), fine);
  EXPECT_LT(max_abs(a.c - b.c), 1e-8);
  EXPECT_LT(max_abs(a.d - b.d), 1e-8);
}

TEST(CouplingTest, RejectsMismatchedAndNonFiniteSlices) {
  const ModeBasis basis(6);
  const ModeBasis other(6, 1.0, 30);
  EXPECT_THROW(assemble_coupling(constant_slice(other, 0.0, 1.0, 1.0), basis), ConfigError);
  FieldSlice bad = constant_slice(basis, 0.0, 1.0, 1.0);
  bad.chi_n[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(assemble_coupling(bad, basis), NumericalIntegrityError);
}

}  // namespace
}  // namespace msmsq
