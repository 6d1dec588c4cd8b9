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

#include "msmsq/medium.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "msmsq/errors.hpp"
#include "msmsq/modes.hpp"

namespace msmsq {
namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

TEST(ControlBeamTest, PeakAtWaistAndRayleighPlane) {
  ControlBeam beam;
  EXPECT_NEAR(std::abs(control_value(beam, 0.0, 0.0)), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(control_value(beam, beam.waist, 0.0)), 3.0 * std::exp(-0.5), 1e-15);
  const cplx at_zr = control_value(beam, 0.0, beam.zeta_rayleigh);
  EXPECT_NEAR(std::abs(at_zr), 3.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::arg(at_zr), std::atan(1.0), 1e-14);
  EXPECT_NEAR(beam.width_at(beam.zeta_rayleigh), beam.waist * std::sqrt(2.0), 1e-15);
}

TEST(ControlBeamTest, CurvatureConventionsOnlyChangePhase) {
  ControlBeam a;
  ControlBeam b;
  b.curvature = CurvatureConvention::kInverseSquare;
  for (double xi : {0.0, 0.4, 1.1}) {
    EXPECT_NEAR(std::abs(control_value(a, xi, 0.1)), std::abs(control_value(b, xi, 0.1)), 1e-15);
  }
  EXPECT_NE(control_value(a, 1.0, 0.1), control_value(b, 1.0, 0.1));
  EXPECT_EQ(control_value(a, 1.0, 0.0), control_value(b, 1.0, 0.0));
}

TEST(MediumTest, GenericModelScalesWithGainsAndDensity) {
  Medium m;
  GenericFwmModel g;
  g.linear_gain = 2.0;
  g.nonlinear_gain = 7.0;
  m.model = g;
  const double e = std::abs(control_value(m.beam, 0.3, 0.05)) / 3.0;
  const Susceptibility s = m.at(0.3, 0.05);
  EXPECT_NEAR(s.chi_l, 2.0 * e * e, 1e-15);
  EXPECT_NEAR(s.chi_n, 7.0 * e, 1e-15);
  g.nonlinear_gain = 14.0;
  g.density_scale = 0.5;
  m.model = g;
  EXPECT_NEAR(m.at(0.3, 0.05).chi_n, s.chi_n, 1e-15);
  EXPECT_NEAR(m.at(0.3, 0.05).chi_l, 0.5 * s.chi_l, 1e-15);
  g.omega_c2 = 5.0;
  m.model = g;
  EXPECT_NEAR(m.at(0.3, 0.05).chi_n, 0.5 * s.chi_n, 1e-15);
}

TEST(MediumTest, ZeroControlGivesZeroSusceptibility) {
  Medium m;
  m.model = GenericFwmModel{3.0, 20.0};
  m.beam.peak_rabi = 0.0;
  const Susceptibility s = m.at(0.0, 0.0);
  EXPECT_EQ(s.chi_l, 0.0);
  EXPECT_EQ(s.chi_n, 0.0);
}

TEST(MediumTest, SymmetricInXi) {
  Medium m;
  m.model = GenericFwmModel{3.0, 20.0};
  for (double xi : {0.1, 0.7, 2.0}) {
    EXPECT_DOUBLE_EQ(m.at(xi, 0.07).chi_l, m.at(-xi, 0.07).chi_l);
    EXPECT_DOUBLE_EQ(m.at(xi, 0.07).chi_n, m.at(-xi, 0.07).chi_n);
  }
}

TEST(MediumTest, UniformModelIsConstant) {
  Medium m;
  m.model = UniformModel{1.5, -0.25};
  EXPECT_EQ(m.at(5.0, 1.0).chi_l, 1.5);
  EXPECT_EQ(m.at(-3.0, 0.0).chi_n, -0.25);
}

TEST(MediumTest, NonFiniteValueIsAnIntegrityError) {
  Medium m;
  m.model = UniformModel{std::nan(""), 0.0};
  EXPECT_THROW(m.at(0.0, 0.0), NumericalIntegrityError);
}

TEST(TabulatedModelTest, BilinearInterpolationAndClamping) {
  const std::string path = write_temp("msmsq_table_ok.csv",
                                      "xi,zeta,chi_l,chi_n\n"
                                      "-1,0,0,0\n1,0,2,4\n-1,1,10,0\n1,1,12,4\n");
  const TabulatedModel t = TabulatedModel::from_csv(path);
  ASSERT_EQ(t.xi.size(), 2);
  ASSERT_EQ(t.zeta.size(), 2);
  // chi_l = (xi + 1) + 10 zeta, chi_n = 2 (xi + 1): bilinear is exact.
  for (double xi : {-1.0, -0.3, 0.5, 1.0}) {
    for (double z : {0.0, 0.25, 0.9}) {
      EXPECT_NEAR(t.at(xi, z).chi_l, xi + 1.0 + 10.0 * z, 1e-14);
      EXPECT_NEAR(t.at(xi, z).chi_n, 2.0 * (xi + 1.0), 1e-14);
    }
  }
  EXPECT_EQ(t.at(1.5, 0.5).chi_l, 0.0);
  EXPECT_NEAR(t.at(0.0, 7.0).chi_l, 11.0, 1e-14);
  std::remove(path.c_str());
}

TEST(TabulatedModelTest, MalformedFilesReportTheLine) {
  const auto expect_message = [](const std::string& body, const std::string& needle) {
    const std::string path = write_temp("msmsq_table_bad.csv", body);
    try {
      TabulatedModel::from_csv(path);
      ADD_FAILURE() << "expected ConfigError for " << needle;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
    std::remove(path.c_str());
  };
  expect_message("x,z,a,b\n", ":1:");
  expect_message("xi,zeta,chi_l,chi_n\n0,0,1,1\n1,0,oops,1\n", ":3:");
  expect_message("xi,zeta,chi_l,chi_n\n0,0,1,1\n1,0,nan,1\n", ":3:");
  expect_message("xi,zeta,chi_l,chi_n\n0,0,1,1\n1,0,1,1\n0,1,1,1\n", "complete");
  EXPECT_THROW(TabulatedModel::from_csv("/nonexistent/table.csv"), ConfigError);
}

TEST(SamplingTest, MidpointsCoverTheInterval) {
  Medium m;
  m.model = GenericFwmModel{3.0, 10.0};
  const ModeBasis basis(4);
  const SusceptibilityField f = sample_midpoints(m, basis, 0.0, 0.1, 8);
  ASSERT_EQ(f.steps(), 8);
  EXPECT_NEAR(f.step(), 0.0125, 1e-16);
  EXPECT_NEAR(f.slices.front().grid.zeta, 0.00625, 1e-16);
  EXPECT_NEAR(f.slices.back().grid.zeta, 0.09375, 1e-16);
  EXPECT_THROW(sample_midpoints(m, basis, 0.0, 0.1, 0), ConfigError);
  EXPECT_THROW(sample_midpoints(m, basis, 0.1, 0.1, 4), ConfigError);
}

}  // namespace
}  // namespace msmsq
