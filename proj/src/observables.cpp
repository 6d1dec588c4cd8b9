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

#include "msmsq/observables.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "msmsq/errors.hpp"

namespace msmsq {

namespace {

constexpr double kNegativeFloor = 1e-10;

double checked_variance(double v, const char* what) {
  if (v < -kNegativeFloor) {
    std::ostringstream msg;
    msg << what << " variance is negative (" << v << ")";
    throw NumericalIntegrityError(msg.str());
  }
  return std::max(v, 0.0);
}

}  // namespace

CMatrix WidthMeasure::matrix(const ModeBasis& basis, double zeta) const {
  const QuadratureGrid g = basis.grid(zeta);
  const CMatrix u = basis.grid_values(g);
  RVector wf(g.xi.size());
  for (Eigen::Index k = 0; k < g.xi.size(); ++k) wf[k] = g.weights[k] * f(g.xi[k]);
  CMatrix out = u.conjugate() * wf.asDiagonal() * u.transpose();
  return 0.5 * (out + out.adjoint());
}

RVector intensity_profile(const GaussianState& state, const ModeBasis& basis, double zeta,
                          std::span<const double> xi) {
  const CMatrix u = basis.values(xi, zeta);
  const CMatrix g = state.normal_moments();
  const CMatrix gu = g * u;
  RVector out(u.cols());
  const double scale = std::max(1.0, state.photon_number());
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    // dot() conjugates its first argument: sum_jl u_j^* g_jl u_l.
    const cplx value = u.col(k).dot(gu.col(k));
    if (value.real() < -1e-12 * scale || std::abs(value.imag()) > 1e-9 * scale) {
      std::ostringstream msg;
      msg << "intensity at xi=" << xi[k] << " is not a non-negative real (" << value << ")";
      throw NumericalIntegrityError(msg.str());
    }
    out[k] = std::max(value.real(), 0.0);
  }
  return out;
}

double width_mean(const GaussianState& state, const CMatrix& f) {
  const double photons = state.photon_number();
  if (!(photons > 0.0)) throw ConfigError("width of an empty (vacuum) state is undefined");
  return f.cwiseProduct(state.normal_moments()).sum().real() / photons;
}

WidthUncertainty width_uncertainty(const GaussianState& state, const CMatrix& f) {
  const double photons = state.photon_number();
  if (!(photons > 0.0)) throw ConfigError("width of an empty (vacuum) state is undefined");
  const QuadraticMoments q = quadratic_form_moments(state, f);
  WidthUncertainty out;
  out.mean = q.mean / photons;
  out.absolute = std::sqrt(checked_variance(q.variance, "width")) / photons;
  out.relative = out.absolute / out.mean;
  out.relative_length = 0.5 * out.relative;
  return out;
}

LoProjection project_lo(const LocalOscillator& lo, const ModeBasis& basis, double zeta) {
  if (!(lo.waist > 0.0)) throw ConfigError("local oscillator waist must be positive");
  const GaussHermiteRule& rule = basis.rule();
  // f(xi) = exp(-(xi - x0)^2 / (2 w^2)); substitute xi = x0 + sqrt(2) w t.
  const double s = std::numbers::sqrt2 * lo.waist;
  RVector xi = lo.center + s * rule.nodes.array();
  RVector w = s * (rule.scaled_weights.array() * (-rule.nodes.array().square()).exp());
  const CMatrix u = basis.values(std::span<const double>(xi.data(), xi.size()), zeta);
  const double norm = std::sqrt(std::sqrt(std::numbers::pi) * lo.waist);
  LoProjection out;
  out.coefficients = u.conjugate() * w.cast<cplx>() / norm;
  const double kept = out.coefficients.squaredNorm();
  if (!(kept > 1e-300)) throw ConfigError("local oscillator has no overlap with the mode basis");
  out.truncation_loss = std::max(0.0, 1.0 - kept);
  return out;
}

SqueezingResult squeezing_db(const GaussianState& state, const LoProjection& lo,
                             ThetaPolicy policy, double theta) {
  const CVector& c = lo.coefficients;
  if (c.size() != state.modes()) throw ConfigError("LO projection and state differ in size");
  const double n_a = (c.transpose() * state.n * c.conjugate()).value().real();
  const cplx m_a = (c.adjoint() * state.m * c.conjugate()).value();
  SqueezingResult out;
  out.truncation_loss = lo.truncation_loss;
  out.theta = policy == ThetaPolicy::kOptimize ? 0.5 * std::arg(m_a) : theta;
  const auto var = [&](double th) {
    return 1.0 + 2.0 * n_a - 2.0 * (std::polar(1.0, -2.0 * th) * m_a).real();
  };
  out.variance = checked_variance(var(out.theta), "quadrature");
  out.db = 10.0 * std::log10(out.variance);
  out.antisqueezing_db = 10.0 * std::log10(1.0 + 2.0 * n_a + 2.0 * std::abs(m_a));
  return out;
}

SqueezingResult squeezing_db(const GaussianState& state, const ModeBasis& basis, double zeta,
                             const LocalOscillator& lo, ThetaPolicy policy, double theta) {
  return squeezing_db(state, project_lo(lo, basis, zeta), policy, theta);
}

std::vector<LoScanPoint> scan_lo_center(const GaussianState& state, const ModeBasis& basis,
                                        double zeta, double waist,
                                        std::span<const double> centers, ThetaPolicy policy,
                                        double theta) {
  std::vector<LoScanPoint> out;
  out.reserve(centers.size());
  for (double x0 : centers) {
    out.push_back({x0, waist, squeezing_db(state, basis, zeta, {x0, waist}, policy, theta)});
  }
  return out;
}

std::vector<LoScanPoint> scan_lo_waist(const GaussianState& state, const ModeBasis& basis,
                                       double zeta, double center,
                                       std::span<const double> waists, ThetaPolicy policy,
                                       double theta) {
  std::vector<LoScanPoint> out;
  out.reserve(waists.size());
  for (double wl : waists) {
    out.push_back({center, wl, squeezing_db(state, basis, zeta, {center, wl}, policy, theta)});
  }
  return out;
}

namespace {

LocalFluctuation finish(double xi, double intensity, double variance) {
  LocalFluctuation out;
  out.xi = xi;
  out.intensity = intensity;
  out.variance = checked_variance(variance, "local intensity");
  if (intensity > 0.0) {
    out.fano = out.variance / intensity;
    out.relative_variance = out.variance / (intensity * intensity);
  }
  return out;
}

}  // namespace

LocalFluctuation local_intensity_fluctuation(const GaussianState& state, const ModeBasis& basis,
                                             double zeta, double xi) {
  const CVector u = basis.values(xi, zeta);
  const CMatrix f = u.conjugate() * u.transpose();
  const QuadraticMoments q = quadratic_form_moments(state, f);
  return finish(xi, q.mean, q.normal_ordered_variance + q.mean);
}

CMatrix window_matrix(const ModeBasis& basis, double zeta, double lo, double hi) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  std::vector<double> x;
  std::vector<double> w;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  // Boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    x.push_back(mid + half * abscissa[i]);
    w.push_back(half * weights[i]);
    if (abscissa[i] != 0.0) {
      x.push_back(mid - half * abscissa[i]);
      w.push_back(half * weights[i]);
    }
  }
  const CMatrix u = basis.values(std::span<const double>(x), zeta);
  const Eigen::Map<const RVector> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  CMatrix out = u.conjugate() * wv.asDiagonal() * u.transpose();
  return 0.5 * (out + out.adjoint());
}

LocalFluctuation binned_intensity_fluctuation(const GaussianState& state,
                                              const ModeBasis& basis, double zeta, double xi,
                                              double bin) {
  if (!(bin > 0.0)) throw ConfigError("detector bin must be positive");
  const CMatrix f = window_matrix(basis, zeta, xi - 0.5 * bin, xi + 0.5 * bin);
  const QuadraticMoments q = quadratic_form_moments(state, f);
  return finish(xi, q.mean, q.variance);
}

}  // namespace msmsq
