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

#include "msmsq/qstate.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "msmsq/errors.hpp"

namespace msmsq {

CMatrix GaussianState::normal_moments() const {
  return mean.conjugate() * mean.transpose() + n;
}

CMatrix GaussianState::anomalous_moments() const { return mean * mean.transpose() + m; }

double GaussianState::photon_number() const { return normal_moments().trace().real(); }

cplx GaussianState::fourth_moment(int p, int q, int r, int s) const {
  const int dim = modes();
  if (p < 0 || q < 0 || r < 0 || s < 0 || p >= dim || q >= dim || r >= dim || s >= dim) {
    throw std::out_of_range("fourth_moment index out of range");
  }
  const CMatrix g = normal_moments();
  const CMatrix a = anomalous_moments();
  // Normal-ordered <a_p^dag a_r^dag a_q a_s> plus the commutator [a_q, a_r^dag].
  const cplx mu4 = std::conj(mean(p)) * std::conj(mean(r)) * mean(q) * mean(s);
  cplx value = g(p, q) * g(r, s) + g(p, s) * g(r, q) + std::conj(a(p, r)) * a(q, s) - 2.0 * mu4;
  if (q == r) value += g(p, s);
  return value;
}

GaussianState vacuum_state(int n_modes) {
  if (n_modes < 1) throw ConfigError("state needs at least one mode");
  return {CVector::Zero(n_modes), CMatrix::Zero(n_modes, n_modes),
          CMatrix::Zero(n_modes, n_modes)};
}

GaussianState coherent_input(cplx alpha0, int n_modes) {
  GaussianState s = vacuum_state(n_modes);
  s.mean(0) = alpha0;
  return s;
}

GaussianState squeezed_coherent(int n_modes, int mode, cplx alpha, double r, double phi) {
  GaussianState s = vacuum_state(n_modes);
  if (mode < 0 || mode >= n_modes) throw std::out_of_range("squeezed mode out of range");
  s.mean(mode) = alpha;
  s.n(mode, mode) = std::sinh(r) * std::sinh(r);
  s.m(mode, mode) = -std::polar(1.0, phi) * std::sinh(r) * std::cosh(r);
  return s;
}

GaussianState evolve(const GaussianState& state, const TransferMatrix& t, double defect_limit) {
  if (t.modes() != state.modes()) throw ConfigError("transfer matrix and state differ in size");
  const double defect = symplectic_defect(t.t);
  if (defect > defect_limit) {
    std::ostringstream msg;
    msg << "refusing to evolve with a non-symplectic transfer matrix (defect " << defect << ")";
    throw NumericalIntegrityError(msg.str());
  }
  const CMatrix u = t.u();
  const CMatrix v = t.v();
  const CMatrix ubar = u.conjugate();
  const CMatrix vbar = v.conjugate();
  const CMatrix id = CMatrix::Identity(state.modes(), state.modes());
  const CMatrix nt1 = state.n.transpose() + id;  // <da_j da_k^dag>
  const CMatrix mbar = state.m.conjugate();

  GaussianState out;
  out.mean = u * state.mean + v * state.mean.conjugate();
  out.n = ubar * state.n * u.transpose() + ubar * mbar * v.transpose() +
          vbar * state.m * u.transpose() + vbar * nt1 * v.transpose();
  out.m = u * state.m * u.transpose() + u * nt1 * v.transpose() + v * state.n * u.transpose() +
          v * mbar * v.transpose();
  out.n = 0.5 * (out.n + out.n.adjoint()).eval();
  out.m = 0.5 * (out.m + out.m.transpose()).eval();
  return out;
}

double uncertainty_margin(const GaussianState& state) {
  const int dim = state.modes();
  CMatrix r(2 * dim, 2 * dim);
  r.topLeftCorner(dim, dim) = state.n.transpose() + CMatrix::Identity(dim, dim);
  r.topRightCorner(dim, dim) = state.m;
  r.bottomLeftCorner(dim, dim) = state.m.conjugate();
  r.bottomRightCorner(dim, dim) = state.n;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

QuadraticMoments quadratic_form_moments(const GaussianState& state, const CMatrix& f) {
  if (f.rows() != state.modes() || f.cols() != state.modes()) {
    throw ConfigError("quadratic form does not match the state size");
  }
  const CMatrix g = state.normal_moments();
  const CMatrix a = state.anomalous_moments();
  const CMatrix fgt = f * g.transpose();
  const cplx mean = f.cwiseProduct(g).sum();
  const cplx classical = state.mean.adjoint() * f * state.mean;
  // Wick pairings of sum F_jl F_pq <a_j^dag a_p^dag a_l a_q> minus <Q>^2.
  const cplx normal = (fgt * fgt).trace() +
                      a.conjugate().cwiseProduct(f * a * f.transpose()).sum() -
                      2.0 * classical * classical;
  const cplx commutator = (f * f).cwiseProduct(g).sum();

  QuadraticMoments out;
  out.mean = mean.real();
  out.normal_ordered_variance = normal.real();
  out.variance = (normal + commutator).real();
  return out;
}

}  // namespace msmsq
