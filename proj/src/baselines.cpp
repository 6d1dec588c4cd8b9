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

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "msmsq/errors.hpp"
#include "msmsq/expm.hpp"
#include "msmsq/modes.hpp"

namespace msmsq {

// ---- classical ----

double ClassicalField::power() const { return field.squaredNorm() * dxi; }

double ClassicalField::width_mean() const {
  const RVector i = field.cwiseAbs2();
  return 2.0 * (xi.array().square() * i.array()).sum() / i.sum();
}

namespace {

class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n), buf_(n) {
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  CVector& buffer() { return buf_; }
  void forward() { fftw_execute(fwd_); }
  void backward() {
    fftw_execute(bwd_);
    buf_ /= static_cast<double>(n_);
  }

 private:
  int n_;
  CVector buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

void check_boundary(const CVector& a, double tol, double zeta) {
  const double peak = a.cwiseAbs().maxCoeff();
  const Eigen::Index n = a.size();
  const Eigen::Index edge = n / 64;
  const double wall =
      std::max(a.head(edge).cwiseAbs().maxCoeff(), a.tail(edge).cwiseAbs().maxCoeff());
  if (wall > tol * peak) {
    std::ostringstream msg;
    msg << "classical field reached the window edge at zeta=" << zeta << " (" << wall / peak
        << " of peak); widen the grid";
    throw NumericalIntegrityError(msg.str());
  }
}

void check_spectrum(const CVector& spectrum, double tol, double zeta) {
  // FFT ordering: the Nyquist band sits in the middle of the array.
  const Eigen::Index n = spectrum.size();
  const Eigen::Index band = n / 16;
  const double peak = spectrum.cwiseAbs().maxCoeff();
  const double tail = spectrum.segment(n / 2 - band, 2 * band).cwiseAbs().maxCoeff();
  if (tail > tol * peak) {
    std::ostringstream msg;
    msg << "classical field spectrum reached the Nyquist band at zeta=" << zeta << " ("
        << tail / peak << " of peak); refine the grid";
    throw NumericalIntegrityError(msg.str());
  }
}

}  // namespace

ClassicalField classical_split_step(const std::function<cplx(double)>& input, const Medium& medium,
                                    double zeta_end, int n_steps,
                                    const SplitStepOptions& options) {
  if (n_steps < 1) throw ConfigError("classical solver needs at least one step");
  if (!(zeta_end > 0.0)) throw ConfigError("zeta_end must be positive");
  if (options.grid_points < 16 || options.grid_points % 2 != 0) {
    throw ConfigError("classical grid needs an even number of points");
  }
  const int n = options.grid_points;
  ClassicalField out;
  out.dxi = 2.0 * options.half_window / n;
  out.xi = RVector::LinSpaced(n, -options.half_window, options.half_window - out.dxi);
  out.field.resize(n);
  for (int k = 0; k < n; ++k) out.field[k] = input(out.xi[k]);

  RVector kx(n);
  const double dk = 2.0 * std::numbers::pi / (n * out.dxi);
  for (int k = 0; k < n; ++k) kx[k] = dk * (k < n / 2 ? k : k - n);

  const double h = zeta_end / n_steps;
  // d a / d zeta = s (i/2) d^2 a  =>  a_k <- exp(-s i k^2 h / 4) a_k per half step.
  CVector half_kick(n);
  for (int k = 0; k < n; ++k) half_kick[k] = std::polar(1.0, -kDiffractionSign * kx[k] * kx[k] * h / 4.0);

  FftPlan fft(n);
  CVector& buf = fft.buffer();
  const bool full = options.variant == ClassicalVariant::kFull;
  buf = out.field;
  for (int s = 0; s < n_steps; ++s) {
    fft.forward();
    if (s == 0) check_spectrum(buf, options.spectral_tolerance, 0.0);
    buf.array() *= half_kick.array();
    fft.backward();

    const double zmid = (s + 0.5) * h;
    for (int k = 0; k < n; ++k) {
      const Susceptibility chi = medium.at(out.xi[k], zmid);
      const double cl = chi.chi_l;
      const double cn = full ? chi.chi_n : 0.0;
      // [a, a^*] evolves with exp(i h K), K = [[cl, cn], [-cn, -cl]], K^2 = (cl^2 - cn^2) I.
      const double q = cl * cl - cn * cn;
      double c = 1.0;
      double sn = h;
      if (q > 0.0) {
        const double w = std::sqrt(q);
        c = std::cos(w * h);
        sn = std::sin(w * h) / w;
      } else if (q < 0.0) {
        const double w = std::sqrt(-q);
        c = std::cosh(w * h);
        sn = std::sinh(w * h) / w;
      }
      const cplx a = buf[k];
      buf[k] = c * a + kI * sn * (cl * a + cn * std::conj(a));
    }

    fft.forward();
    buf.array() *= half_kick.array();
    if (s + 1 == n_steps) check_spectrum(buf, options.spectral_tolerance, zeta_end);
    fft.backward();
  }
  out.field = buf;
  out.zeta = zeta_end;
  check_boundary(out.field, options.boundary_tolerance, zeta_end);
  return out;
}

// ---- Fock oracle ----

namespace {

CMatrix ladder(int dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

}  // namespace

FockOracle::FockOracle(const CVector& alpha, const CMatrix& z, int cutoff, int padding,
                       double leakage_limit)
    : modes_(static_cast<int>(alpha.size())), dim_(cutoff + 1 + padding) {
  if (modes_ < 1 || modes_ > 2) throw ConfigError("Fock oracle supports one or two modes");
  if (z.rows() != modes_ || z.cols() != modes_) throw ConfigError("squeeze matrix size mismatch");
  if (cutoff < 1 || padding < 0) throw ConfigError("Fock cutoff must be positive");
  if (max_abs(z - z.transpose()) > 1e-14) throw ConfigError("squeeze matrix must be symmetric");

  const CMatrix a1 = ladder(dim_);
  const CMatrix id1 = CMatrix::Identity(dim_, dim_);
  std::vector<CMatrix> a;
  if (modes_ == 1) {
    a.push_back(a1);
  } else {
    a.push_back(kron(a1, id1));
    a.push_back(kron(id1, a1));
  }
  const Eigen::Index total = a[0].rows();

  CMatrix displacement = CMatrix::Zero(total, total);
  CMatrix squeeze = CMatrix::Zero(total, total);
  for (int j = 0; j < modes_; ++j) {
    displacement += alpha(j) * a[j].adjoint() - std::conj(alpha(j)) * a[j];
    for (int k = 0; k < modes_; ++k) {
      squeeze += 0.5 * (std::conj(z(j, k)) * a[j] * a[k] - z(j, k) * a[j].adjoint() * a[k].adjoint());
    }
  }
  CVector vac = CVector::Zero(total);
  vac(0) = 1.0;
  const CMatrix ed = displacement.exp();
  const CMatrix es = squeeze.exp();
  psi_ = ed * (es * vac);
  psi_ /= psi_.norm();

  leakage_ = 0.0;
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const int n0 = modes_ == 1 ? static_cast<int>(idx) : static_cast<int>(idx / dim_);
    const int n1 = modes_ == 1 ? 0 : static_cast<int>(idx % dim_);
    if (n0 > cutoff || n1 > cutoff) leakage_ += std::norm(psi_(idx));
  }
  if (leakage_ > leakage_limit) {
    std::ostringstream msg;
    msg << "Fock state leaks " << leakage_ << " above cutoff " << cutoff;
    throw NumericalIntegrityError(msg.str());
  }
}

FockOracle FockOracle::single_mode(cplx alpha, double r, double phi, int cutoff, int padding) {
  CVector a(1);
  a(0) = alpha;
  CMatrix z(1, 1);
  z(0, 0) = std::polar(r, phi);
  return FockOracle(a, z, cutoff, padding);
}

CVector FockOracle::apply_a(int j, const CVector& v) const {
  if (j < 0 || j >= modes_) throw std::out_of_range("Fock mode index out of range");
  CVector out = CVector::Zero(v.size());
  const Eigen::Index total = v.size();
  const Eigen::Index stride = (modes_ == 2 && j == 0) ? dim_ : 1;
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const int level = static_cast<int>((idx / stride) % dim_);
    if (level > 0) out(idx - stride) += std::sqrt(static_cast<double>(level)) * v(idx);
  }
  return out;
}

CVector FockOracle::apply_adag(int j, const CVector& v) const {
  if (j < 0 || j >= modes_) throw std::out_of_range("Fock mode index out of range");
  CVector out = CVector::Zero(v.size());
  const Eigen::Index total = v.size();
  const Eigen::Index stride = (modes_ == 2 && j == 0) ? dim_ : 1;
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    const int level = static_cast<int>((idx / stride) % dim_);
    if (level + 1 < dim_) out(idx + stride) += std::sqrt(static_cast<double>(level + 1)) * v(idx);
  }
  return out;
}

cplx FockOracle::mean(int j) const { return psi_.dot(apply_a(j, psi_)); }

cplx FockOracle::normal(int p, int q) const {
  return apply_a(p, psi_).dot(apply_a(q, psi_));
}

cplx FockOracle::anomalous(int p, int q) const {
  return psi_.dot(apply_a(p, apply_a(q, psi_)));
}

cplx FockOracle::fourth_moment(int p, int q, int r, int s) const {
  const CVector right = apply_a(q, apply_adag(r, apply_a(s, psi_)));
  return apply_a(p, psi_).dot(right);
}

std::pair<double, double> FockOracle::quadratic_moments(const CMatrix& f) const {
  if (f.rows() != modes_ || f.cols() != modes_) throw ConfigError("quadratic form size mismatch");
  CVector qpsi = CVector::Zero(psi_.size());
  for (int j = 0; j < modes_; ++j) {
    for (int l = 0; l < modes_; ++l) {
      if (f(j, l) != 0.0) qpsi += f(j, l) * apply_adag(j, apply_a(l, psi_));
    }
  }
  const double mean = psi_.dot(qpsi).real();
  return {mean, qpsi.squaredNorm() - mean * mean};
}

CMatrix squeezer_transfer(const CMatrix& z) {
  const Eigen::Index n = z.rows();
  CMatrix g = CMatrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = -z;
  g.bottomLeftCorner(n, n) = -z.conjugate();
  return expm(g);
}

double squeeze_parameter_for_db(double db) { return -db * std::log(10.0) / 20.0; }

int suggested_cutoff(double alpha_abs, double r) {
  // Coherent part: Poisson tail; squeezed part: geometric tail in tanh(r)^n.
  const double s2 = std::sinh(r) * std::sinh(r);
  const double mean = alpha_abs * alpha_abs + s2;
  // Number variance is largest for phase squeezing; use that bound.
  const double var = alpha_abs * alpha_abs * std::exp(2.0 * r) + 2.0 * s2 * (1.0 + s2);
  int cutoff = static_cast<int>(mean + 12.0 * std::sqrt(var + 1.0) + 20.0);
  if (r > 0.0) {
    const double t = std::tanh(r);
    cutoff = std::max(cutoff, static_cast<int>(std::log(1e-12) / std::log(t)) + 20);
  }
  return cutoff;
}

std::vector<SingleModeWidth> single_mode_width_baselines(std::span<const double> alphas,
                                                        double squeeze_db, const CMatrix& f) {
  const double r = squeeze_parameter_for_db(squeeze_db);
  const double f00 = f(0, 0).real();
  double cross = 0.0;
  for (Eigen::Index l = 1; l < f.cols(); ++l) cross += std::norm(f(0, l));

  // Only mode 0 is occupied: Var(Q) = F00^2 Var(n0) + sum_{l>0} |F0l|^2 <n0>.
  const auto relative = [&](const FockOracle& o) {
    CMatrix one(1, 1);
    one(0, 0) = 1.0;
    const auto [n, var_n] = o.quadratic_moments(one);
    const double var = f00 * f00 * var_n + cross * n;
    return std::pair<double, double>{std::sqrt(std::max(var, 0.0)) / (f00 * n), n};
  };

  std::vector<SingleModeWidth> out;
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) throw ConfigError("baseline amplitude must be positive");
    SingleModeWidth row;
    row.alpha = alpha;
    const auto coh = relative(FockOracle::single_mode(alpha, 0.0, 0.0, suggested_cutoff(alpha, 0.0)));
    // Real alpha with real positive squeeze parameter reduces the amplitude quadrature.
    const auto sq = relative(FockOracle::single_mode(alpha, r, 0.0, suggested_cutoff(alpha, r)));
    row.coherent = coh.first;
    row.photons_coherent = coh.second;
    row.squeezed = sq.first;
    row.photons_squeezed = sq.second;
    out.push_back(row);
  }
  return out;
}

SingleModeLocalNoise single_mode_local_noise(const FockOracle& oracle, double u0_abs2) {
  if (oracle.modes() != 1) throw ConfigError("single-mode local noise needs a one-mode oracle");
  CMatrix one(1, 1);
  one(0, 0) = 1.0;
  const auto [n, var_n] = oracle.quadratic_moments(one);
  SingleModeLocalNoise out;
  out.intensity = u0_abs2 * n;
  // Normal-ordered Var(n) is Var(n) - <n>; the other modes are vacuum and
  // contribute nothing normal-ordered.
  out.variance = u0_abs2 * u0_abs2 * (var_n - n) + out.intensity;
  out.relative_variance = out.variance / (out.intensity * out.intensity);
  return out;
}

}  // namespace msmsq
