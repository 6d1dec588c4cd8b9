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

#include "msmsq/validation.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "msmsq/baselines.hpp"
#include "msmsq/coupling.hpp"
#include "msmsq/errors.hpp"
#include "msmsq/qstate.hpp"

namespace msmsq {

namespace {

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double rel_change(double a, double b) { return std::abs(a / b - 1.0); }

/// Lazily prepared calibrated run shared by several checks.
class Context {
 public:
  explicit Context(RunConfig cfg) : cfg_(std::move(cfg)) {}

  const RunConfig& cfg() const { return cfg_; }
  const Simulation& sim() {
    if (!sim_) sim_ = std::make_unique<Simulation>(prepare(cfg_));
    return *sim_;
  }
  /// Same medium and gain on a different mode count.
  TransferMatrix transfer_with(int n_modes, int n_steps) {
    const Simulation& s = sim();
    ModeBasis basis(n_modes);
    PropagateOptions opts;
    opts.ordering = cfg_.ordering;
    return propagate(s.medium, basis, s.zeta_end(), n_steps, opts);
  }

 private:
  RunConfig cfg_;
  std::unique_ptr<Simulation> sim_;
};

CriterionResult symplectic(Context& ctx) {
  const TransferMatrix& t = ctx.sim().transfer;
  const CMatrix u = t.u();
  const CMatrix v = t.v();
  const double comm = max_abs(u * u.adjoint() - v * v.adjoint() -
                              CMatrix::Identity(u.rows(), u.cols()));
  const CMatrix uvt = u * v.transpose();
  const double sym = max_abs(uvt - uvt.transpose());
  return {"symplectic integrity", comm < 1e-8 && sym < 1e-8,
          "|UU^H-VV^H-I|=" + fmt(comm) + ", |UV^T-(UV^T)^T|=" + fmt(sym) + " (limit 1e-8)"};
}

CriterionResult free_diffraction(Context& ctx) {
  const int n = ctx.cfg().n_modes;
  const ModeBasis basis(n);
  const Medium empty{UniformModel{0.0, 0.0}, {}};
  const double zmax = 0.126 * basis.zeta_rayleigh();
  const GaussianState input = coherent_input(1.0, n);
  double worst = 0.0;
  constexpr int kStations = 8;
  for (int k = 0; k <= kStations; ++k) {
    const double zeta = zmax * k / kStations;
    const TransferMatrix t = zeta > 0.0 ? propagate(empty, basis, zeta, 16)
                                        : TransferMatrix::identity(n);
    const GaussianState s = evolve(input, t);
    const double w = std::sqrt(width_mean(s, WidthMeasure{}.matrix(basis, zeta)));
    const double z = zeta / basis.zeta_rayleigh();
    worst = std::max(worst, std::abs(w - std::sqrt(1.0 + z * z)));
  }
  return {"free diffraction width", worst < 1e-6,
          "max |sqrt<W>-sqrt(1+z^2/zR^2)|=" + fmt(worst) + " over " +
              std::to_string(kStations + 1) + " planes up to 0.126 zR (limit 1e-6)"};
}

CriterionResult single_mode_squeezer(Context&) {
  constexpr double kD = 4.0;
  constexpr double kZeta = 0.25;
  constexpr int kSteps = 64;
  CouplingMatrices cm{CMatrix::Zero(1, 1), CMatrix::Constant(1, 1, kD), 0.0};
  const PropagationMatrix m = build_m(cm);
  TransferMatrix t = TransferMatrix::identity(1);
  for (int s = 0; s < kSteps; ++s) t = step(t, m, kZeta / kSteps);
  const double r = kD * kZeta;
  const double err_u = std::abs(t.u()(0, 0) - std::cosh(r));
  const double err_v = std::abs(t.v()(0, 0) - kI * std::sinh(r));
  const GaussianState out = evolve(vacuum_state(1), t);
  LoProjection lo{CVector::Ones(1), 0.0};
  const double db = squeezing_db(out, lo).db;
  const double expected = -20.0 * r / std::numbers::ln10;
  const double err_db = std::abs(db - expected);
  return {"single-mode squeezer", err_u < 1e-10 && err_v < 1e-10 && err_db < 1e-6,
          "r=" + fmt(r) + ": |U-cosh r|=" + fmt(err_u) + ", |V-i sinh r|=" + fmt(err_v) +
              " (limit 1e-10); S=" + fmt(db, 10) + " dB vs " + fmt(expected, 10) +
              " dB, diff " + fmt(err_db) + " (limit 1e-6)"};
}

CriterionResult wick_vs_fock(Context& ctx) {
  constexpr int kDraws = 120;
  constexpr int kCutoff = 12;
  std::mt19937_64 rng(ctx.cfg().seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto phase = [&] { return 2.0 * std::numbers::pi * unit(rng); };
  double worst_fourth = 0.0;
  double worst_width = 0.0;
  for (int d = 0; d < kDraws; ++d) {
    const int modes = 1 + d % 2;
    CVector alpha(modes);
    CMatrix z(modes, modes);
    for (int j = 0; j < modes; ++j) alpha(j) = std::polar(0.6 * unit(rng), phase());
    for (int j = 0; j < modes; ++j) {
      for (int k = j; k < modes; ++k) z(j, k) = z(k, j) = std::polar(0.15 * unit(rng), phase());
    }
    CMatrix f(modes, modes);
    for (int j = 0; j < modes; ++j) {
      f(j, j) = 0.5 + unit(rng);
      for (int k = j + 1; k < modes; ++k) {
        f(j, k) = std::polar(0.5 * unit(rng), phase());
        f(k, j) = std::conj(f(j, k));
      }
    }

    TransferMatrix t{squeezer_transfer(z), 1, 0.0};
    GaussianState g = evolve(vacuum_state(modes), t);
    g.mean = alpha;
    const FockOracle fock(alpha, z, kCutoff);

    for (int p = 0; p < modes; ++p) {
      for (int q = 0; q < modes; ++q) {
        for (int r = 0; r < modes; ++r) {
          for (int s = 0; s < modes; ++s) {
            worst_fourth = std::max(
                worst_fourth, std::abs(g.fourth_moment(p, q, r, s) - fock.fourth_moment(p, q, r, s)));
          }
        }
      }
    }
    const WidthUncertainty wu = width_uncertainty(g, f);
    const auto [mean_q, var_q] = fock.quadratic_moments(f);
    double photons = 0.0;
    for (int j = 0; j < modes; ++j) photons += fock.normal(j, j).real();
    const double fock_mean = mean_q / photons;
    const double fock_abs = std::sqrt(std::max(var_q, 0.0)) / photons;
    worst_width = std::max({worst_width, std::abs(wu.mean - fock_mean),
                            std::abs(wu.absolute - fock_abs),
                            std::abs(wu.relative - fock_abs / fock_mean)});
  }
  return {"Gaussian moments vs Fock brute force", worst_fourth < 1e-8 && worst_width < 1e-8,
          std::to_string(kDraws) + " draws (1-2 modes, cutoff " + std::to_string(kCutoff) +
              "): max fourth-moment diff " + fmt(worst_fourth) + ", max width diff " +
              fmt(worst_width) + " (limit 1e-8)"};
}

CriterionResult mean_field(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const Simulation& sim = ctx.sim();
  SplitStepOptions opts;
  opts.grid_points = cfg.classical_points;
  opts.half_window = cfg.classical_half_window;
  const cplx a0 = cfg.physical.alpha0;
  const auto input = [a0](double xi) {
    return a0 * std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  };
  const ClassicalField cf =
      classical_split_step(input, sim.medium, sim.zeta_end(), cfg.classical_steps, opts);
  const std::vector<double> xi(cf.xi.data(), cf.xi.data() + cf.xi.size());
  const auto rel_l2 = [&](const ModeBasis& basis, const TransferMatrix& t) {
    const GaussianState s = evolve(coherent_input(a0, basis.size()), t);
    return (basis.reconstruct(s.mean, xi, sim.zeta_end()) - cf.field).norm() / cf.field.norm();
  };
  const double err = rel_l2(sim.basis, sim.transfer);
  constexpr int kDiagModes = 80;
  const double err_wide = rel_l2(ModeBasis(kDiagModes), ctx.transfer_with(kDiagModes, 128));
  return {"mean field vs split-step solver", err < 1e-4,
          "relative L2 " + fmt(err) + " at N=" + std::to_string(sim.basis.size()) +
              " (limit 1e-4); same gain with N=" + std::to_string(kDiagModes) + ": " +
              fmt(err_wide)};
}

struct Summary {
  double sqrt_width;
  double squeezing;
  double rel_width;
};

Summary summarize(const RunConfig& cfg, const ModeBasis& basis, const TransferMatrix& t,
                  double zend) {
  const CMatrix f = WidthMeasure{}.matrix(basis, zend);
  const GaussianState s = evolve(coherent_input(cfg.physical.alpha0, basis.size()), t);
  const GaussianState s1 =
      evolve(coherent_input(std::polar(1.0, cfg.scan_alpha_phase), basis.size()), t);
  return {std::sqrt(width_mean(s, f)), squeezing_db(s, basis, zend, {0.0, 1.0}).db,
          width_uncertainty(s1, f).relative};
}

CriterionResult convergence(Context& ctx) {
  const Simulation& sim = ctx.sim();
  constexpr int kCoarse = 30;
  const Summary fine = summarize(ctx.cfg(), sim.basis, sim.transfer, sim.zeta_end());
  const Summary coarse = summarize(ctx.cfg(), ModeBasis(kCoarse),
                                   ctx.transfer_with(kCoarse, ctx.cfg().n_steps), sim.zeta_end());
  const double dw = rel_change(coarse.sqrt_width, fine.sqrt_width);
  const double ds = rel_change(coarse.squeezing, fine.squeezing);
  const double dr = rel_change(coarse.rel_width, fine.rel_width);
  const bool ok = dw < 0.01 && ds < 0.01 && dr < 0.01;
  return {"mode-count convergence N=30 vs N=" + std::to_string(sim.basis.size()), ok,
          "sqrt<W> " + fmt(coarse.sqrt_width) + " vs " + fmt(fine.sqrt_width) + " (" +
              fmt(100 * dw, 3) + "%), squeezing " + fmt(coarse.squeezing) + " vs " +
              fmt(fine.squeezing) + " dB (" + fmt(100 * ds, 3) + "%), relative width " +
              fmt(coarse.rel_width) + " vs " + fmt(fine.rel_width) + " (" + fmt(100 * dr, 3) +
              "%); limit 1%"};
}

CriterionResult focusing_signatures(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const Simulation& sim = ctx.sim();
  const double zend = sim.zeta_end();
  const GaussianState out = sim.output(cfg.physical.alpha0);
  std::ostringstream detail;
  detail << "calibrated S=" << fmt(sim.calibration.achieved_db) << " dB";

  const double w = std::sqrt(width_mean(out, WidthMeasure{}.matrix(sim.basis, zend)));
  const bool a = w < 0.8;
  detail << "; (a) sqrt<W>=" << fmt(w) << " (<0.8)";

  SplitStepOptions opts;
  opts.grid_points = cfg.classical_points;
  opts.half_window = cfg.classical_half_window;
  opts.variant = ClassicalVariant::kLinearOnly;
  const cplx a0 = cfg.physical.alpha0;
  const auto input = [a0](double xi) {
    return a0 * std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  };
  const ClassicalField lin =
      classical_split_step(input, sim.medium, zend, cfg.classical_steps, opts);
  const double w_lin = std::sqrt(lin.width_mean());
  const bool b = w_lin > 1.0;
  detail << "; (b) classical sqrt<W>=" << fmt(w_lin) << " (>1)";

  std::vector<double> centers;
  for (int k = 0; k <= 30; ++k) centers.push_back(0.05 * k);
  const auto scan = scan_lo_center(out, sim.basis, zend, 0.2, centers);
  int turns = 0;
  int last = 0;
  for (std::size_t k = 1; k < scan.size(); ++k) {
    const double diff = scan[k].result.db - scan[k - 1].result.db;
    const int dir = diff > 1e-3 ? 1 : diff < -1e-3 ? -1 : 0;
    if (dir != 0 && last != 0 && dir != last) ++turns;
    if (dir != 0) last = dir;
  }
  const bool c = turns > 0;
  detail << "; (c) w_l=0.2 center scan has " << turns << " turning point(s)";

  const std::vector<double> waists{0.3, 0.25, 0.2, 0.15, 0.1, 0.07, 0.05, 0.03, 0.02};
  const auto wscan = scan_lo_waist(out, sim.basis, zend, 0.0, waists);
  bool d = -wscan.front().result.db > 0.0;
  detail << "; (d) S(w_l)=[";
  for (std::size_t k = 0; k < wscan.size(); ++k) {
    detail << (k ? " " : "") << fmt(wscan[k].result.db, 3);
    if (k > 0) {
      const double depth = std::max(0.0, -wscan[k].result.db);
      const double prev = std::max(0.0, -wscan[k - 1].result.db);
      d = d && depth <= prev + 1e-9;
    }
  }
  detail << "] dB for w_l=0.3..0.02, squeezing depth non-increasing";
  return {"calibrated focusing reproduction", a && b && c && d, detail.str()};
}

CriterionResult width_ordering(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const Simulation& sim = ctx.sim();
  const GaussianState out = sim.output(std::polar(1.0, cfg.scan_alpha_phase));
  const WidthUncertainty msm = width_uncertainty(out, WidthMeasure{}.matrix(sim.basis, sim.zeta_end()));
  const CMatrix f0 = WidthMeasure{}.matrix(sim.basis, 0.0);
  const std::vector<double> one{1.0};
  const SingleModeWidth base = single_mode_width_baselines(one, sim.calibration.target_db, f0)[0];
  const bool order = msm.relative < base.squeezed && base.squeezed < base.coherent;

  std::vector<double> alphas;
  for (int a = 2; a <= 10; ++a) alphas.push_back(a);
  const auto coh = single_mode_width_baselines(alphas, 0.0, f0);
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& row : coh) {
    lo = std::min(lo, row.coherent * row.alpha);
    hi = std::max(hi, row.coherent * row.alpha);
  }
  const double spread = hi / lo - 1.0;
  const bool scaling = spread < 0.02;
  return {"width uncertainty ordering", order && scaling,
          "|alpha|=1: MSM " + fmt(100 * msm.relative_length, 3) + "% < squeezed " +
              fmt(50 * base.squeezed, 3) + "% < coherent " + fmt(50 * base.coherent, 3) +
              "% (relative uncertainty of sqrt<W>); coherent |alpha|*rel "
              "spread over [2,10] " + fmt(100 * spread, 3) + "% (limit 2%)"};
}

CriterionResult local_noise(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const Simulation& sim = ctx.sim();
  const double r = squeeze_parameter_for_db(sim.calibration.target_db);
  const double u0_abs2 = std::norm(sim.basis.mode_value(0, 0.0, 0.0));
  bool ok = true;
  std::ostringstream detail;
  detail << "MSM/single-mode ratio at center:";
  for (double a : cfg.alpha_grid) {
    const GaussianState s = sim.output(std::polar(a, cfg.scan_alpha_phase));
    const LocalFluctuation msm = local_intensity_fluctuation(s, sim.basis, sim.zeta_end(), 0.0);
    const SingleModeLocalNoise sm =
        single_mode_local_noise(FockOracle::single_mode(a, r, 0.0, suggested_cutoff(a, r)), u0_abs2);
    // Both are normalized by the same coherent reference a^2 |u0(0,0)|^2.
    const double ratio = msm.relative_variance / sm.relative_variance;
    ok = ok && ratio < 1.0;
    detail << " " << fmt(a, 3) << ":" << fmt(ratio, 3);
  }
  return {"local intensity noise below single-mode baseline", ok, detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg) {
  Context ctx(cfg);
  const std::vector<std::pair<std::string, std::function<CriterionResult(Context&)>>> checks = {
      {"symplectic integrity", symplectic},
      {"free diffraction width", free_diffraction},
      {"single-mode squeezer", single_mode_squeezer},
      {"Gaussian moments vs Fock brute force", wick_vs_fock},
      {"mean field vs split-step solver", mean_field},
      {"mode-count convergence", convergence},
      {"calibrated focusing reproduction", focusing_signatures},
      {"width uncertainty ordering", width_ordering},
      {"local intensity noise below single-mode baseline", local_noise},
  };
  std::vector<CriterionResult> out;
  for (const auto& [name, check] : checks) {
    try {
      out.push_back(check(ctx));
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

}  // namespace msmsq
