// Copyright 2026 The cvmem Authors
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

// Invariant suite run by `cvmem validate`. Parameter-independent checks use
// fixed inputs; the rest run at the configured parameter set.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvmem/config.hpp"
#include "cvmem/full_model.hpp"
#include "cvmem/gaussian.hpp"
#include "cvmem/mapping.hpp"
#include "cvmem/readout.hpp"
#include "cvmem/trajectories.hpp"

namespace cvmem {

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
  }

  std::string text() const {
    std::ostringstream out;
    out << std::setprecision(6);
    for (const auto& w : warnings) out << "WARN  " << w << '\n';
    for (const auto& c : checks) {
      const char* tag = c.status == CheckStatus::Pass ? "PASS" : c.status == CheckStatus::Fail ? "FAIL" : "SKIP";
      out << tag << "  " << c.name << "  measured=" << c.measured << "  tolerance=" << c.tolerance;
      if (!c.note.empty()) out << "  (" << c.note << ")";
      out << '\n';
    }
    auto count = [&](CheckStatus s) {
      return std::count_if(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; });
    };
    const auto failed = count(CheckStatus::Fail);
    out << (failed ? "FAILED: " : "OK: ") << count(CheckStatus::Pass) << " passed, " << failed << " failed, "
        << count(CheckStatus::Skip) << " skipped\n";
    return out.str();
  }
};

namespace detail {

/// Runs `body` and records its measured value against `tolerance`. A thrown
/// exception is a failure with the message as note.
inline void run_check(ValidationReport& report, const std::string& name, double tolerance,
                      const std::function<double()>& body) {
  CheckResult c{name, CheckStatus::Pass, 0.0, tolerance, {}};
  try {
    c.measured = body();
    if (!(c.measured <= tolerance)) c.status = CheckStatus::Fail;
  } catch (const std::exception& e) {
    c.status = CheckStatus::Fail;
    c.measured = std::nan("");
    c.note = e.what();
  }
  report.checks.push_back(std::move(c));
}

inline void skip_check(ValidationReport& report, const std::string& name, double tolerance, std::string why) {
  report.checks.push_back({name, CheckStatus::Skip, std::nan(""), tolerance, std::move(why)});
}

/// Random parameter sets with gamma = 1 spread over several decades.
inline EnsembleParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + u(rng) * (std::log(hi) - std::log(lo))); };
  EnsembleParams base;
  base.gamma0 = log_uniform(1e-5, 1e-2);
  base.kappa = log_uniform(0.5, 20.0);
  base.atom_number = log_uniform(1e4, 1e8);
  base.transmission = log_uniform(0.01, 0.5);
  return EnsembleParams::from_cooperativity(log_uniform(0.1, 1e3), log_uniform(1e-3, 1e3), base);
}

/// Least-squares slope of y against x.
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

inline TrajectoryConfig trajectory_config(const RunConfig& cfg, const DerivedRates& rates, unsigned threads) {
  TrajectoryConfig t;
  t.dt = cfg.mc_dt / rates.gamma_tilde0;
  t.duration = cfg.mc_duration / rates.gamma_tilde0;
  t.n_traj = cfg.n_traj;
  t.seed = cfg.seed;
  t.threads = threads;
  return t;
}

inline ValidationReport run_validation(const RunConfig& cfg, unsigned threads = 0) {
  using detail::run_check;
  ValidationReport report;
  const auto& params = cfg.params;
  const auto rates = derive_rates(params);
  report.warnings = rates.regime.warnings;

  // Gaussian core.
  run_check(report, "duan(EPR(r)) = 2 exp(-2r)", 1e-12, [] {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double r = 0.05 * k;
      worst = std::max(worst, std::abs(duan_inseparability(make_epr(r), 0, 1) - 2.0 * std::exp(-2.0 * r)));
    }
    return worst;
  });
  run_check(report, "symmetric EoF matches two-mode squeezed vacuum", 1e-10, [] {
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double r = 0.04 * k;
      const double c2 = std::cosh(r) * std::cosh(r);
      const double s2 = std::sinh(r) * std::sinh(r);
      const double exact = c2 * std::log2(c2) - s2 * std::log2(s2);
      worst = std::max(worst, std::abs(eof_symmetric(2.0 * std::exp(-2.0 * r)) - exact) / exact);
    }
    return worst;
  });
  run_check(report, "symplectic transforms preserve symplectic eigenvalues", 1e-9, [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      auto state = tensor_product(make_epr(std::abs(u(rng))), make_epr(std::abs(u(rng))));
      auto s = SymplecticTransform::beamsplitter(4, 0, 2, 3.0 * u(rng)) *
               SymplecticTransform::squeezer(4, 1, 0.5 * u(rng)) *
               SymplecticTransform::phase_rotation(4, 3, 3.0 * u(rng)) *
               SymplecticTransform::beamsplitter(4, 1, 3, 3.0 * u(rng));
      auto before = state.symplectic_eigenvalues();
      auto after = apply_transform(state, s).symplectic_eigenvalues();
      worst = std::max(worst, (before - after).cwiseAbs().maxCoeff());
    }
    return worst;
  });
  run_check(report, "readout rotation squeezes X of both output modes", 1e-12, [] {
    double worst = 0.0;
    for (double r : {0.2, 0.7, 1.3}) {
      const auto out = apply_transform(make_epr(r), readout_basis_rotation());
      const double target = std::exp(-2.0 * r);
      worst = std::max({worst, std::abs(out.variance_x(0) - target), std::abs(out.variance_x(1) - target),
                        std::abs(out.cov()(0, 2)), std::abs(out.cov()(0, 3)), std::abs(out.cov()(1, 2)),
                        std::abs(out.cov()(1, 3))});
    }
    return worst;
  });

  // Reduced mapping.
  run_check(report, "separable input gives separable atoms (1000 random sets)", 1e-12, [&] {
    std::mt19937_64 rng(cfg.seed);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      worst = std::max(worst, std::abs(map_inseparability(derive_rates(detail::random_params(rng)), 2.0).i_at - 2.0));
    }
    return worst;
  });
  run_check(report, "spectral integration matches closed form", 1e-10, [&] {
    double worst = 0.0;
    for (double i_f : cfg.i_f_sweep.values()) {
      const double s = i_f;  // per-combination density; vacuum gives 2
      const auto flat = [s](double) { return s; };
      const double spectral = map_variances_spectral(rates, flat, flat).inseparability();
      const double closed = map_inseparability(rates, i_f).i_at;
      worst = std::max(worst, std::abs(spectral - closed) / closed);
    }
    return worst;
  });
  if (rates.gamma_tilde0 > 0.0) {
    run_check(report, "Monte Carlo within 3 standard errors of closed form", 3.0, [&] {
      const double i_f = cfg.protocol_i_f;
      const auto mc = simulate_trajectories(rates, i_f, i_f, trajectory_config(cfg, rates, threads));
      return std::abs(mc.state.inseparability() - map_inseparability(rates, i_f).i_at) / mc.se_inseparability();
    });
    run_check(report, "Monte Carlo independent of thread count", 0.0, [&] {
      auto tc = trajectory_config(cfg, rates, 1);
      tc.n_traj = 100;
      const auto a = simulate_trajectories(rates, 0.5, 0.5, tc);
      tc.threads = std::max(2u, resolve_threads(threads));
      const auto b = simulate_trajectories(rates, 0.5, 0.5, tc);
      return std::abs(a.state.inseparability() - b.state.inseparability());
    });
  }

  // Full model.
  run_check(report, "full model drift is stable (max Re eigenvalue)", 0.0, [&] {
    const auto sys = build_three_level_system(params, scheme_detuning(params));
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < sys.eigenvalues().size(); ++i) worst = std::max(worst, sys.eigenvalues()[i].real());
    return worst < 0.0 ? worst : 1.0;
  });
  run_check(report, "full model covariances obey Heisenberg (1 - min symplectic eigenvalue)", 1e-9, [&] {
    const auto sys = build_three_level_system(params, scheme_detuning(params));
    double worst = -std::numeric_limits<double>::infinity();
    for (double i_f : {0.2, 1.0, 2.0}) {
      Matrix2d s = Matrix2d::Zero();
      s(0, 0) = i_f / 2.0;
      s(1, 1) = 2.0 / i_f;
      worst = std::max(worst, 1.0 - steady_covariance(sys, s).state().symplectic_eigenvalues().minCoeff());
      for (double w : {0.0, 0.01, 0.1, 1.0, 10.0}) {
        const Matrix2d out = output_field_spectrum(sys, s, w);
        worst = std::max(worst, 1.0 - std::sqrt(std::max(0.0, out.determinant())));
      }
    }
    return worst;
  });
  run_check(report, "Lyapunov solution matches frequency integration", 1e-6, [&] {
    const auto sys = build_three_level_system(params, scheme_detuning(params));
    Matrix2d s = Matrix2d::Zero();
    s(0, 0) = 0.5;
    s(1, 1) = 2.0;
    const auto lyap = steady_covariance(sys, s).quadrature;
    const auto spectral = steady_covariance_spectral(sys, [&](double) { return s; }).quadrature;
    return (lyap - spectral).cwiseAbs().maxCoeff() / lyap.cwiseAbs().maxCoeff();
  });
  if (rates.regime.ok() && params.scheme == PumpingScheme::Eit) {
    run_check(report, "adiabatic elimination reproduces reduced rates", 1e-2, [&] {
      const auto red = adiabatic_reduction(build_three_level_system(params), params.atom_number);
      return std::max({std::abs(red.gamma_tilde0 / rates.gamma_tilde0 - 1.0), std::abs(red.beta / rates.beta - 1.0),
                       std::abs(red.diffusion / rates.diffusion - 1.0)});
    });
  } else {
    detail::skip_check(report, "adiabatic elimination reproduces reduced rates", 1e-2,
                       params.scheme == PumpingScheme::Eit ? "outside the regime window" : "Raman scheme");
  }

  // Readout.
  const auto rcfg = cfg.readout_config(rates);
  run_check(report, "readout calibration: P = N for coherent atoms", 0.0, [&] {
    double worst = 0.0;
    for (double t : rcfg.start_times) {
      const auto p = analyzer_power(rates, 1.0, t, rcfg);
      worst = std::max(worst, std::abs(p.power - p.shot_noise));
    }
    return worst;
  });
  if (readout_amplitude(rates) > 0.0) {
    run_check(report, "readout decay rate equals 2 gamma0~ (relative error)", 1e-2, [&] {
      std::vector<double> ts, ys;
      for (int k = 0; k <= 20; ++k) {
        const double t = 2.0 / rates.gamma_tilde0 * k / 20.0;
        const auto p = analyzer_power(rates, 0.5, t, rcfg);
        ts.push_back(t);
        ys.push_back(std::log(p.shot_noise - p.power));
      }
      return std::abs(-detail::fitted_slope(ts, ys) / (2.0 * rates.gamma_tilde0) - 1.0);
    });
  } else {
    detail::skip_check(report, "readout decay rate equals 2 gamma0~ (relative error)", 1e-2, "no readout signal");
  }
  run_check(report, "signal-to-noise ratio at most 1", 1.0 + 1e-6, [&] {
    const auto p = analyzer_power(rates, 1.0, 0.0, rcfg);
    return p.signal / p.shot_noise;
  });
  run_check(report, "readout amplitude equals 2 gamma0~ x coupling (relative)", 1e-12, [&] {
    const double a = readout_amplitude(rates);
    const double b = 2.0 * rates.gamma_tilde0 * map_inseparability(rates, 1.0).coupling;
    return a == 0.0 && b == 0.0 ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  });

  // Storage.
  run_check(report, "storage decay monotone toward 2", 0.0, [&] {
    double prev = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    const auto mapped = map_inseparability(rates, cfg.protocol_i_f).i_at;
    const SpinEPRState s0{mapped / 2.0, mapped / 2.0, rates.atom_number / 2.0};
    for (double t : cfg.t_store_sweep.values()) {
      const double i = storage_decay(s0, t, rates.gamma0).inseparability();
      worst = std::max({worst, prev - i, i - 2.0, std::min(mapped, 2.0) - i});
      prev = i;
    }
    return worst;
  });
  run_check(report, "storage half-life equals ln2 / (2 gamma0) (relative error)", 2e-2, [&] {
    const double i_f = std::min(cfg.protocol_i_f, 1.0);
    std::vector<double> ts, ys;
    for (int k = 0; k <= 10; ++k) {
      const double t = 3.0 / rates.gamma0 * k / 10.0;
      const auto stages = end_to_end(params, i_f, t, rcfg);
      ts.push_back(t);
      ys.push_back(std::log(2.0 - stages.i_measured));
    }
    const double half_life = -std::log(2.0) / detail::fitted_slope(ts, ys);
    return std::abs(half_life / (std::log(2.0) / (2.0 * rates.gamma0)) - 1.0);
  });
  return report;
}

}  // namespace cvmem
