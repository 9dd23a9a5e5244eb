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

// Storage and retrieval: free decay of the stored spin state, the output
// field correlation function after the control field is switched back on,
// and homodyne detection with a temporally shaped local oscillator followed
// by a Fourier-limited spectrum analyzer.
//
// After switch-on at t = 0 the output quadrature X1' = (X1 - X2)/sqrt2 has
//
//   <dX1'(t) dX1'(t')> = delta(t - t') - A (1 - v) exp(-gamma0~ (t + t')),
//   A = 4 C Gamma_E / (1 + 2C)^2,
//
// with v the normalized stored variance of Jx1 - Jx2 (and likewise X2' with
// Jy1 + Jy2). The delta term is never discretized: integrated against the
// analyzer window it reduces to a single time integral of E_LO^2.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cvmem/errors.hpp"
#include "cvmem/gaussian.hpp"
#include "cvmem/mapping.hpp"
#include "cvmem/params.hpp"
#include "cvmem/quadrature.hpp"

namespace cvmem {

/// Spin variances relax to the coherent value 1 at rate 2 gamma0 while the
/// control field is off.
inline SpinEPRState storage_decay(const SpinEPRState& state, double t_store, double gamma0) {
  if (!(t_store >= 0.0)) throw std::invalid_argument("storage time must be non-negative");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
  const double f = std::exp(-2.0 * gamma0 * t_store);
  SpinEPRState out = state;
  out.v_minus = 1.0 + (state.v_minus - 1.0) * f;
  out.v_plus = 1.0 + (state.v_plus - 1.0) * f;
  return out;
}

/// 4 C Gamma_E / (1 + 2C)^2.
inline double readout_amplitude(const DerivedRates& rates) {
  const double e = rates.enhancement();
  return 4.0 * rates.cooperativity * rates.effective_pumping / (e * e);
}

struct CorrelationValue {
  double singular_coefficient = 1.0;  // weight of delta(t - t')
  double smooth = 0.0;
};

inline CorrelationValue readout_correlation(const DerivedRates& rates, double stored_variance, double t,
                                            double t_prime) {
  if (!(t >= 0.0 && t_prime >= 0.0)) throw std::invalid_argument("times are measured from switch-on and must be >= 0");
  return {1.0, -readout_amplitude(rates) * (1.0 - stored_variance) *
                   std::exp(-rates.gamma_tilde0 * (t + t_prime))};
}

/// Local-oscillator envelope as a function of the time u = tau - t elapsed
/// since the start of the analyzer window.
using LoProfile = std::function<double(double)>;

struct ReadoutConfig {
  double window = 0.0;              // analyzer integration time T0
  std::vector<double> start_times;  // measurement start times t
  LoProfile lo_profile;             // empty: matched exp(-gamma0~ u)
  int quadrature_nodes = 256;       // Gauss-Legendre nodes per axis (minimum)

  /// Window expressed through the quality indicator gamma0~ T0.
  static ReadoutConfig for_bandwidth_product(const DerivedRates& rates, double product,
                                             std::vector<double> start_times = {0.0}) {
    ReadoutConfig c;
    c.window = product / rates.gamma_tilde0;
    c.start_times = std::move(start_times);
    return c;
  }
};

struct AnalyzerPower {
  double power = 0.0;       // P(t)
  double shot_noise = 0.0;  // calibration N
  double signal = 0.0;      // S
};

namespace detail {

struct AnalyzerIntegrals {
  double shot_noise;
  double signal;
};

/// N = (1/T0) int_0^T0 E(u)^2 du and
/// S = A int int g(u) g(u') sin(pi (u - u')/T0) / (pi (u - u')) du du',
/// g(u) = E(u) exp(-gamma0~ u), on a composite Gauss-Legendre grid.
inline AnalyzerIntegrals analyzer_integrals(const DerivedRates& rates, const ReadoutConfig& cfg, int refine) {
  const double t0 = cfg.window;
  const double gt = rates.gamma_tilde0;
  const int panels = std::max(1, static_cast<int>(std::ceil(gt * t0 / 4.0)));
  const int per_panel = refine * std::max(16, (cfg.quadrature_nodes + panels - 1) / panels);
  const auto rule = quadrature::composite_gauss_legendre(0.0, t0, panels, per_panel);
  const std::size_t n = rule.nodes.size();

  std::vector<double> lo(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rule.nodes[i];
    lo[i] = cfg.lo_profile ? cfg.lo_profile(u) : std::exp(-gt * u);
    if (!(lo[i] >= 0.0) || !std::isfinite(lo[i])) {
      throw std::invalid_argument("local-oscillator profile must be finite and non-negative");
    }
    g[i] = lo[i] * std::exp(-gt * u);
  }
  double shot = 0.0;
  for (std::size_t i = 0; i < n; ++i) shot += rule.weights[i] * lo[i] * lo[i];
  shot /= t0;

  // Window kernel K(d) = int_{-pi/T0}^{pi/T0} dw/2pi e^{-i w d}.
  const double k0 = 1.0 / t0;
  double signal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = rule.weights[i] * g[i];
    double row = wi * k0;  // diagonal
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = rule.nodes[i] - rule.nodes[j];
      const double kernel = std::sin(std::numbers::pi * d / t0) / (std::numbers::pi * d);
      row += 2.0 * rule.weights[j] * g[j] * kernel;
    }
    signal += wi * row;
  }
  return {shot, readout_amplitude(rates) * signal};
}

}  // namespace detail

/// Analyzer power for a stored normalized variance v:
///   P(t) = N - S (1 - v) exp(-2 gamma0~ t).
/// N and S are checked against a grid with twice the nodes per panel and
/// must agree to 1e-6.
inline AnalyzerPower analyzer_power(const DerivedRates& rates, double stored_variance, double t,
                                    const ReadoutConfig& cfg) {
  if (!(cfg.window > 0.0)) throw std::invalid_argument("analyzer window must be positive");
  if (cfg.quadrature_nodes < 2) throw std::invalid_argument("need at least two quadrature nodes");
  if (!(t >= 0.0)) throw std::invalid_argument("measurement time must be non-negative");
  if (!(rates.gamma_tilde0 > 0.0)) throw std::invalid_argument("readout needs gamma0~ > 0");
  const auto coarse = detail::analyzer_integrals(rates, cfg, 1);
  const auto fine = detail::analyzer_integrals(rates, cfg, 2);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  if (rel(coarse.shot_noise, fine.shot_noise) > 1e-6 ||
      (fine.signal != 0.0 && rel(coarse.signal, fine.signal) > 1e-6)) {
    std::ostringstream msg;
    msg << "analyzer integrals not converged (gamma0~ = " << rates.gamma_tilde0 << ", T0 = " << cfg.window
        << ", nodes = " << cfg.quadrature_nodes << "): N " << coarse.shot_noise << " vs " << fine.shot_noise
        << ", S " << coarse.signal << " vs " << fine.signal;
    throw NumericalError(msg.str());
  }
  AnalyzerPower p;
  p.shot_noise = fine.shot_noise;
  p.signal = fine.signal;
  p.power = p.shot_noise - p.signal * (1.0 - stored_variance) * std::exp(-2.0 * rates.gamma_tilde0 * t);
  return p;
}

/// (P1(0) + P2(0)) / N for the two homodyne channels.
inline double measured_inseparability(const AnalyzerPower& x_channel, const AnalyzerPower& y_channel) {
  if (!(x_channel.shot_noise > 0.0) || !(y_channel.shot_noise > 0.0)) {
    throw std::invalid_argument("measured inseparability needs a shot-noise calibration");
  }
  if (std::abs(x_channel.shot_noise - y_channel.shot_noise) > 1e-12 * x_channel.shot_noise) {
    throw std::invalid_argument("both channels must share one shot-noise calibration");
  }
  return (x_channel.power + y_channel.power) / x_channel.shot_noise;
}

struct ReadoutResult {
  double shot_noise = 0.0;
  double signal = 0.0;
  std::vector<double> times;
  std::vector<double> p1;  // X1' channel (Jx1 - Jx2)
  std::vector<double> p2;  // X2' channel (Jy1 + Jy2)
  double i_measured = 2.0; // (P1(0) + P2(0)) / N
  double snr() const { return signal / shot_noise; }
};

/// Both homodyne channels over the configured start times.
inline ReadoutResult simulate_readout(const DerivedRates& rates, const SpinEPRState& stored, const ReadoutConfig& cfg) {
  ReadoutResult r;
  const auto at0_x = analyzer_power(rates, stored.v_minus, 0.0, cfg);
  const auto at0_y = analyzer_power(rates, stored.v_plus, 0.0, cfg);
  r.shot_noise = at0_x.shot_noise;
  r.signal = at0_x.signal;
  r.i_measured = measured_inseparability(at0_x, at0_y);
  const double decay_rate = 2.0 * rates.gamma_tilde0;
  for (double t : cfg.start_times) {
    if (!(t >= 0.0)) throw std::invalid_argument("measurement time must be non-negative");
    const double f = std::exp(-decay_rate * t);
    r.times.push_back(t);
    r.p1.push_back(r.shot_noise - r.signal * (1.0 - stored.v_minus) * f);
    r.p2.push_back(r.shot_noise - r.signal * (1.0 - stored.v_plus) * f);
  }
  return r;
}

struct ProtocolStages {
  double i_f = 2.0;
  double i_at_stored = 2.0;
  double i_at_after_storage = 2.0;
  double i_measured = 2.0;
  double eta_overall = 0.0;  // EoF(measured) / EoF(field); 0 for unentangled input
};

/// Mapping -> storage -> retrieval for a symmetric EPR input.
inline ProtocolStages end_to_end(const EnsembleParams& params, double field_inseparability, double t_store,
                                 const ReadoutConfig& cfg) {
  const auto rates = derive_rates(params);
  const auto mapped = map_inseparability(rates, field_inseparability);
  ProtocolStages s;
  s.i_f = field_inseparability;
  s.i_at_stored = mapped.i_at;
  const SpinEPRState stored{0.5 * mapped.i_at, 0.5 * mapped.i_at, 0.5 * rates.atom_number};
  const auto after = storage_decay(stored, t_store, rates.gamma0);
  s.i_at_after_storage = after.inseparability();
  s.i_measured = simulate_readout(rates, after, cfg).i_measured;
  const double field_eof = eof_symmetric(field_inseparability);
  s.eta_overall = field_eof > 0.0 ? eof_symmetric(s.i_measured) / field_eof : 0.0;
  return s;
}

}  // namespace cvmem
