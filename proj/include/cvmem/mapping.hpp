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

// Reduced (adiabatic) model of entanglement transfer from two EPR beams to
// the ground-state spins of two identical ensembles.
//
// In the slow-spin regime gamma0 << gamma0~ << kappa, gamma each EPR
// combination of spin components obeys
//
//   (gamma0~ - i w) dJ(w) = -beta dX_in(w) + f(w),
//
// with white Langevin noise f. The noise strength D is fixed so that flat
// input spectra reproduce the closed-form transfer law exactly; see
// `derive_rates`.
//
// Normalization: a vacuum EPR combination (X1 - X2 or Y1 + Y2) has flat
// spectral density 2, and spin variances are divided by N/2 so that a
// coherent spin state gives 1 per combination.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cvmem/gaussian.hpp"
#include "cvmem/params.hpp"
#include "cvmem/quadrature.hpp"

namespace cvmem {

/// Normalized spin EPR variances of the two ensembles.
struct SpinEPRState {
  double v_minus = 1.0;  // 2 Var(Jx1 - Jx2) / N
  double v_plus = 1.0;   // 2 Var(Jy1 + Jy2) / N
  double mean_jz = 0.0;  // per ensemble, N/2 when fully pumped

  double inseparability() const { return v_minus + v_plus; }
};

/// Atomic inseparability and its three contributions:
///   I_at = coupling * I_f + ground_noise + emission_noise.
struct MappingResult {
  double i_at = 2.0;
  double coupling = 0.0;        // [2C/(1+2C)] [Gamma/((1+2C) gamma0~)]
  double ground_noise = 0.0;    // 2 gamma0 / gamma0~
  double emission_noise = 0.0;  // 2 Gamma / ((1+2C)^2 gamma0~)

  double noise() const { return ground_noise + emission_noise; }
};

inline MappingResult map_inseparability(const DerivedRates& rates, double field_inseparability) {
  if (!(field_inseparability > 0.0) || !std::isfinite(field_inseparability)) {
    throw std::invalid_argument("field inseparability must be positive");
  }
  const double e = rates.enhancement();
  const double g = rates.effective_pumping;
  MappingResult m;
  m.coupling = (2.0 * rates.cooperativity / e) * (g / (e * rates.gamma_tilde0));
  m.ground_noise = 2.0 * rates.gamma0 / rates.gamma_tilde0;
  m.emission_noise = 2.0 * g / (e * e * rates.gamma_tilde0);
  m.i_at = m.coupling * field_inseparability + m.noise();
  return m;
}

/// Spectral density (unnormalized, spin units) of one spin EPR combination
/// driven by a flat input density `input_density`: Lorentzian of half-width
/// gamma0~.
inline double spin_spectrum(const DerivedRates& rates, double input_density, double omega) {
  const double g = rates.gamma_tilde0;
  return (rates.beta_squared() * input_density + 2.0 * rates.diffusion) / (g * g + omega * omega);
}

namespace detail {

inline void check_density(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("input spectral density must be non-negative");
  }
}

}  // namespace detail

/// Spin EPR variances for flat input densities of X1 - X2 (`s_minus`) and
/// Y1 + Y2 (`s_plus`). The Lorentzian integral is done in closed form.
inline SpinEPRState map_variances_spectral(const DerivedRates& rates, double s_minus, double s_plus) {
  detail::check_density(s_minus);
  detail::check_density(s_plus);
  const double norm = 0.5 * rates.atom_number;
  auto variance = [&](double s) {
    return (rates.beta_squared() * s + 2.0 * rates.diffusion) / (2.0 * rates.gamma_tilde0) / norm;
  };
  return {variance(s_minus), variance(s_plus), norm};
}

using SpectralDensity = std::function<double(double)>;

/// As above for frequency-dependent input densities, integrated numerically.
/// The substitution w = gamma0~ tan(t) maps the Lorentzian onto a bounded
/// interval.
inline SpinEPRState map_variances_spectral(const DerivedRates& rates, const SpectralDensity& s_minus,
                                           const SpectralDensity& s_plus, double rel_tol = 1e-10) {
  const double g = rates.gamma_tilde0;
  const double norm = 0.5 * rates.atom_number;
  auto variance = [&](const SpectralDensity& s) {
    auto integrand = [&](double t) {
      const double w = g * std::tan(t);
      const double density = s(w);
      detail::check_density(density);
      // d w / (g^2 + w^2) = d t / g
      return (rates.beta_squared() * density + 2.0 * rates.diffusion) / g;
    };
    const double half_pi = 0.5 * std::numbers::pi;
    const double integral = quadrature::integrate(integrand, -half_pi, half_pi, rel_tol);
    return integral / (2.0 * std::numbers::pi) / norm;
  };
  return {variance(s_minus), variance(s_plus), norm};
}

/// Ratio of atomic to field entanglement of formation. The atomic state
/// being separable gives 0.
inline double mapping_fidelity(const DerivedRates& rates, double field_inseparability) {
  if (!(field_inseparability > 0.0 && field_inseparability < 2.0)) {
    throw std::invalid_argument("mapping fidelity needs entangled input (0 < I_f < 2)");
  }
  const double i_at = map_inseparability(rates, field_inseparability).i_at;
  return eof_symmetric(i_at) / eof_symmetric(field_inseparability);
}

struct PumpingBounds {
  double lower;  // Gamma_E
  double upper;
};

/// Gamma_E window in which gamma0 << gamma0~ << min(kappa, gamma) holds with
/// the template's strictness factor. Throws when the window is empty.
inline PumpingBounds regime_pumping_window(double cooperativity, const EnsembleParams& tmpl) {
  const double rho = tmpl.regime_strictness;
  const double e = 1.0 + 2.0 * cooperativity;
  const double lo_bw = rho * tmpl.gamma0;
  const double hi_bw = std::min(tmpl.kappa, tmpl.gamma) / rho;
  if (!(hi_bw > lo_bw)) {
    throw std::invalid_argument("empty regime window: gamma0 too large for the requested strictness");
  }
  return {(lo_bw - tmpl.gamma0) * e, (hi_bw - tmpl.gamma0) * e};
}

struct PumpingOptimum {
  double pumping_rate = 0.0;  // Gamma_E*
  double fidelity = 0.0;      // eta*
  bool unimodal = true;       // false: the grid argmax was used
  bool at_boundary = false;   // optimum sits on a window edge
};

/// Maximizes the mapping fidelity over the EIT pumping rate.
///
/// A 32-point log-spaced scan checks unimodality and brackets the maximum,
/// then golden-section search on log(Gamma_E) refines it to 1e-4 relative
/// tolerance. Without explicit bounds the regime window is used.
inline PumpingOptimum optimize_pumping(double cooperativity, double field_inseparability,
                                       EnsembleParams tmpl,
                                       std::optional<PumpingBounds> bounds = std::nullopt) {
  if (!(cooperativity >= 0.0)) throw std::invalid_argument("cooperativity must be non-negative");
  tmpl.scheme = PumpingScheme::Eit;
  const PumpingBounds b = bounds ? *bounds : regime_pumping_window(cooperativity, tmpl);
  if (!(b.lower > 0.0 && b.upper > b.lower)) {
    throw std::invalid_argument("empty pumping window");
  }
  auto eta = [&](double log_rate) {
    const auto params = EnsembleParams::from_cooperativity(cooperativity, std::exp(log_rate), tmpl);
    return mapping_fidelity(derive_rates(params), field_inseparability);
  };

  constexpr int kScan = 32;
  const double lo = std::log(b.lower);
  const double hi = std::log(b.upper);
  std::vector<double> xs(kScan), ys(kScan);
  for (int i = 0; i < kScan; ++i) {
    xs[i] = lo + (hi - lo) * i / (kScan - 1);
    ys[i] = eta(xs[i]);
  }
  const auto best = static_cast<int>(std::max_element(ys.begin(), ys.end()) - ys.begin());

  // Unimodal: non-decreasing up to the argmax, non-increasing after it.
  const double slack = 1e-12;
  bool unimodal = true;
  for (int i = 1; i <= best; ++i) unimodal &= ys[i] >= ys[i - 1] - slack;
  for (int i = best + 1; i < kScan; ++i) unimodal &= ys[i] <= ys[i - 1] + slack;

  PumpingOptimum out;
  out.unimodal = unimodal;
  if (!unimodal) {
    out.pumping_rate = std::exp(xs[best]);
    out.fidelity = ys[best];
    out.at_boundary = best == 0 || best == kScan - 1;
    return out;
  }

  double a = xs[std::max(best - 1, 0)];
  double c = xs[std::min(best + 1, kScan - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  // 1e-4 relative tolerance on Gamma_E is 1e-4 absolute on its logarithm.
  const double tol = 1e-4;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = eta(x1);
  double f2 = eta(x2);
  while (c - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      f2 = eta(x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      f1 = eta(x1);
    }
  }
  double x_best = f1 > f2 ? x1 : x2;
  double y_best = std::max(f1, f2);
  // Golden section never evaluates the bracket ends; a monotone objective
  // peaks exactly on the window edge.
  for (double edge : {lo, hi}) {
    if (std::abs(edge - x_best) <= 2.0 * tol) {
      const double y = eta(edge);
      if (y >= y_best) {
        x_best = edge;
        y_best = y;
      }
    }
  }
  out.pumping_rate = std::exp(x_best);
  out.fidelity = y_best;
  out.at_boundary = std::abs(x_best - lo) <= 2.0 * tol || std::abs(x_best - hi) <= 2.0 * tol;
  return out;
}

}  // namespace cvmem
