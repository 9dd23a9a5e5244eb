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

// Physical parameters of one cavity + atomic ensemble and the rates derived
// from them. All rates are in units of the optical dipole decay rate, so
// gamma = 1 in every shipped configuration.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvmem {

enum class PumpingScheme { Eit, Raman };

/// How the Raman pumping rate Gamma_R = gamma Omega^2 / Delta^2 enters the
/// reduced equations. Only the EIT form is established; both Raman variants
/// are modelling choices.
enum class RamanDecayModel {
  /// gamma0~ = gamma0 + (1 + 2C) Gamma_R, i.e. the validity window
  /// gamma0 << (1 + 2C) Gamma_R << kappa, gamma is the memory bandwidth window.
  CooperativeEnhanced,
  /// Gamma_R replaces Gamma_E everywhere: gamma0~ = gamma0 + Gamma_R / (1 + 2C).
  DirectSubstitution,
};

struct EnsembleParams {
  double gamma = 1.0;           // optical dipole decay
  double gamma0 = 1e-3;         // ground-state coherence decay
  double kappa = 2.0;           // cavity field decay (bandwidth)
  double coupling = 0.0;        // single-atom coupling g
  double atom_number = 1e6;     // N
  double transmission = 0.1;    // coupling mirror transmission T
  double control_rabi = 0.0;    // Omega
  PumpingScheme scheme = PumpingScheme::Eit;
  double raman_detuning = 0.0;  // one-photon detuning Delta (Raman only)
  RamanDecayModel raman_model = RamanDecayModel::CooperativeEnhanced;
  double regime_strictness = 10.0;  // factor read as "much less than"

  /// Parameters with prescribed cooperativity C = g^2 N / (T gamma) and
  /// pumping rate (Gamma_E for EIT, Gamma_R for Raman). The Raman scheme
  /// requires a non-zero `raman_detuning` in `base`.
  static EnsembleParams from_cooperativity(double cooperativity, double pumping_rate);
  static EnsembleParams from_cooperativity(double cooperativity, double pumping_rate,
                                           EnsembleParams base) {
    if (!(cooperativity >= 0.0) || !(pumping_rate >= 0.0)) {
      throw std::invalid_argument("cooperativity and pumping rate must be non-negative");
    }
    base.coupling = std::sqrt(cooperativity * base.transmission * base.gamma / base.atom_number);
    if (base.scheme == PumpingScheme::Eit) {
      base.control_rabi = std::sqrt(pumping_rate * base.gamma);
    } else {
      if (!(base.raman_detuning != 0.0)) {
        throw std::invalid_argument("Raman scheme needs a non-zero one-photon detuning");
      }
      base.control_rabi = std::abs(base.raman_detuning) * std::sqrt(pumping_rate / base.gamma);
    }
    base.validate();
    return base;
  }

  double cooperativity() const { return coupling * coupling * atom_number / (transmission * gamma); }

  /// Gamma_E = Omega^2 / gamma (EIT) or Gamma_R = gamma Omega^2 / Delta^2 (Raman).
  double pumping_rate() const {
    if (scheme == PumpingScheme::Eit) return control_rabi * control_rabi / gamma;
    return gamma * control_rabi * control_rabi / (raman_detuning * raman_detuning);
  }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(what);
    };
    require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
    require(gamma0 > 0.0 && std::isfinite(gamma0), "gamma0 must be positive");
    require(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive");
    require(coupling >= 0.0 && std::isfinite(coupling), "coupling must be non-negative");
    require(atom_number >= 1.0 && std::isfinite(atom_number), "atom number must be at least 1");
    require(transmission > 0.0 && transmission <= 1.0, "transmission must lie in (0, 1]");
    require(control_rabi >= 0.0 && std::isfinite(control_rabi), "control Rabi frequency must be non-negative");
    require(regime_strictness >= 1.0, "regime strictness must be at least 1");
    if (scheme == PumpingScheme::Raman) {
      require(raman_detuning != 0.0 && std::isfinite(raman_detuning),
              "Raman scheme needs a non-zero one-photon detuning");
    }
  }
};

inline EnsembleParams EnsembleParams::from_cooperativity(double cooperativity, double pumping_rate) {
  return from_cooperativity(cooperativity, pumping_rate, EnsembleParams{});
}

struct RegimeReport {
  double lower_ratio = 0.0;  // gamma0~ / gamma0 (EIT) or (1+2C) Gamma_R / gamma0 (Raman)
  double upper_ratio = 0.0;  // min(kappa, gamma) / gamma0~ or min(kappa, gamma) / ((1+2C) Gamma_R)
  std::vector<std::string> warnings;

  bool ok() const { return warnings.empty(); }
};

struct DerivedRates {
  double gamma = 1.0;
  double gamma0 = 0.0;
  double kappa = 0.0;
  double cooperativity = 0.0;
  double pumping_rate = 0.0;    // Gamma_E (EIT) or Gamma_R (Raman)
  double effective_pumping = 0.0;  // rate entering the reduced equations in place of Gamma_E
  double gamma_tilde0 = 0.0;    // pump-broadened ground-state decay
  double beta = 0.0;            // field-to-spin coupling
  double atom_number = 1.0;
  double diffusion = 0.0;       // Langevin spectral density per spin component per ensemble
  double memory_bandwidth = 0.0;
  double storage_lifetime = 0.0;
  RegimeReport regime;

  double beta_squared() const { return beta * beta; }
  double enhancement() const { return 1.0 + 2.0 * cooperativity; }
};

/// Reduced-model rates:
///   gamma0~ = gamma0 + Gamma/(1+2C),  beta^2 = N C Gamma/(1+2C)^2,
///   D = (N/2) [gamma0 + Gamma/(1+2C)^2],
/// with Gamma the effective pumping rate of the chosen scheme.
inline DerivedRates derive_rates(const EnsembleParams& p) {
  p.validate();
  DerivedRates r;
  r.gamma = p.gamma;
  r.gamma0 = p.gamma0;
  r.kappa = p.kappa;
  r.atom_number = p.atom_number;
  r.cooperativity = p.cooperativity();
  r.pumping_rate = p.pumping_rate();
  const double e = r.enhancement();
  if (p.scheme == PumpingScheme::Eit || p.raman_model == RamanDecayModel::DirectSubstitution) {
    r.effective_pumping = r.pumping_rate;
  } else {
    r.effective_pumping = e * e * r.pumping_rate;
  }
  r.gamma_tilde0 = r.gamma0 + r.effective_pumping / e;
  r.beta = std::sqrt(r.atom_number * r.cooperativity * r.effective_pumping) / e;
  r.diffusion = 0.5 * r.atom_number * (r.gamma0 + r.effective_pumping / (e * e));
  r.memory_bandwidth = r.gamma_tilde0;
  r.storage_lifetime = 1.0 / r.gamma0;

  const double fast = std::min(p.kappa, p.gamma);
  const double rho = p.regime_strictness;
  const double slow =
      p.scheme == PumpingScheme::Eit ? r.gamma_tilde0 : e * r.pumping_rate;
  const char* slow_name = p.scheme == PumpingScheme::Eit ? "gamma0~" : "(1+2C) Gamma_R";
  r.regime.lower_ratio = slow / r.gamma0;
  r.regime.upper_ratio = slow > 0.0 ? fast / slow : std::numeric_limits<double>::infinity();
  if (r.regime.lower_ratio < rho) {
    std::ostringstream msg;
    msg << slow_name << " / gamma0 = " << r.regime.lower_ratio << " < " << rho
        << " (ground-state decoherence not negligible)";
    r.regime.warnings.push_back(msg.str());
  }
  if (r.regime.upper_ratio < rho) {
    std::ostringstream msg;
    msg << "min(kappa, gamma) / " << slow_name << " = " << r.regime.upper_ratio << " < " << rho
        << " (adiabatic elimination questionable)";
    r.regime.warnings.push_back(msg.str());
  }
  return r;
}

/// EIT pumping rate Gamma_E that yields the memory bandwidth `gamma_tilde0`
/// at cooperativity C.
inline double pumping_for_bandwidth(double cooperativity, double gamma0, double gamma_tilde0) {
  if (!(gamma_tilde0 >= gamma0)) {
    throw std::invalid_argument("memory bandwidth cannot be below gamma0");
  }
  return (gamma_tilde0 - gamma0) * (1.0 + 2.0 * cooperativity);
}

inline const char* to_string(PumpingScheme s) { return s == PumpingScheme::Eit ? "eit" : "raman"; }

}  // namespace cvmem
