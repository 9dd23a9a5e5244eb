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

// Monte Carlo cross-check of the reduced spin dynamics.
//
// Each spin EPR combination, normalized by sqrt(N/2), is an
// Ornstein-Uhlenbeck process
//
//   dy = -gamma0~ y dt - (beta / sqrt(N/2)) dW_field + dW_atom,
//
// with <dW_field^2> = S dt (flat input density S) and
// <dW_atom^2> = 2D / (N/2) dt, integrated with Euler-Maruyama.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "cvmem/mapping.hpp"
#include "cvmem/parallel.hpp"

namespace cvmem {

struct TrajectoryConfig {
  double duration = 0.0;  // total simulated time
  double dt = 0.0;
  int n_traj = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 0;   // 0: hardware concurrency
  /// Variance of the normalized initial condition (0: start at the origin).
  double initial_variance = 0.0;
  /// Number of evenly spaced times at which the ensemble variance of the
  /// minus combination is recorded (0: none).
  int trace_points = 0;
};

struct TrajectoryResult {
  SpinEPRState state;      // steady-state estimates
  double se_minus = 0.0;   // standard error of v_minus
  double se_plus = 0.0;
  std::vector<double> trace_times;
  std::vector<double> trace_minus;  // ensemble variance of the minus combination

  double se_inseparability() const { return std::hypot(se_minus, se_plus); }
};

namespace detail {

struct TrajectorySample {
  double mean_sq_minus = 0.0;
  double mean_sq_plus = 0.0;
  std::vector<double> trace;  // y_minus^2 at the trace times
};

}  // namespace detail

/// Steady-state spin EPR variances from `n_traj` independent trajectories.
///
/// Every trajectory discards its first half as burn-in and time-averages y^2
/// over the second half; the spread of these averages gives the standard
/// error. Trajectory k draws from its own stream seeded by (seed, k), so the
/// result does not depend on the thread count.
inline TrajectoryResult simulate_trajectories(const DerivedRates& rates, double s_minus, double s_plus,
                                              const TrajectoryConfig& cfg) {
  detail::check_density(s_minus);
  detail::check_density(s_plus);
  const double g = rates.gamma_tilde0;
  if (!(g > 0.0)) throw std::invalid_argument("trajectory simulation needs gamma0~ > 0");
  if (!(cfg.dt > 0.0) || cfg.dt > 0.1 / g * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step must satisfy 0 < dt <= 0.1/gamma0~ = " << 0.1 / g << " (got " << cfg.dt << ")";
    throw std::invalid_argument(msg.str());
  }
  if (cfg.duration < 10.0 / g * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "duration must be at least 10/gamma0~ = " << 10.0 / g << " (got " << cfg.duration << ")";
    throw std::invalid_argument(msg.str());
  }
  if (cfg.n_traj < 100) throw std::invalid_argument("need at least 100 trajectories");
  if (cfg.initial_variance < 0.0) throw std::invalid_argument("initial variance must be non-negative");

  const double norm = 0.5 * rates.atom_number;
  const auto steps = static_cast<long>(std::llround(cfg.duration / cfg.dt));
  const long burn_in = steps / 2;
  const double sqrt_dt = std::sqrt(cfg.dt);
  const double field_gain = rates.beta / std::sqrt(norm);
  const double atom_sigma = std::sqrt(2.0 * rates.diffusion / norm) * sqrt_dt;
  // Field and atomic increments are independent Gaussians, so each step
  // draws their sum directly.
  const double sigma_minus = std::hypot(field_gain * std::sqrt(s_minus) * sqrt_dt, atom_sigma);
  const double sigma_plus = std::hypot(field_gain * std::sqrt(s_plus) * sqrt_dt, atom_sigma);
  const double decay = 1.0 - g * cfg.dt;

  std::vector<long> trace_steps;
  for (int i = 0; i < cfg.trace_points; ++i) {
    trace_steps.push_back(cfg.trace_points == 1 ? 0 : steps * i / (cfg.trace_points - 1));
  }

  auto run = [&](std::size_t k) {
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed & 0xffffffffu), cfg.seed >> 32,
                      static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(seq);
    boost::random::normal_distribution<double> normal(0.0, 1.0);  // ziggurat
    const double y0 = std::sqrt(cfg.initial_variance);
    double ym = y0 * normal(rng);
    double yp = y0 * normal(rng);
    detail::TrajectorySample sample;
    sample.trace.reserve(trace_steps.size());
    std::size_t next_trace = 0;
    double acc_m = 0.0, acc_p = 0.0;
    for (long n = 0; n <= steps; ++n) {
      while (next_trace < trace_steps.size() && trace_steps[next_trace] == n) {
        sample.trace.push_back(ym * ym);
        ++next_trace;
      }
      if (n > burn_in) {
        acc_m += ym * ym;
        acc_p += yp * yp;
      }
      if (n == steps) break;
      ym = decay * ym + sigma_minus * normal(rng);
      yp = decay * yp + sigma_plus * normal(rng);
    }
    const double samples = static_cast<double>(steps - burn_in);
    sample.mean_sq_minus = acc_m / samples;
    sample.mean_sq_plus = acc_p / samples;
    return sample;
  };

  const auto samples = parallel_map(static_cast<std::size_t>(cfg.n_traj), cfg.threads, run);

  auto mean_and_se = [&](auto member) {
    double sum = 0.0;
    for (const auto& s : samples) sum += s.*member;
    const double mean = sum / samples.size();
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.*member - mean) * (s.*member - mean);
    const double var = ss / (samples.size() - 1);
    return std::pair{mean, std::sqrt(var / samples.size())};
  };
  const auto [vm, sem] = mean_and_se(&detail::TrajectorySample::mean_sq_minus);
  const auto [vp, sep] = mean_and_se(&detail::TrajectorySample::mean_sq_plus);

  TrajectoryResult out;
  out.state = {vm, vp, norm};
  out.se_minus = sem;
  out.se_plus = sep;
  for (std::size_t i = 0; i < trace_steps.size(); ++i) {
    out.trace_times.push_back(trace_steps[i] * cfg.dt);
    double acc = 0.0;
    for (const auto& s : samples) acc += s.trace[i];
    out.trace_minus.push_back(acc / samples.size());
  }
  return out;
}

}  // namespace cvmem
