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

#include <cmath>

#include <gtest/gtest.h>

#include "cvmem/trajectories.hpp"

namespace cvmem {
namespace {

DerivedRates default_rates() { return derive_rates(EnsembleParams::from_cooperativity(100.0, 15.0)); }

TrajectoryConfig quick(const DerivedRates& r) {
  TrajectoryConfig c;
  c.dt = 0.005 / r.gamma_tilde0;
  c.duration = 20.0 / r.gamma_tilde0;
  c.n_traj = 400;
  c.seed = 17;
  return c;
}

TEST(Trajectories, AgreeWithClosedForm) {
  const auto r = default_rates();
  for (double i_f : {0.3, 1.0, 2.0}) {
    const auto mc = simulate_trajectories(r, i_f, i_f, quick(r));
    const double exact = map_inseparability(r, i_f).i_at;
    EXPECT_LT(std::abs(mc.state.inseparability() - exact), 4.0 * mc.se_inseparability()) << "I_f = " << i_f;
    EXPECT_LT(mc.se_inseparability(), 0.02 * exact);
  }
}

TEST(Trajectories, DeterministicAcrossThreadCounts) {
  const auto r = default_rates();
  auto c = quick(r);
  c.threads = 1;
  const auto a = simulate_trajectories(r, 0.8, 1.2, c);
  c.threads = 4;
  const auto b = simulate_trajectories(r, 0.8, 1.2, c);
  EXPECT_EQ(a.state.v_minus, b.state.v_minus);
  EXPECT_EQ(a.state.v_plus, b.state.v_plus);
  EXPECT_EQ(a.se_minus, b.se_minus);
  c.seed = 18;
  const auto d = simulate_trajectories(r, 0.8, 1.2, c);
  EXPECT_NE(a.state.v_minus, d.state.v_minus);
}

TEST(Trajectories, RelaxFromOriginAtTwiceTheBandwidth) {
  const auto r = default_rates();
  auto c = quick(r);
  c.n_traj = 2000;
  c.trace_points = 21;
  const auto mc = simulate_trajectories(r, 1.0, 1.0, c);
  const double v_inf = map_variances_spectral(r, 1.0, 1.0).v_minus;
  ASSERT_EQ(mc.trace_times.size(), 21u);
  EXPECT_EQ(mc.trace_minus.front(), 0.0);
  // Ensemble variance of n_traj Gaussian samples has relative spread sqrt(2/n).
  const double tol = 4.0 * std::sqrt(2.0 / c.n_traj);
  for (std::size_t i = 1; i < mc.trace_times.size(); ++i) {
    const double expected = v_inf * (1.0 - std::exp(-2.0 * r.gamma_tilde0 * mc.trace_times[i]));
    EXPECT_NEAR(mc.trace_minus[i], expected, tol * expected) << "t = " << mc.trace_times[i];
  }
}

TEST(Trajectories, RejectsBadConfiguration) {
  const auto r = default_rates();
  auto c = quick(r);
  c.dt = 0.2 / r.gamma_tilde0;
  EXPECT_THROW(simulate_trajectories(r, 1, 1, c), std::invalid_argument);
  c = quick(r);
  c.duration = 5.0 / r.gamma_tilde0;
  EXPECT_THROW(simulate_trajectories(r, 1, 1, c), std::invalid_argument);
  c = quick(r);
  c.n_traj = 50;
  EXPECT_THROW(simulate_trajectories(r, 1, 1, c), std::invalid_argument);
  EXPECT_THROW(simulate_trajectories(r, -1, 1, quick(r)), std::invalid_argument);
}

TEST(ParallelMap, OrderedResultsAndErrorPropagation) {
  const auto out = parallel_map(100, 8, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map(10, 4,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace cvmem
