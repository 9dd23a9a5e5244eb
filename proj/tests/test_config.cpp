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

#include <string>

#include <gtest/gtest.h>

#include "cvmem/config.hpp"

namespace cvmem {
namespace {

int error_line(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

TEST(RunConfig, EmptyGivesDefaults) {
  const auto c = parse_run_config("");
  EXPECT_NEAR(c.params.cooperativity(), 100.0, 1e-12);
  EXPECT_NEAR(c.params.pumping_rate(), 15.0, 1e-12);
  EXPECT_EQ(c.params.kappa, 2.0);
  EXPECT_EQ(c.params.gamma0, 1e-3);
  EXPECT_EQ(c.precision, 12);
  EXPECT_EQ(c.fidelity_i_f, 1.0);
  EXPECT_FALSE(c.pumping_bounds.has_value());
}

TEST(RunConfig, ParsesEverySection) {
  const auto c = parse_run_config(R"(
# full example
[model]
scheme = raman
raman_detuning = 40
raman_model = direct
gamma0 = 2e-3
kappa = 3
cooperativity = 50     # inline comment
pumping_rate = 0.01
atom_number = 1e7
transmission = 0.05
regime_strictness = 5

[map]
i_f = 0.1, 1.9, 10

[fidelity]
c = 1, 100, 5, log
i_f = 0.5
pumping_min = 0.1
pumping_max = 10

[readout]
bandwidth_product = 30
t = 0, 10, 11
quadrature_nodes = 128
lo_profile = flat
stored_i_f = 0.8

[protocol]
i_f = 0.7
t_store = 0, 100, 3

[mc]
n_traj = 500
dt = 0.01
duration = 20
seed = 99

[output]
directory = results
precision = 8
)");
  EXPECT_EQ(c.params.scheme, PumpingScheme::Raman);
  EXPECT_EQ(c.params.raman_model, RamanDecayModel::DirectSubstitution);
  EXPECT_NEAR(c.params.cooperativity(), 50.0, 1e-10);
  EXPECT_NEAR(c.params.pumping_rate(), 0.01, 1e-14);
  EXPECT_EQ(c.params.kappa, 3.0);
  EXPECT_EQ(c.i_f_sweep.count, 10);
  EXPECT_TRUE(c.c_sweep.log);
  EXPECT_EQ(c.c_sweep.values().back(), 100.0);
  EXPECT_NEAR(c.c_sweep.values()[2], 10.0, 1e-12);
  EXPECT_EQ(c.fidelity_i_f, 0.5);
  ASSERT_TRUE(c.pumping_bounds.has_value());
  EXPECT_EQ(c.pumping_bounds->upper, 10.0);
  EXPECT_EQ(c.quadrature_nodes, 128);
  EXPECT_EQ(c.lo_shape, LoShape::Flat);
  EXPECT_EQ(c.t_store_sweep.values(), (std::vector<double>{0.0, 50.0, 100.0}));
  EXPECT_EQ(c.n_traj, 500);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.directory, "results");
  EXPECT_EQ(c.precision, 8);
}

TEST(RunConfig, MicroscopicParameters) {
  const auto c = parse_run_config("[model]\ncoupling = 0.01\ncontrol_rabi = 2\natom_number = 1e6\n");
  EXPECT_NEAR(c.params.cooperativity(), 0.01 * 0.01 * 1e6 / 0.1, 1e-9);
  EXPECT_NEAR(c.params.pumping_rate(), 4.0, 1e-14);
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[model]\ncooperativity = 10\ncooperatvity = 5\n"), 3);
  EXPECT_EQ(error_line("\n[modle]\n"), 2);
  EXPECT_EQ(error_line("[model]\nkappa = 1\nkappa = 2\n"), 3);
  EXPECT_EQ(error_line("[model]\nkappa = 1.0x\n"), 2);
  EXPECT_EQ(error_line("[model]\nkappa = -1\n"), 2);
  EXPECT_EQ(error_line("[model]\nkappa\n"), 2);
  EXPECT_EQ(error_line("kappa = 1\n"), 1);
  EXPECT_EQ(error_line("[map]\ni_f = 0.1, 2\n"), 2);
  EXPECT_EQ(error_line("[map]\ni_f = 2, 0.1, 3\n"), 2);
  EXPECT_EQ(error_line("[fidelity]\nc = 0, 10, 3, log\n"), 2);
  EXPECT_EQ(error_line("[mc]\nn_traj = 10\n"), 2);
  EXPECT_EQ(error_line("[mc]\ndt = 0.5\n"), 2);
  EXPECT_EQ(error_line("[readout]\nlo_profile = gaussian\n"), 2);
  EXPECT_EQ(error_line("[model]\nscheme = raman\ncooperativity = 10\n"), 3);
  EXPECT_EQ(error_line("[model]\ncooperativity = 10\ncoupling = 0.1\n"), 3);
  EXPECT_EQ(error_line("[fidelity]\npumping_min = 1\n"), 2);
  EXPECT_EQ(error_line("[output]\nprecision = 30\n"), 2);
  EXPECT_EQ(error_line("[map]\n[map]\n"), 2);
}

TEST(RunConfig, MissingFileIsConfigError) {
  EXPECT_THROW(load_run_config("/nonexistent/cvmem.ini"), ConfigError);
}

TEST(Sweep, LinearAndLogValues) {
  const Sweep lin{0.2, 2.0, 19, false};
  const auto v = lin.values();
  EXPECT_EQ(v.size(), 19u);
  EXPECT_EQ(v.front(), 0.2);
  EXPECT_EQ(v.back(), 2.0);
  EXPECT_NEAR(v[8], 1.0, 1e-15);
  const Sweep single{3.0, 3.0, 1, false};
  EXPECT_EQ(single.values(), std::vector<double>{3.0});
  const Sweep lg{1.0, 1000.0, 4, true};
  EXPECT_NEAR(lg.values()[1], 10.0, 1e-12);
}

}  // namespace
}  // namespace cvmem
