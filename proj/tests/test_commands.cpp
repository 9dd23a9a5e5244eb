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

#include <clocale>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "cvmem/commands.hpp"

namespace cvmem {
namespace {

double at(const Table& t, std::size_t row, const std::string& col) { return t.rows[row][t.column(col)]; }

TEST(CmdMap, DefaultColumnsAndValues) {
  const auto cfg = default_run_config();
  const auto t = cmd_map(cfg);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"epr_correlation", "i_f", "i_at_simple", "eof_field",
                                                 "eof_atoms_simple"}));
  ASSERT_EQ(t.rows.size(), 19u);
  EXPECT_NEAR(at(t, 18, "i_at_simple"), 2.0, 1e-12);
  EXPECT_EQ(at(t, 18, "epr_correlation"), 0.0);
  EXPECT_NEAR(at(t, 8, "i_at_simple"), 1.018132153520929, 1e-12);
  EXPECT_NEAR(at(t, 8, "eof_field"), 0.566165626622601408, 1e-12);
}

TEST(CmdMap, FullColumnsOptIn) {
  auto cfg = default_run_config();
  cfg.i_f_sweep = {0.5, 2.0, 4, false};
  const auto t = cmd_map(cfg, true, 2);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"epr_correlation", "i_f", "i_at_simple", "i_at_full", "eof_field",
                                                 "eof_atoms_simple", "eof_atoms_full"}));
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    EXPECT_NEAR(at(t, k, "i_at_full"), full_map_inseparability(cfg.params, at(t, k, "i_f")).i_at, 1e-14);
  }
  EXPECT_NEAR(at(t, 3, "i_at_full"), 2.0, 1e-9);
}

TEST(CmdFidelity, MonotoneAndLimits) {
  auto cfg = default_run_config();
  cfg.c_sweep = {0.1, 1000.0, 9, true};
  std::vector<std::string> notes;
  const auto t = cmd_fidelity(cfg, 0, &notes);
  EXPECT_TRUE(notes.empty());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"c", "gamma_e_star", "eta_star"}));
  for (std::size_t k = 1; k < t.rows.size(); ++k) EXPECT_GE(at(t, k, "eta_star"), at(t, k - 1, "eta_star") - 1e-12);
  EXPECT_LT(at(t, 0, "eta_star"), 0.2);
  EXPECT_GE(at(t, 6, "eta_star"), 0.95);  // C = 100
}

TEST(CmdFidelity, InfeasibleRowsReported) {
  auto cfg = default_run_config();
  cfg.params.gamma0 = 0.05;
  cfg.c_sweep = {1.0, 10.0, 2, false};
  std::vector<std::string> notes;
  const auto t = cmd_fidelity(cfg, 1, &notes);
  EXPECT_EQ(notes.size(), 2u);
  EXPECT_TRUE(std::isnan(at(t, 0, "eta_star")));
}

TEST(CmdReadout, CoherentAtomsSitAtShotNoise) {
  auto cfg = default_run_config();
  cfg.stored_i_f = 2.0;
  const auto t = cmd_readout(cfg);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "p1", "p2", "n_cal", "s_sig", "i_measured_at_0"}));
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    EXPECT_NEAR(at(t, k, "p1"), at(t, k, "n_cal"), 1e-15);
    EXPECT_NEAR(at(t, k, "p2"), at(t, k, "n_cal"), 1e-15);
  }
}

TEST(CmdReadout, StoredEntanglementRecovers) {
  const auto cfg = default_run_config();
  const auto t = cmd_readout(cfg);
  const auto rates = derive_rates(cfg.params);
  const double stored = map_inseparability(rates, cfg.stored_i_f).i_at;
  EXPECT_NEAR(at(t, 0, "i_measured_at_0"), stored, 0.02 * stored);
  const double t1 = at(t, 10, "t");
  const double rate =
      std::log((at(t, 0, "n_cal") - at(t, 0, "p1")) / (at(t, 10, "n_cal") - at(t, 10, "p1"))) / t1;
  EXPECT_NEAR(rate, 2.0 * rates.gamma_tilde0, 1e-9);
}

TEST(CmdEndToEnd, ConsistentWithMapAndReadout) {
  const auto cfg = default_run_config();
  const auto t = cmd_end_to_end(cfg, 3);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t_store", "i_f", "i_at_stored", "i_at_after_storage",
                                                 "i_measured", "eta_overall"}));
  EXPECT_NEAR(at(t, 0, "i_measured"), at(cmd_readout(cfg), 0, "i_measured_at_0"), 1e-12);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_GT(at(t, k, "i_measured"), at(t, k - 1, "i_measured"));
    EXPECT_LT(at(t, k, "i_measured"), 2.0);
  }
  // (2 - I) halves every ln2 / (2 gamma0).
  const double d0 = 2.0 - at(t, 0, "i_measured");
  const double d = 2.0 - at(t, 3, "i_measured");
  const double half_life = std::log(2.0) * at(t, 3, "t_store") / std::log(d0 / d);
  EXPECT_NEAR(half_life, std::log(2.0) / (2.0 * cfg.params.gamma0), 1e-9 * half_life);
}

TEST(Csv, FormatAndDeterminism) {
  auto cfg = default_run_config();
  const std::string a = to_csv(cmd_map(cfg, false, 1));
  const std::string b = to_csv(cmd_map(cfg, false, 8));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "epr_correlation,i_f,i_at_simple,eof_field,eof_atoms_simple");
  Table t{{"x"}, {}};
  t.add_row({1.0 / 3.0});
  EXPECT_EQ(to_csv(t), "x\n0.333333333333\n");
  EXPECT_EQ(to_csv(t, 4), "x\n0.3333\n");
  EXPECT_THROW(t.add_row({1.0, 2.0}), std::invalid_argument);
}

TEST(Csv, DecimalPointIndependentOfLocale) {
  Table t{{"x"}, {{2.5}}};
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    EXPECT_EQ(to_csv(t), "x\n2.5\n");
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
  EXPECT_EQ(to_csv(t), "x\n2.5\n");
}

TEST(CmdValidate, DefaultParametersPass) {
  auto cfg = default_run_config();
  cfg.n_traj = 400;
  const auto report = cmd_validate(cfg);
  EXPECT_TRUE(report.passed()) << report.text();
  EXPECT_TRUE(report.warnings.empty());
}

TEST(CmdValidate, BrokenRegimeWarnsButHardChecksPass) {
  auto cfg = default_run_config();
  cfg.params = EnsembleParams::from_cooperativity(100.0, 1e-6);
  cfg.n_traj = 400;
  const auto report = cmd_validate(cfg);
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_TRUE(report.passed()) << report.text();
  EXPECT_NE(report.text().find("WARN"), std::string::npos);
}

TEST(CmdValidate, SeededReportReproducible) {
  auto cfg = default_run_config();
  cfg.n_traj = 200;
  cfg.seed = 5;
  EXPECT_EQ(cmd_validate(cfg, 1).text(), cmd_validate(cfg, 4).text());
}

}  // namespace
}  // namespace cvmem
