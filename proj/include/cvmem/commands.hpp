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

// Table producers behind the command-line subcommands. Rows are computed in
// parallel and collected in sweep order, so output does not depend on the
// thread count.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cvmem/config.hpp"
#include "cvmem/csv.hpp"
#include "cvmem/full_model.hpp"
#include "cvmem/mapping.hpp"
#include "cvmem/parallel.hpp"
#include "cvmem/readout.hpp"
#include "cvmem/validation.hpp"

namespace cvmem {

/// Atomic vs field inseparability over the I_f sweep. The full-model
/// columns are only present when `full` is set.
inline Table cmd_map(const RunConfig& cfg, bool full = false, unsigned threads = 0) {
  const auto rates = derive_rates(cfg.params);
  const auto values = cfg.i_f_sweep.values();
  Table t;
  t.columns = {"epr_correlation", "i_f", "i_at_simple"};
  if (full) t.columns.push_back("i_at_full");
  t.columns.insert(t.columns.end(), {"eof_field", "eof_atoms_simple"});
  if (full) t.columns.push_back("eof_atoms_full");

  const auto rows = parallel_map(values.size(), threads, [&](std::size_t k) {
    const double i_f = values[k];
    const double simple = map_inseparability(rates, i_f).i_at;
    std::vector<double> row = {2.0 - i_f, i_f, simple};
    double i_full = 0.0;
    if (full) {
      i_full = full_map_inseparability(cfg.params, i_f).i_at;
      row.push_back(i_full);
    }
    row.push_back(eof_symmetric(i_f));
    row.push_back(eof_symmetric(simple));
    if (full) row.push_back(eof_symmetric(i_full));
    return row;
  });
  for (auto& r : rows) t.add_row(r);
  return t;
}

/// Optimized mapping fidelity over the cooperativity sweep. Rows whose
/// pumping window is empty get NaN entries and a message in `notes`.
inline Table cmd_fidelity(const RunConfig& cfg, unsigned threads = 0, std::vector<std::string>* notes = nullptr) {
  const auto cs = cfg.c_sweep.values();
  Table t;
  t.columns = {"c", "gamma_e_star", "eta_star"};
  struct Row {
    std::vector<double> values;
    std::string note;
  };
  const auto rows = parallel_map(cs.size(), threads, [&](std::size_t k) {
    const double c = cs[k];
    try {
      const auto opt = optimize_pumping(c, cfg.fidelity_i_f, cfg.params, cfg.pumping_bounds);
      Row r{{c, opt.pumping_rate, opt.fidelity}, {}};
      if (!opt.unimodal) r.note = "C = " + std::to_string(c) + ": fidelity not unimodal, grid maximum reported";
      return r;
    } catch (const std::invalid_argument& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return Row{{c, nan, nan}, "C = " + std::to_string(c) + ": " + e.what()};
    }
  });
  for (const auto& r : rows) {
    t.add_row(r.values);
    if (notes && !r.note.empty()) notes->push_back(r.note);
  }
  return t;
}

/// Analyzer powers of both homodyne channels after mapping an EPR field of
/// inseparability `stored_i_f` (2: coherent atoms).
inline Table cmd_readout(const RunConfig& cfg) {
  const auto rates = derive_rates(cfg.params);
  const double i_at = map_inseparability(rates, cfg.stored_i_f).i_at;
  const SpinEPRState stored{i_at / 2.0, i_at / 2.0, rates.atom_number / 2.0};
  const auto r = simulate_readout(rates, stored, cfg.readout_config(rates));
  Table t;
  t.columns = {"t", "p1", "p2", "n_cal", "s_sig", "i_measured_at_0"};
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.add_row({r.times[k], r.p1[k], r.p2[k], r.shot_noise, r.signal, r.i_measured});
  }
  return t;
}

/// Stage-by-stage inseparability over the storage-time sweep.
inline Table cmd_end_to_end(const RunConfig& cfg, unsigned threads = 0) {
  const auto rates = derive_rates(cfg.params);
  auto rcfg = cfg.readout_config(rates);
  const auto ts = cfg.t_store_sweep.values();
  Table t;
  t.columns = {"t_store", "i_f", "i_at_stored", "i_at_after_storage", "i_measured", "eta_overall"};
  const auto rows = parallel_map(ts.size(), threads, [&](std::size_t k) {
    const auto s = end_to_end(cfg.params, cfg.protocol_i_f, ts[k], rcfg);
    return std::vector<double>{ts[k], s.i_f, s.i_at_stored, s.i_at_after_storage, s.i_measured, s.eta_overall};
  });
  for (auto& r : rows) t.add_row(r);
  return t;
}

inline ValidationReport cmd_validate(const RunConfig& cfg, unsigned threads = 0) { return run_validation(cfg, threads); }

}  // namespace cvmem
