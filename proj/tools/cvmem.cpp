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

// Command-line driver. Exit codes: 0 success, 1 configuration error,
// 2 numerical failure, 3 validation failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cvmem.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kValidation = 3 };

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool full = false;
};

cvmem::RunConfig load(const Options& o) {
  auto cfg = o.config_path.empty() ? cvmem::default_run_config() : cvmem::load_run_config(o.config_path);
  if (o.out_dir) cfg.directory = *o.out_dir;
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

void warn_regime(const cvmem::RunConfig& cfg) {
  for (const auto& w : cvmem::derive_rates(cfg.params).regime.warnings) std::cerr << "warning: " << w << '\n';
}

void emit(const cvmem::RunConfig& cfg, const std::string& name, const cvmem::Table& table) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.directory, ec);
  if (ec) throw cvmem::ConfigError("cannot create output directory '" + cfg.directory + "': " + ec.message());
  const auto path = (std::filesystem::path(cfg.directory) / name).string();
  try {
    cvmem::write_csv(path, table, cfg.precision);
  } catch (const std::runtime_error& e) {
    throw cvmem::ConfigError(e.what());
  }
  std::cout << "wrote " << path << " (" << table.rows.size() << " rows)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement mapping into atomic ensembles: sweeps, readout and validation"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "Run configuration file (default: C = 100, Gamma_E = 15, kappa = 2, gamma0 = 1e-3)");
  app.add_option("--out", o.out_dir, "Output directory (overrides [output] directory)");
  app.add_option("--seed", o.seed, "Random seed (overrides [mc] seed)");
  app.add_option("--threads", o.threads, "Worker threads (0: all cores)");
  app.add_flag("--full", o.full, "Add full three-level model columns to the map output");

  auto* map = app.add_subcommand("map", "Atomic vs field inseparability (fig2a.csv)");
  auto* fidelity = app.add_subcommand("fidelity", "Optimized mapping fidelity vs cooperativity (fig2b.csv)");
  auto* readout = app.add_subcommand("readout", "Homodyne readout of the stored state (readout.csv)");
  auto* protocol = app.add_subcommand("end-to-end", "Mapping, storage and readout vs storage time (protocol.csv)");
  auto* validate = app.add_subcommand("validate", "Run the invariant suite");
  for (auto* sub : {map, fidelity, readout, protocol, validate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const auto cfg = load(o);
    if (*map) {
      warn_regime(cfg);
      emit(cfg, "fig2a.csv", cvmem::cmd_map(cfg, o.full, o.threads));
    } else if (*fidelity) {
      std::vector<std::string> notes;
      const auto table = cvmem::cmd_fidelity(cfg, o.threads, &notes);
      for (const auto& n : notes) std::cerr << "warning: " << n << '\n';
      emit(cfg, "fig2b.csv", table);
    } else if (*readout) {
      warn_regime(cfg);
      emit(cfg, "readout.csv", cvmem::cmd_readout(cfg));
    } else if (*protocol) {
      warn_regime(cfg);
      emit(cfg, "protocol.csv", cvmem::cmd_end_to_end(cfg, o.threads));
    } else if (*validate) {
      const auto report = cvmem::cmd_validate(cfg, o.threads);
      std::cout << report.text();
      return report.passed() ? kOk : kValidation;
    }
  } catch (const cvmem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kConfig;
  } catch (const cvmem::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
