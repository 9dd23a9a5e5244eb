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

// Run configuration: a strict key = value format with [section] headers.
//
//   # comment
//   [model]
//   cooperativity = 100
//   pumping_rate = 15
//   [map]
//   i_f = 0.2, 2, 19        # start, stop, count
//   [fidelity]
//   c = 0.1, 1000, 20, log  # log-spaced
//
// Unknown sections or keys, duplicates and malformed numbers are errors that
// carry the offending line number. All rates are in units of gamma.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvmem/errors.hpp"
#include "cvmem/params.hpp"
#include "cvmem/readout.hpp"

namespace cvmem {

/// Evenly spaced values in [start, stop], linear or logarithmic.
struct Sweep {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool log = false;

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                        : start + f * (stop - start));
    }
    // Pin the end point so that e.g. I_f = 2 is hit exactly.
    if (count > 1) out.back() = stop;
    return out;
  }
};

enum class LoShape { Matched, Flat };

struct RunConfig {
  // [model]
  EnsembleParams params;  // default: C = 100, kappa = 2, gamma0 = 1e-3, Gamma_E = 15

  // [map]
  Sweep i_f_sweep{0.2, 2.0, 19, false};

  // [fidelity]
  Sweep c_sweep{0.1, 1000.0, 20, true};
  double fidelity_i_f = 1.0;
  std::optional<PumpingBounds> pumping_bounds;  // default: regime window

  // [readout]
  double bandwidth_product = 100.0;  // gamma0~ T0
  Sweep t_sweep{0.0, 25.0, 26, false};
  int quadrature_nodes = 256;
  LoShape lo_shape = LoShape::Matched;
  double stored_i_f = 1.0;  // field inseparability mapped before readout

  // [protocol]
  double protocol_i_f = 1.0;
  Sweep t_store_sweep{0.0, 3000.0, 31, false};

  // [mc]  dt and duration in units of 1/gamma0~
  int n_traj = 2000;
  double mc_dt = 0.002;
  double mc_duration = 50.0;
  std::uint64_t seed = 1;

  // [output]
  std::string directory = ".";
  int precision = 12;

  ReadoutConfig readout_config(const DerivedRates& rates) const {
    auto cfg = ReadoutConfig::for_bandwidth_product(rates, bandwidth_product, t_sweep.values());
    cfg.quadrature_nodes = quadrature_nodes;
    if (lo_shape == LoShape::Flat) cfg.lo_profile = [](double) { return 1.0; };
    return cfg;
  }
};

inline RunConfig default_run_config() {
  RunConfig c;
  c.params = EnsembleParams::from_cooperativity(100.0, 15.0);
  return c;
}

namespace detail {

struct ConfigEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

using ConfigSections = std::map<std::string, std::map<std::string, ConfigEntry>>;

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) return false;
  }
  return true;
}

inline ConfigSections parse_sections(std::istream& in) {
  static const std::set<std::string> known = {"model", "map", "fidelity", "readout", "protocol", "mc", "output"};
  ConfigSections sections;
  std::string current;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("malformed section header '" + text + "'", line);
      current = trim(text.substr(1, text.size() - 2));
      if (!known.count(current)) throw ConfigError("unknown section [" + current + "]", line);
      if (sections.count(current)) throw ConfigError("duplicate section [" + current + "]", line);
      sections[current];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value, got '" + text + "'", line);
    if (current.empty()) throw ConfigError("key outside of any section", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError("invalid key '" + key + "'", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    auto& keys = sections[current];
    if (keys.count(key)) {
      throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(keys[key].line) + ")",
                        line);
    }
    keys[key] = {value, line, false};
  }
  return sections;
}

inline double parse_double(const std::string& text, int line, const std::string& key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError("'" + key + "' expects a finite number, got '" + text + "'", line);
  }
  return v;
}

inline long long parse_integer(const std::string& text, int line, const std::string& key) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'", line);
  }
  return v;
}

/// Typed access to one section; remembers which keys were consumed.
class SectionReader {
 public:
  SectionReader(ConfigSections& all, const std::string& name) : name_(name) {
    auto it = all.find(name);
    if (it != all.end()) keys_ = &it->second;
  }

  const ConfigEntry* find(const std::string& key) {
    if (!keys_) return nullptr;
    auto it = keys_->find(key);
    if (it == keys_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  bool has(const std::string& key) const { return keys_ && keys_->count(key); }

  void number(const std::string& key, double& out, bool positive = false) {
    if (const auto* e = find(key)) {
      out = parse_double(e->value, e->line, key);
      if (positive && !(out > 0.0)) throw ConfigError("'" + key + "' must be positive", e->line);
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out, long long min_value) {
    if (const auto* e = find(key)) {
      const long long v = parse_integer(e->value, e->line, key);
      if (v < min_value) {
        throw ConfigError("'" + key + "' must be at least " + std::to_string(min_value), e->line);
      }
      out = static_cast<Int>(v);
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const auto* e = find(key)) out = e->value;
  }

  template <class Enum>
  void choice(const std::string& key, Enum& out, const std::map<std::string, Enum>& options) {
    if (const auto* e = find(key)) {
      auto it = options.find(e->value);
      if (it == options.end()) {
        std::string list;
        for (const auto& [k, v] : options) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("'" + key + "' must be one of " + list + ", got '" + e->value + "'", e->line);
      }
      out = it->second;
    }
  }

  /// "start, stop, count" or "start, stop, count, log".
  void sweep(const std::string& key, Sweep& out) {
    const auto* e = find(key);
    if (!e) return;
    std::vector<std::string> parts;
    std::stringstream ss(e->value);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(trim(item));
    if (parts.size() != 3 && parts.size() != 4) {
      throw ConfigError("'" + key + "' expects 'start, stop, count[, log]'", e->line);
    }
    Sweep s;
    s.start = parse_double(parts[0], e->line, key);
    s.stop = parse_double(parts[1], e->line, key);
    s.count = static_cast<int>(parse_integer(parts[2], e->line, key));
    if (parts.size() == 4) {
      if (parts[3] != "log" && parts[3] != "linear") {
        throw ConfigError("'" + key + "' spacing must be 'log' or 'linear'", e->line);
      }
      s.log = parts[3] == "log";
    }
    if (s.count < 1) throw ConfigError("'" + key + "' needs at least one point", e->line);
    if (s.stop < s.start) throw ConfigError("'" + key + "' needs start <= stop", e->line);
    if (s.log && !(s.start > 0.0)) throw ConfigError("'" + key + "' log spacing needs start > 0", e->line);
    out = s;
  }

  int line_of(const std::string& key) const {
    if (!keys_) return 0;
    auto it = keys_->find(key);
    return it == keys_->end() ? 0 : it->second.line;
  }

 private:
  std::string name_;
  std::map<std::string, ConfigEntry>* keys_ = nullptr;
};

}  // namespace detail

inline RunConfig parse_run_config(std::istream& in) {
  using detail::SectionReader;
  auto sections = detail::parse_sections(in);
  RunConfig c = default_run_config();

  {
    SectionReader s(sections, "model");
    EnsembleParams p;
    s.choice("scheme", p.scheme, {{"eit", PumpingScheme::Eit}, {"raman", PumpingScheme::Raman}});
    s.choice("raman_model", p.raman_model,
             {{"cooperative", RamanDecayModel::CooperativeEnhanced}, {"direct", RamanDecayModel::DirectSubstitution}});
    s.number("gamma", p.gamma, true);
    s.number("gamma0", p.gamma0, true);
    s.number("kappa", p.kappa, true);
    s.number("atom_number", p.atom_number, true);
    s.number("transmission", p.transmission, true);
    s.number("raman_detuning", p.raman_detuning);
    s.number("regime_strictness", p.regime_strictness, true);

    const bool derived = s.has("cooperativity") || s.has("pumping_rate");
    const bool microscopic = s.has("coupling") || s.has("control_rabi");
    if (derived && microscopic) {
      const int line = std::max(s.line_of("coupling"), s.line_of("control_rabi"));
      throw ConfigError("give either cooperativity/pumping_rate or coupling/control_rabi, not both", line);
    }
    int model_line = 0;
    try {
      if (microscopic) {
        model_line = std::max(s.line_of("coupling"), s.line_of("control_rabi"));
        p.coupling = std::sqrt(100.0 * p.transmission * p.gamma / p.atom_number);
        p.control_rabi = std::sqrt(15.0 * p.gamma);
        s.number("coupling", p.coupling);
        s.number("control_rabi", p.control_rabi);
        p.validate();
      } else {
        model_line = std::max(s.line_of("cooperativity"), s.line_of("pumping_rate"));
        double cooperativity = 100.0;
        double pumping = 15.0;
        s.number("cooperativity", cooperativity);
        s.number("pumping_rate", pumping);
        p = EnsembleParams::from_cooperativity(cooperativity, pumping, p);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[model] ") + e.what(), model_line);
    }
    c.params = p;
  }
  {
    SectionReader s(sections, "map");
    s.sweep("i_f", c.i_f_sweep);
    if (!(c.i_f_sweep.start > 0.0)) throw ConfigError("[map] i_f values must be positive", s.line_of("i_f"));
  }
  {
    SectionReader s(sections, "fidelity");
    s.sweep("c", c.c_sweep);
    s.number("i_f", c.fidelity_i_f, true);
    if (c.fidelity_i_f >= 2.0) throw ConfigError("[fidelity] i_f must be below 2", s.line_of("i_f"));
    if (c.c_sweep.start < 0.0) throw ConfigError("[fidelity] c must be non-negative", s.line_of("c"));
    const bool lo = s.has("pumping_min");
    const bool hi = s.has("pumping_max");
    if (lo != hi) {
      throw ConfigError("[fidelity] pumping_min and pumping_max go together",
                        std::max(s.line_of("pumping_min"), s.line_of("pumping_max")));
    }
    if (lo) {
      PumpingBounds b{0.0, 0.0};
      s.number("pumping_min", b.lower, true);
      s.number("pumping_max", b.upper, true);
      if (!(b.upper > b.lower)) throw ConfigError("[fidelity] need pumping_min < pumping_max", s.line_of("pumping_max"));
      c.pumping_bounds = b;
    }
  }
  {
    SectionReader s(sections, "readout");
    s.number("bandwidth_product", c.bandwidth_product, true);
    s.sweep("t", c.t_sweep);
    if (c.t_sweep.start < 0.0) throw ConfigError("[readout] t must be non-negative", s.line_of("t"));
    s.integer("quadrature_nodes", c.quadrature_nodes, 2);
    s.choice("lo_profile", c.lo_shape, {{"matched", LoShape::Matched}, {"flat", LoShape::Flat}});
    s.number("stored_i_f", c.stored_i_f, true);
  }
  {
    SectionReader s(sections, "protocol");
    s.number("i_f", c.protocol_i_f, true);
    s.sweep("t_store", c.t_store_sweep);
    if (c.t_store_sweep.start < 0.0) throw ConfigError("[protocol] t_store must be non-negative", s.line_of("t_store"));
  }
  {
    SectionReader s(sections, "mc");
    s.integer("n_traj", c.n_traj, 100);
    s.number("dt", c.mc_dt, true);
    s.number("duration", c.mc_duration, true);
    s.integer("seed", c.seed, 0);
    if (c.mc_dt > 0.1) throw ConfigError("[mc] dt must be at most 0.1 (units of 1/gamma0~)", s.line_of("dt"));
    if (c.mc_duration < 10.0) {
      throw ConfigError("[mc] duration must be at least 10 (units of 1/gamma0~)", s.line_of("duration"));
    }
  }
  {
    SectionReader s(sections, "output");
    s.text("directory", c.directory);
    s.integer("precision", c.precision, 1);
    if (c.precision > 17) throw ConfigError("[output] precision must be at most 17", s.line_of("precision"));
  }

  for (const auto& [section, keys] : sections) {
    for (const auto& [key, entry] : keys) {
      if (!entry.used) throw ConfigError("unknown key '" + key + "' in [" + section + "]", entry.line);
    }
  }
  return c;
}

inline RunConfig parse_run_config(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

}  // namespace cvmem
