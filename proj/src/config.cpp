// Copyright 2026 The dfs-cavity-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dfsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dfsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view key) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("`" + std::string(key) + "`: cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view key) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("`" + std::string(key) + "`: cannot parse integer '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text, std::string_view key) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("`" + std::string(key) + "`: expected true/false");
}

std::vector<std::string_view> split_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ConfigError("unterminated list '" + std::string(text) + "'");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_double(item, key));
  return out;
}

std::vector<Complex> parse_complex_list(std::string_view text, std::string_view key) {
  std::vector<Complex> out;
  for (auto item : split_list(text)) {
    try {
      out.push_back(parse_complex(item));
    } catch (const ConfigError& e) {
      throw ConfigError("`" + std::string(key) + "`: " + e.what());
    }
  }
  return out;
}

StateSpec parse_state(std::string_view text, std::string_view key) {
  text = trim(text);
  StateSpec s;
  if (text == "ground") return s;
  if (text == "conditional") {
    s.kind = StateSpec::Kind::conditional;
    return s;
  }
  if (text.starts_with("dfs:")) {
    s.kind = StateSpec::Kind::dfs;
    s.dfs_index = parse_integer<int>(text.substr(4), key);
    return s;
  }
  if (text.starts_with("basis:")) {
    // basis:<photons>:<atomic bitstring as integer>
    const auto rest = text.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw ConfigError("`" + std::string(key) + "`: expected basis:<n>:<bits>");
    s.kind = StateSpec::Kind::basis;
    s.basis.photon_number = parse_integer<int>(rest.substr(0, colon), key);
    s.basis.atomic_config = parse_integer<std::uint32_t>(rest.substr(colon + 1), key);
    return s;
  }
  throw ConfigError("`" + std::string(key) + "`: unknown state '" + std::string(text) + "'");
}

}  // namespace

Mode parse_mode(std::string_view name) {
  if (name == "basis") return Mode::basis;
  if (name == "evolve") return Mode::evolve;
  if (name == "pulse") return Mode::pulse;
  if (name == "sweep") return Mode::sweep;
  if (name == "trajectories") return Mode::trajectories;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::basis: return "basis";
    case Mode::evolve: return "evolve";
    case Mode::pulse: return "pulse";
    case Mode::sweep: return "sweep";
    case Mode::trajectories: return "trajectories";
  }
  return "?";
}

std::vector<double> default_sweep_omega1() {
  constexpr int kPoints = 40;
  const double lo = std::log10(1e-3);
  const double hi = std::log10(0.3);
  std::vector<double> out;
  for (int k = 0; k < kPoints; ++k) {
    out.push_back(std::pow(10.0, lo + (hi - lo) * k / (kPoints - 1)));
  }
  return out;
}

std::vector<double> default_sweep_gamma() { return {0.0, 1e-5, 1e-4, 1e-3}; }

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw ConfigError("empty complex number");
  const auto number = [&](std::string_view part, double empty_value) {
    if (part.empty() || part == "+") return empty_value;
    if (part == "-") return -empty_value;
    return parse_double(part, "complex");
  };
  if (s.back() != 'i' && s.back() != 'j') return {number(s, 0.0), 0.0};
  const std::string_view body(s.data(), s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, number(body, 1.0)};
  return {number(body.substr(0, split), 0.0), number(body.substr(split), 1.0)};
}

void RunConfig::validate(Mode m) const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("`eta` must lie in [0, 1]");
  if (!(settle >= 0.0)) throw ConfigError("`settle` must be >= 0");

  const bool has_schedule = !segments.empty() || !rabi.empty();
  if (!rabi.empty() && static_cast<int>(rabi.size()) != params.n_atoms) {
    throw ConfigError("`rabi` needs one entry per atom");
  }
  for (const SegmentSpec& s : segments) {
    if (!s.rabi.empty() && static_cast<int>(s.rabi.size()) != params.n_atoms) {
      throw ConfigError("[segment] `rabi` needs one entry per atom");
    }
    if (!(s.duration >= 0.0)) throw ConfigError("[segment] `duration` must be >= 0");
  }
  if (duration && !(*duration >= 0.0)) throw ConfigError("`duration` must be >= 0");
  if (!duration && !rabi.empty() && segments.empty() && params.n_atoms != 2) {
    throw ConfigError("automatic `duration` is only defined for two atoms");
  }

  switch (m) {
    case Mode::basis:
      break;
    case Mode::pulse:
      if (!has_schedule) throw ConfigError("pulse mode needs `rabi` or [segment] entries");
      break;
    case Mode::evolve:
    case Mode::trajectories:
      if (!has_schedule && !duration && settle == 0.0) {
        throw ConfigError("schedule is empty: give `rabi`, `duration`, `settle` or [segment] entries");
      }
      if (output_points < 2) throw ConfigError("`output_points` must be >= 2");
      if (samples < 1) throw ConfigError("`samples` must be >= 1");
      break;
    case Mode::sweep: {
      if (params.n_atoms != 2) throw ConfigError("sweep mode is defined for two atoms only");
      if (!(params.kappa > 0.0)) throw ConfigError("sweep mode needs kappa > 0");
      if (sweep_omega1.empty()) throw ConfigError("sweep grid is empty");
      if (sweep_gamma.empty()) throw ConfigError("sweep gamma list is empty");
      for (std::size_t k = 0; k < sweep_omega1.size(); ++k) {
        if (!(sweep_omega1[k] > 0.0)) throw ConfigError("sweep grid must be positive");
        if (k > 0 && !(sweep_omega1[k] > sweep_omega1[k - 1])) {
          throw ConfigError("sweep grid must be strictly increasing");
        }
      }
      for (double gm : sweep_gamma) {
        if (!(gm >= 0.0)) throw ConfigError("sweep gamma values must be >= 0");
      }
      break;
    }
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  cfg.sweep_omega1 = default_sweep_omega1();
  cfg.sweep_gamma = default_sweep_gamma();

  std::set<std::string> seen;
  SegmentSpec* segment = nullptr;
  std::set<std::string> segment_seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (line.front() == '[') {
      if (line != "[segment]") throw ConfigError(where + "unknown section " + std::string(line));
      cfg.segments.emplace_back();
      segment = &cfg.segments.back();
      segment_seen.clear();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected `key = value`");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    try {
      if (segment) {
        if (!segment_seen.insert(key).second) throw ConfigError("duplicate key `" + key + "`");
        if (key == "rabi") {
          segment->rabi = parse_complex_list(value, key);
        } else if (key == "duration") {
          segment->duration = parse_double(value, key);
        } else {
          throw ConfigError("unknown [segment] key `" + key + "`");
        }
        continue;
      }
      if (!seen.insert(key).second) throw ConfigError("duplicate key `" + key + "`");
      if (key == "mode") {
        cfg.mode = parse_mode(value);
      } else if (key == "n_atoms") {
        cfg.params.n_atoms = parse_integer<int>(value, key);
      } else if (key == "g") {
        cfg.params.g = parse_double(value, key);
      } else if (key == "kappa") {
        cfg.params.kappa = parse_double(value, key);
      } else if (key == "gamma") {
        cfg.params.gamma = parse_double(value, key);
      } else if (key == "n_max") {
        cfg.params.n_max = parse_integer<int>(value, key);
      } else if (key == "rabi") {
        cfg.rabi = parse_complex_list(value, key);
      } else if (key == "duration") {
        if (value == "auto") {
          cfg.duration.reset();
        } else {
          cfg.duration = parse_double(value, key);
        }
      } else if (key == "settle") {
        cfg.settle = parse_double(value, key);
      } else if (key == "initial") {
        cfg.initial = parse_state(value, key);
      } else if (key == "target") {
        if (value != "auto") cfg.target = parse_state(value, key);
      } else if (key == "sweep_omega1") {
        cfg.sweep_omega1 = parse_double_list(value, key);
        cfg.sweep_omega1_default = false;
      } else if (key == "sweep_gamma") {
        cfg.sweep_gamma = parse_double_list(value, key);
        cfg.sweep_gamma_default = false;
      } else if (key == "eta") {
        cfg.eta = parse_double(value, key);
      } else if (key == "seed") {
        cfg.seed = parse_integer<std::uint64_t>(value, key);
      } else if (key == "samples") {
        cfg.samples = parse_integer<Index>(value, key);
      } else if (key == "output_points") {
        cfg.output_points = parse_integer<int>(value, key);
      } else if (key == "trajectory_log") {
        cfg.trajectory_log = parse_bool(value, key);
      } else {
        throw ConfigError("unknown key `" + key + "`");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace dfsim
