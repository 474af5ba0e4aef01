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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dfsim/dynamics.hpp"
#include "dfsim/hilbert.hpp"

// Run configuration files are flat `key = value` text with `#` comments. All
// rates are in units of g (g defaults to 1). Repeated `[segment]` sections
// describe a piecewise-constant schedule explicitly:
//
//   n_atoms = 2
//   kappa   = 1
//   gamma   = 1e-4
//   rabi    = 0.02, -0.02        # complex entries as 0.01+0.02i
//   duration = auto              # entangling pulse length (two atoms)
//   settle  = 20                 # lasers-off interval after the pulse
//
//   [segment]
//   rabi = 0.05, 0
//   duration = 12.5
//   [segment]
//   duration = 30                # no rabi key: lasers off

namespace dfsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { basis, evolve, pulse, sweep, trajectories };

Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

/// Where the state starts: the global ground state, a DFS basis vector, or a
/// product basis element.
struct StateSpec {
  enum class Kind { ground, dfs, basis, conditional };
  Kind kind = Kind::ground;
  int dfs_index = 0;
  BasisIndex basis;
};

struct SegmentSpec {
  std::vector<Complex> rabi;  // empty: lasers off
  double duration = 0.0;
};

struct RunConfig {
  std::optional<Mode> mode;
  SystemParams params;

  std::vector<Complex> rabi;
  std::optional<double> duration;  // unset or `auto`: entangling pulse length
  double settle = 0.0;
  std::vector<SegmentSpec> segments;

  StateSpec initial;
  std::optional<StateSpec> target;

  std::vector<double> sweep_omega1;
  std::vector<double> sweep_gamma;
  bool sweep_omega1_default = true;
  bool sweep_gamma_default = true;

  double eta = 0.0;
  std::uint64_t seed = 1;
  Index samples = 10000;
  int output_points = 201;
  bool trajectory_log = true;

  /// Mode-specific completeness checks; throws ConfigError.
  void validate(Mode mode) const;
};

/// Forty log-spaced points in [1e-3, 0.3].
std::vector<double> default_sweep_omega1();
/// {0, 1e-5, 1e-4, 1e-3}; a documented choice, not a measured value.
std::vector<double> default_sweep_gamma();

Complex parse_complex(std::string_view text);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace dfsim
