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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dfsim/config.hpp"
#include "dfsim/dfs.hpp"
#include "dfsim/dynamics.hpp"
#include "dfsim/export.hpp"

// Experiment drivers behind the command-line front end. Each command reads a
// validated RunConfig, writes its files below `out_dir` and returns a short
// human-readable summary.

namespace dfsim {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// Piecewise-constant schedule described by the config: explicit [segment]
/// entries, or a single pulse of `rabi` for `duration` (the two-atom
/// entangling length when unset), followed by `settle` with lasers off.
Schedule resolve_schedule(const RunConfig& config);

/// Initial or target state in the full space. `conditional` is only meaningful
/// as a target and is rejected here.
StateVector resolve_state(const HilbertSpace& space, const StateSpec& spec);

/// Target state: the configured one, |0a> for two atoms, otherwise none.
std::optional<StateSpec> default_target(const RunConfig& config);

/// One grid point of the two-atom preparation sweep with Omega_2 = -Omega_1.
/// P0 and the conditional fidelity are read from the trapped-state amplitudes
/// (c_0g, c_0a) of the pair-amplitude integration at the pulse end.
SweepRow sweep_point(const SystemParams& params, double omega1, double eta);

/// Runs body(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

CommandResult cmd_basis(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_evolve(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_pulse(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_trajectories(const RunConfig& config, const std::filesystem::path& out_dir);

/// Validates the config for `mode` and dispatches.
CommandResult run_command(Mode mode, const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace dfsim
