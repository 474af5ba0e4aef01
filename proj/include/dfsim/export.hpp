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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dfsim/dfs.hpp"
#include "dfsim/dynamics.hpp"

// Plain-text serialization. Every floating-point value in CSV output is
// written with 17 significant digits so that files round-trip exactly and are
// byte-identical across runs with the same inputs.

namespace dfsim {

using Json = nlohmann::ordered_json;

/// printf("%.17g").
std::string format_double(double x);

/// Columns vector_index, flat_basis_index, re_amplitude, im_amplitude. Only
/// nonzero amplitudes are listed.
std::string dfs_basis_csv(const DfsBasis& basis);
Json dfs_basis_sidecar(const HilbertSpace& space, const DfsBasis& basis);

/// Columns trajectory_id, jump_time, channel; one row per jump.
std::string trajectory_csv(const std::vector<Trajectory>& trajectories);

struct SweepRow {
  double omega1_over_g = 0.0;
  double gamma_over_g = 0.0;
  double t_g = 0.0;
  double p0_numeric = 0.0;
  double p0_analytic = 0.0;
  double fidelity_conditional = 0.0;
  double fidelity_no_detection = 0.0;
  bool zeno_ok = false;
};

/// Columns omega1_over_g, gamma_over_g, T_g, p0_numeric, p0_analytic,
/// fidelity_conditional, fidelity_no_detection.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Generic CSV: header line followed by rows of doubles.
std::string numeric_csv(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows);

/// Indented JSON text with a trailing newline.
std::string json_text(const Json& j);

/// Writes text to path, creating parent directories. Throws std::runtime_error.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dfsim
