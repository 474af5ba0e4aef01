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


#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "dfsim/commands.hpp"
#include "dfsim/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-state preparation in a leaky optical cavity"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;

  for (const char* name : {"basis", "evolve", "pulse", "sweep", "trajectories"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Run configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--samples", samples, "Trajectory count (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string mode_text = app.get_subcommands().front()->get_name();
  try {
    const dfsim::Mode mode = dfsim::parse_mode(mode_text);
    dfsim::RunConfig config = dfsim::load_config(config_path);
    if (seed) config.seed = *seed;
    if (samples) config.samples = static_cast<dfsim::Index>(*samples);
    const dfsim::CommandResult result = dfsim::run_command(mode, config, out_dir);
    std::cout << result.summary << "\n";
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    return kExitOk;
  } catch (const dfsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dfsim::NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
