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


#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kCli = DFSIM_CLI_PATH;
const fs::path kConfigs = DFSIM_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dfsim_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + kCli.string() + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("basis export") {
  const fs::path out = scratch("basis");
  const fs::path cfg = write_config(out, "n_atoms = 2\n");
  REQUIRE(run("basis --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(slurp(out / "dfs_basis.csv") ==
        "vector_index,flat_basis_index,re_amplitude,im_amplitude\n"
        "0,0,1,0\n"
        "1,1,0.70710678118654757,0\n"
        "1,2,-0.70710678118654757,0\n");
  const auto j = nlohmann::json::parse(slurp(out / "dfs_basis.json"));
  CHECK(j["dimension"] == 2);
  CHECK(j["sectors"].size() == 2);
  CHECK(j["vectors"][1]["l"] == 0.0);

  REQUIRE(run("basis --config " + (kConfigs / "basis_n4.cfg").string() + " --out " + out.string()) == 0);
  const auto j4 = nlohmann::json::parse(slurp(out / "dfs_basis.json"));
  CHECK(j4["dimension"] == 6);
  CHECK(j4["sectors"][0]["count"] == 1);
  CHECK(j4["sectors"][1]["count"] == 3);
  CHECK(j4["sectors"][2]["count"] == 2);
}

TEST_CASE("outputs are byte-identical for identical config and seed") {
  const fs::path a = scratch("repro_a");
  const fs::path b = scratch("repro_b");
  const fs::path cfg = write_config(a,
                                    "n_atoms = 2\nkappa = 1\ngamma = 1e-3\nrabi = 0.05, -0.05\n"
                                    "samples = 400\nsweep_omega1 = 0.005, 0.02, 0.08\nsweep_gamma = 0, 1e-4\n");
  for (const std::string mode : {"trajectories", "sweep", "pulse", "evolve"}) {
    CAPTURE(mode);
    REQUIRE(run(mode + " --config " + cfg.string() + " --out " + a.string() + " --seed 77",
                "DFS_SIM_THREADS=1") == 0);
    REQUIRE(run(mode + " --config " + cfg.string() + " --out " + b.string() + " --seed 77",
                "DFS_SIM_THREADS=3") == 0);
  }
  for (const char* f : {"ensemble.json", "trajectories.csv", "sweep.csv", "sweep.json", "pulse.json",
                        "pulse_state.csv", "evolve.csv", "evolve.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto j = nlohmann::json::parse(slurp(a / "ensemble.json"));
  CHECK(j["seed"] == 77);
  CHECK(j["n_samples"] == 400);
  for (const char* key : {"p0_estimate", "stderr", "n_samples", "seed", "fidelity"}) CHECK(j.contains(key));

  REQUIRE(run("trajectories --config " + cfg.string() + " --out " + b.string() + " --seed 78") == 0);
  CHECK(slurp(a / "trajectories.csv") != slurp(b / "trajectories.csv"));
  REQUIRE(run("trajectories --config " + cfg.string() + " --out " + b.string() + " --samples 10") == 0);
  CHECK(nlohmann::json::parse(slurp(b / "ensemble.json"))["n_samples"] == 10);
}

TEST_CASE("sweep file layout") {
  const fs::path out = scratch("sweep");
  const fs::path cfg = write_config(out, "sweep_omega1 = 0.01, 0.03\nsweep_gamma = 0, 1e-4, 1e-3\neta = 0.5\n");
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + out.string()) == 0);
  std::istringstream csv(slurp(out / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "omega1_over_g,gamma_over_g,T_g,p0_numeric,p0_analytic,fidelity_conditional,fidelity_no_detection");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 6);
  const auto j = nlohmann::json::parse(slurp(out / "sweep.json"));
  CHECK(j["gamma_list_source"] == "config");
  CHECK(j["eta"] == 0.5);

  const fs::path def = scratch("sweep_default");
  REQUIRE(run("sweep --config " + (kConfigs / "fig3_sweep.cfg").string() + " --out " + def.string()) == 0);
  const auto jd = nlohmann::json::parse(slurp(def / "sweep.json"));
  CHECK(std::string(jd["gamma_list_source"]).rfind("default", 0) == 0);
  CHECK(std::string(jd["omega1_grid_source"]).rfind("default", 0) == 0);
}

TEST_CASE("exit codes") {
  const fs::path out = scratch("exit");
  CHECK(run("basis --config " + (out / "missing.cfg").string()) == 2);
  CHECK(run("basis") == 2);
  CHECK(run("frobnicate --config x") == 2);
  CHECK(run("basis --config " + write_config(out, "kappa = -1\n").string() + " --out " + out.string()) == 2);
  CHECK(run("pulse --config " + write_config(out, "n_atoms = 2\n").string() + " --out " + out.string()) == 2);
  CHECK(run("sweep --config " + write_config(out, "mode = basis\n").string() + " --out " + out.string()) == 2);
  CHECK(run("basis --config " + write_config(out, "n_atoms = 16\n").string() + " --out " + out.string()) == 2);
  // Overdamped slow dynamics: no entangling pulse length exists.
  CHECK(run("pulse --config " + write_config(out, "gamma = 0.01\nrabi = 0.001, -0.001\n").string() + " --out " + out.string()) == 3);
  CHECK(run("--help") == 0);
}
