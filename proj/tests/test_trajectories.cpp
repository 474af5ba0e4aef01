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

#include <cmath>
#include <cstdlib>

#include "dfsim/dfs.hpp"
#include "dfsim/dynamics.hpp"

using namespace dfsim;

namespace {

SystemParams make(int n_atoms, double kappa, double gamma, int n_max) {
  SystemParams p;
  p.n_atoms = n_atoms;
  p.kappa = kappa;
  p.gamma = gamma;
  p.n_max = n_max;
  return p;
}

bool same_jumps(const Trajectory& a, const Trajectory& b) {
  if (a.jumps.size() != b.jumps.size()) return false;
  for (std::size_t k = 0; k < a.jumps.size(); ++k) {
    if (a.jumps[k].time != b.jumps[k].time || !(a.jumps[k].channel == b.jumps[k].channel)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("jump channels") {
  const HilbertSpace space(make(3, 1.0, 0.1, 1));
  const auto ops = jump_operators(space);
  REQUIRE(ops.size() == 4);
  CHECK(ops[0].channel.label() == "cavity");
  CHECK(ops[2].channel.label() == "atom:2");
  CHECK((ops[1].matrix - std::sqrt(0.2) * atomic_lowering(space, 1).matrix).norm() == 0.0);
  CHECK(jump_operators(HilbertSpace(make(2, 1.0, 0.0, 1))).size() == 1);
  CHECK(jump_operators(HilbertSpace(make(2, 0.0, 0.0, 1))).empty());
}

TEST_CASE("trajectories are reproducible per (seed, stream)") {
  const HilbertSpace space(make(2, 1.0, 0.01, 2));
  const TrajectorySampler sampler(space, Schedule{{Pulse{{0.3, 0.1}, 30.0}}});
  const StateVector g = StateVector::basis(space, {0, 0});
  int differing = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Trajectory a = sampler.sample(g, 42, k);
    const Trajectory b = sampler.sample(g, 42, k);
    CHECK(same_jumps(a, b));
    CHECK((a.final_state.amplitudes - b.final_state.amplitudes).norm() == 0.0);
    CHECK(a.survived == a.jumps.empty());
    CHECK(a.final_state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 1; j < a.jumps.size(); ++j) CHECK(a.jumps[j].time >= a.jumps[j - 1].time);
    differing += same_jumps(a, sampler.sample(g, 43, k)) ? 0 : 1;
  }
  CHECK(differing > 0);
  CHECK(sampler.time_resolution() == doctest::Approx(1e-3));
}

TEST_CASE("trapped initial state without atomic decay never jumps") {
  const HilbertSpace space(make(2, 1.0, 0.0, 2));
  const StateVector a = dfs_basis(space).vectors[1];
  const TrajectorySampler sampler(space, Schedule{{Idle{50.0}}});
  const EnsembleResult r = run_ensemble(sampler, a, 200, 7);
  CHECK(r.p0_estimate == 1.0);
  CHECK(r.n_jumped == 0);
  CHECK(r.p0_stderr == 0.0);
}

TEST_CASE("waiting-time statistics of a pure exponential decay") {
  // Gamma = kappa: the survival probability is exp(-2 kappa t) exactly.
  const double kappa = 0.5;
  const HilbertSpace space(make(1, kappa, kappa, 1));
  const StateVector e = StateVector::basis(space, {0, 1});
  const TrajectorySampler sampler(space, Schedule{{Idle{1.0}}});
  const Index n = 4000;
  EnsembleOptions opts;
  opts.keep_trajectories = true;
  const EnsembleResult r = run_ensemble(sampler, e, n, 2026, opts);
  const double p_survive = std::exp(-2.0 * kappa);
  const double sigma = std::sqrt(p_survive * (1.0 - p_survive) / n);
  CHECK(std::abs(r.p0_estimate - p_survive) < 4.0 * sigma);

  Index early = 0;
  for (const Trajectory& t : r.trajectories) early += (!t.jumps.empty() && t.jumps.front().time < 0.5) ? 1 : 0;
  const double p_early = 1.0 - std::exp(-2.0 * kappa * 0.5);
  const double s_early = std::sqrt(p_early * (1.0 - p_early) / n);
  CHECK(std::abs(static_cast<double>(early) / n - p_early) < 4.0 * s_early);
}

TEST_CASE("ensemble results do not depend on the worker count") {
  const HilbertSpace space(make(2, 1.0, 0.02, 2));
  const TrajectorySampler sampler(space, Schedule{{Pulse{{0.2, -0.1}, 15.0}, Idle{5.0}}});
  const StateVector g = StateVector::basis(space, {0, 0});
  EnsembleOptions one;
  one.threads = 1;
  EnsembleOptions many;
  many.threads = 4;
  const EnsembleResult a = run_ensemble(sampler, g, 300, 5, one);
  const EnsembleResult b = run_ensemble(sampler, g, 300, 5, many);
  CHECK(a.p0_estimate == b.p0_estimate);
  CHECK((a.density_matrix - b.density_matrix).norm() == 0.0);
  CHECK((a.rho_perp - b.rho_perp).norm() == 0.0);
  CHECK_THROWS_AS(run_ensemble(sampler, g, 0, 5), std::invalid_argument);
}

TEST_CASE("trajectory average reproduces the master equation") {
  const HilbertSpace space(make(2, 1.0, 0.05, 1));
  const Schedule schedule{{Pulse{{0.4, 0.1}, 6.0}}};
  const StateVector g = StateVector::basis(space, {0, 0});
  const Index n = 4000;
  const EnsembleResult r = run_ensemble(TrajectorySampler(space, schedule), g, n, 99);
  const CMatrix rho = master_equation_evolve(space, schedule, g.amplitudes * g.amplitudes.adjoint(), 6.0);
  for (Index i = 0; i < rho.rows(); ++i) {
    for (Index j = 0; j < rho.cols(); ++j) {
      // Each entry is a mean of bounded samples; |x| <= 1 bounds the variance by 1/n.
      CHECK(std::abs(r.density_matrix(i, j) - rho(i, j)) < 5.0 / std::sqrt(static_cast<double>(n)));
    }
  }
  const double p0 = propagate_schedule(space, schedule, g).norm_squared();
  CHECK(std::abs(r.p0_estimate - p0) < 4.0 * std::sqrt(p0 * (1.0 - p0) / n));
}

TEST_CASE("worker count honours DFS_SIM_THREADS") {
  ::setenv("DFS_SIM_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  ::setenv("DFS_SIM_THREADS", "garbage", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("DFS_SIM_THREADS");
  CHECK(worker_count() >= 1);
}
