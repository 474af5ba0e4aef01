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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "dfsim/dynamics.hpp"
#include "dfsim/expm.hpp"

namespace dfsim {
namespace {

class Uniform01 {
 public:
  Uniform01(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  // Open interval (0, 1) from the top 53 bits.
  double operator()() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::string JumpChannel::label() const {
  return kind == Kind::cavity ? std::string("cavity") : "atom:" + std::to_string(atom);
}

std::vector<JumpOperator> jump_operators(const HilbertSpace& space) {
  const SystemParams& p = space.params();
  std::vector<JumpOperator> out;
  if (p.kappa > 0.0) {
    out.push_back({{JumpChannel::Kind::cavity, 0},
                   std::sqrt(2.0 * p.kappa) * cavity_annihilation(space).matrix});
  }
  if (p.gamma > 0.0) {
    for (int i = 1; i <= space.n_atoms(); ++i) {
      out.push_back({{JumpChannel::Kind::atom, i},
                     std::sqrt(2.0 * p.gamma) * atomic_lowering(space, i).matrix});
    }
  }
  return out;
}

TrajectorySampler::TrajectorySampler(const HilbertSpace& space, Schedule schedule)
    : space_(space), schedule_(std::move(schedule)), jumps_(jump_operators(space)) {
  schedule_.validate(space_.n_atoms());
  const SystemParams& p = space_.params();
  resolution_ = 1e-3 / std::max(p.g, p.kappa);

  double start = 0.0;
  for (const Segment& s : schedule_.segments) {
    SegmentData data;
    data.start = start;
    data.duration = segment_duration(s);
    data.h = segment_hamiltonian(space_, s).matrix;
    if (data.duration > 0.0) {
      const int depth =
          std::max(0, static_cast<int>(std::ceil(std::log2(data.duration / resolution_))));
      for (int k = 0; k <= depth; ++k) {
        data.ladder.push_back(conditional_propagator(data.h, std::ldexp(data.duration, -k)));
      }
    }
    start += data.duration;
    segments_.push_back(std::move(data));
  }
}

Trajectory TrajectorySampler::sample(const StateVector& initial, std::uint64_t seed,
                                     std::uint64_t stream) const {
  if (initial.dim() != space_.dim()) throw std::invalid_argument("initial state dimension mismatch");
  if (std::abs(initial.norm_squared() - 1.0) > 1e-9) {
    throw std::invalid_argument("trajectories need a normalized initial state");
  }
  Uniform01 uniform(seed, stream);
  Trajectory traj;
  CVector psi = initial.amplitudes;
  double threshold = uniform();

  for (const SegmentData& seg : segments_) {
    if (seg.ladder.empty()) continue;
    double offset = 0.0;  // time already spent in this segment
    for (;;) {
      const double remaining = seg.duration - offset;
      const CVector end = (offset == 0.0 ? seg.ladder[0] : conditional_propagator(seg.h, remaining)) * psi;
      if (end.squaredNorm() > threshold) {
        psi = end;
        break;
      }
      // Largest dyadic advance whose norm stays above the threshold; the norm
      // is non-increasing so the greedy descent brackets the crossing.
      double advance = 0.0;
      for (std::size_t k = 1; k < seg.ladder.size(); ++k) {
        const double step = std::ldexp(seg.duration, -static_cast<int>(k));
        if (advance + step >= remaining) continue;
        CVector trial = seg.ladder[k] * psi;
        if (trial.squaredNorm() > threshold) {
          psi = std::move(trial);
          advance += step;
        }
      }
      offset += advance;

      double total = 0.0;
      std::vector<double> weights;
      weights.reserve(jumps_.size());
      for (const JumpOperator& c : jumps_) {
        weights.push_back((c.matrix * psi).squaredNorm());
        total += weights.back();
      }
      if (!(total > 0.0)) {
        throw NumericalGuardError("norm crossed the jump threshold with zero emission density");
      }
      double pick = uniform() * total;
      std::size_t chosen = 0;
      while (chosen + 1 < weights.size() && pick >= weights[chosen]) pick -= weights[chosen++];

      const CVector jumped = jumps_[chosen].matrix * psi;
      psi = jumped / jumped.norm();
      traj.jumps.push_back({seg.start + offset, jumps_[chosen].channel});
      threshold = uniform();
    }
  }
  traj.survived = traj.jumps.empty();
  traj.final_state = StateVector{psi / psi.norm(), true};
  return traj;
}

Trajectory sample_trajectory(const HilbertSpace& space, const Schedule& schedule,
                             const StateVector& initial, std::uint64_t seed) {
  return TrajectorySampler(space, schedule).sample(initial, seed);
}

int worker_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("DFS_SIM_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      // unparsable cap is ignored
    }
  }
  return n;
}

EnsembleResult run_ensemble(const TrajectorySampler& sampler, const StateVector& initial,
                            Index n_samples, std::uint64_t seed, const EnsembleOptions& options) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  std::vector<Trajectory> trajs(static_cast<std::size_t>(n_samples));

  const int threads =
      static_cast<int>(std::min<Index>(options.threads > 0 ? options.threads : worker_count(), n_samples));
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (Index k = next++; k < n_samples; k = next++) {
      try {
        trajs[static_cast<std::size_t>(k)] = sampler.sample(initial, seed, static_cast<std::uint64_t>(k));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_samples;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  const Index dim = sampler.space().dim();
  EnsembleResult r;
  r.n_samples = n_samples;
  r.seed = seed;
  r.density_matrix = CMatrix::Zero(dim, dim);
  r.rho_perp = CMatrix::Zero(dim, dim);
  Index survived = 0;
  for (const Trajectory& t : trajs) {  // fixed order keeps the sums reproducible
    const CVector& v = t.final_state.amplitudes;
    const CMatrix proj = v * v.adjoint();
    r.density_matrix += proj;
    if (t.survived) {
      ++survived;
    } else {
      r.rho_perp += proj;
    }
  }
  r.n_jumped = n_samples - survived;
  r.density_matrix /= static_cast<double>(n_samples);
  if (r.n_jumped > 0) r.rho_perp /= static_cast<double>(r.n_jumped);
  r.p0_estimate = static_cast<double>(survived) / static_cast<double>(n_samples);
  r.p0_stderr = std::sqrt(r.p0_estimate * (1.0 - r.p0_estimate) / static_cast<double>(n_samples));
  if (options.keep_trajectories) r.trajectories = std::move(trajs);
  return r;
}

}  // namespace dfsim
