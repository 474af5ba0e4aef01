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
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "dfsim/hamiltonians.hpp"
#include "dfsim/hilbert.hpp"

namespace dfsim {

// ---------------------------------------------------------------------------
// Schedules

/// Lasers-off interval.
struct Idle {
  double duration = 0.0;
};

using Segment = std::variant<Pulse, Idle>;

double segment_duration(const Segment& segment);
Operator segment_hamiltonian(const HilbertSpace& space, const Segment& segment);

struct Schedule {
  std::vector<Segment> segments;

  double total_duration() const;
  void validate(int n_atoms) const;
};

// ---------------------------------------------------------------------------
// Conditional (no-emission) evolution

/// U_cond(t) psi, unnormalized.
StateVector propagate_conditional(const Operator& h_cond, const StateVector& psi, double t);

/// ||U_cond(t) psi||^2 for a normalized psi.
double no_photon_probability(const Operator& h_cond, const StateVector& psi, double t);

/// U_cond(t) psi / ||.||. Throws NumericalGuardError when the norm underflows.
StateVector conditional_state(const Operator& h_cond, const StateVector& psi, double t);

/// Conditional evolution through every segment of the schedule, unnormalized.
StateVector propagate_schedule(const HilbertSpace& space, const Schedule& schedule,
                               const StateVector& psi);

/// Pair-basis coefficients c[4n + x] integrated through time t with an adaptive
/// Dormand-Prince 5(4) stepper. params.n_max fixes the Fock ladder.
CVector integrate_pair_amplitudes(const SystemParams& params, Complex omega_plus,
                                  Complex omega_minus, const CVector& c0, double t,
                                  double rel_tol = 1e-11, double abs_tol = 1e-13);

// ---------------------------------------------------------------------------
// Quantum jumps

struct JumpChannel {
  enum class Kind { cavity, atom };
  Kind kind = Kind::cavity;
  int atom = 0;  // 1-based, atom channels only

  std::string label() const;
  friend bool operator==(const JumpChannel&, const JumpChannel&) = default;
};

/// Jump operators sqrt(2 kappa) b and sqrt(2 Gamma) sigma_i; channels with a
/// zero rate are omitted.
struct JumpOperator {
  JumpChannel channel;
  CMatrix matrix;
};
std::vector<JumpOperator> jump_operators(const HilbertSpace& space);

struct Jump {
  double time = 0.0;
  JumpChannel channel;
};

struct Trajectory {
  std::vector<Jump> jumps;
  StateVector final_state;
  bool survived = true;
};

/// Waiting-time Monte Carlo over a fixed schedule. Segment propagators for the
/// dyadic sub-steps T_s / 2^k are computed once; the instance is immutable and
/// can be shared between threads.
class TrajectorySampler {
 public:
  TrajectorySampler(const HilbertSpace& space, Schedule schedule);

  /// Trajectory number `stream` of the ensemble seeded with `seed`.
  Trajectory sample(const StateVector& initial, std::uint64_t seed, std::uint64_t stream = 0) const;

  const HilbertSpace& space() const { return space_; }
  const Schedule& schedule() const { return schedule_; }
  double time_resolution() const { return resolution_; }

 private:
  struct SegmentData {
    double start = 0.0;
    double duration = 0.0;
    CMatrix h;
    std::vector<CMatrix> ladder;  // ladder[k] = U(duration / 2^k)
  };

  HilbertSpace space_;
  Schedule schedule_;
  std::vector<SegmentData> segments_;
  std::vector<JumpOperator> jumps_;
  double resolution_;
};

Trajectory sample_trajectory(const HilbertSpace& space, const Schedule& schedule,
                             const StateVector& initial, std::uint64_t seed);

struct EnsembleResult {
  double p0_estimate = 0.0;
  double p0_stderr = 0.0;
  CMatrix density_matrix;  // mean of |psi><psi| over all trajectories
  CMatrix rho_perp;        // mean over trajectories with at least one jump
  Index n_samples = 0;
  Index n_jumped = 0;
  std::uint64_t seed = 0;
  std::vector<Trajectory> trajectories;  // filled when requested
};

struct EnsembleOptions {
  int threads = 0;  // 0: worker_count()
  bool keep_trajectories = false;
};

EnsembleResult run_ensemble(const TrajectorySampler& sampler, const StateVector& initial,
                            Index n_samples, std::uint64_t seed, const EnsembleOptions& options = {});

/// Worker cap: hardware concurrency, limited by DFS_SIM_THREADS when set.
int worker_count();

// ---------------------------------------------------------------------------
// Density-matrix oracle and detection statistics

/// Lindblad evolution d rho/dt = -i(H rho - rho H^+) + sum_c C rho C^+ with
/// H the conditional Hamiltonian of each segment, fixed-step RK4. Beyond the
/// end of the schedule the lasers are off.
CMatrix master_equation_evolve(const HilbertSpace& space, const Schedule& schedule,
                               const CMatrix& rho0, double t);

/// Throws std::invalid_argument unless rho is Hermitian, trace 1 and PSD.
void check_density_matrix(const CMatrix& rho, double tol = 1e-10);

struct NoDetectionMixture {
  CMatrix rho;
  double fidelity_multiplier = 1.0;
};

/// [p0 |psi0><psi0| + (1-eta)(1-p0) rho_perp] / tr, with multiplier p0 / (1 - eta (1 - p0)).
NoDetectionMixture no_detection_mixture(double p0, const StateVector& psi0, const CMatrix& rho_perp,
                                        double eta);

/// <target|rho|target>.
double fidelity(const CMatrix& rho, const StateVector& target);

}  // namespace dfsim
