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

#include <Eigen/Dense>

#include "dfsim/hamiltonians.hpp"
#include "dfsim/hilbert.hpp"

// Closed-form two-atom results obtained by adiabatically eliminating every
// amplitude that evolves on the fast g, kappa scale. Only c_0g and c_0a
// survive, obeying d/dt (c_0g, c_0a) = -M (c_0g, c_0a) with
//   M = [[k1, i Omega_-], [i conj(Omega_-), k2]].

namespace dfsim {

struct RabiCombination {
  Complex plus;   // (Omega_1 + Omega_2) / (2 sqrt2)
  Complex minus;  // (Omega_1 - Omega_2) / (2 sqrt2)
};

RabiCombination omega_pm(Complex omega1, Complex omega2);

struct EffectiveRates {
  double k1 = 0.0;
  double k2 = 0.0;
};

/// k1 = |Omega_+|^2 kappa / (2 g^2), k2 = |Omega_-|^2 (2 g^2 + kappa^2) / (2 g^2 kappa) + Gamma.
EffectiveRates effective_rates(const SystemParams& params, Complex omega_plus, Complex omega_minus);

/// The 2x2 slow model. S is complex in the overdamped regime.
struct SlowModel {
  double k1 = 0.0;
  double k2 = 0.0;
  Complex omega_minus;
  Complex lambda1;
  Complex lambda2;
  Complex s;

  static SlowModel from_rates(double k1, double k2, Complex omega_minus);
  static SlowModel from_pulse(const SystemParams& params, Complex omega1, Complex omega2);

  Eigen::Matrix2cd matrix() const;
  bool underdamped() const;
};

/// exp(-M t) from the two-eigenvalue expansion, written so that it reduces to
/// the confluent limit exp(-lambda t)(I - (M - lambda) t) when lambda1 == lambda2.
Eigen::Matrix2cd slow_propagator(const SlowModel& model, double t);

/// exp(-M t) (1, 0).
Eigen::Vector2cd slow_amplitudes(const SlowModel& model, double t);

/// Normalized (c_0g(T), c_0a(T)).
Eigen::Vector2cd final_dfs_state(const SlowModel& model, double duration);

/// No-emission probability |c_0g(T)|^2 + |c_0a(T)|^2 in closed form.
double p0_closed_form(const SlowModel& model, double duration);

/// T = arccot((k1 - k2) / (2 S)) / S with arccot in (0, pi): the first time the
/// ground amplitude vanishes. Throws NumericalGuardError when |k1-k2| >= 2|Omega_-|.
double entangling_pulse_duration(const SlowModel& model);

struct ZenoReport {
  double drive_ratio = 0.0;  // max|Omega_i| * max(1/g, 1/kappa)
  double decay_ratio = 0.0;  // Gamma / max|Omega_i|
  bool drive_ok = false;
  bool decay_ok = false;

  bool pass() const { return drive_ok && decay_ok; }
};

inline constexpr double kZenoThreshold = 0.1;

ZenoReport zeno_timescale_check(const SystemParams& params, const Pulse& pulse);

}  // namespace dfsim
