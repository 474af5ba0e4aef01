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

#include <vector>

#include "dfsim/hilbert.hpp"

namespace dfsim {

/// Resonant rectangular pulse: one complex Rabi frequency per atom.
struct Pulse {
  std::vector<Complex> rabi;
  double duration = 0.0;

  double max_rabi() const;
  void validate(int n_atoms) const;
};

/// Soft diagnostic: max|Omega_i| <= 0.1 min(g, kappa) and gamma <= 0.1 max|Omega_i|.
bool zeno_regime(const Pulse& pulse, const SystemParams& params);

/// H_laser = 1/2 sum_i Omega_i sigma_i + h.c.
Operator laser_hamiltonian(const HilbertSpace& space, const Pulse& pulse);

/// No-emission generator
///   H = i g sum_i (b sigma_i^+ - b^+ sigma_i) - i Gamma sum_i sigma_i^+ sigma_i
///       - i kappa b^+ b [+ H_laser].
Operator conditional_hamiltonian(const HilbertSpace& space);
Operator conditional_hamiltonian(const HilbertSpace& space, const Pulse& pulse);

/// Instantaneous emission density -Im<psi|(H - H^+)|psi>, which equals
/// 2 kappa <b^+b> + 2 Gamma <sum sigma^+ sigma>. Requires a normalized state.
double photon_loss_density(const Operator& h_cond, const StateVector& psi);

// Two-atom pair basis {g, a, s, e}:
//   g = |00>, a = (|10> - |01>)/sqrt2, s = (|10> + |01>)/sqrt2, e = |11>,
// where |10> means atom 1 excited. Coefficients are stored as c[4n + x].
enum class PairState : int { g = 0, a = 1, s = 2, e = 3 };

inline Index pair_index(int photons, PairState x) { return 4 * Index{photons} + static_cast<int>(x); }

/// Unitary whose column pair_index(n, x) is |n x> in the flat basis. N = 2 only.
CMatrix pair_basis_change(const HilbertSpace& space);

/// Time derivative of the pair-basis coefficients for two driven atoms, with
/// Omega_+- = (Omega_1 +- Omega_2) / (2 sqrt2). The Fock ladder is truncated at
/// c.size() / 4 - 1 photons.
CVector two_atom_ode_rhs(const CVector& c, const SystemParams& params, Complex omega_plus,
                         Complex omega_minus);

}  // namespace dfsim
