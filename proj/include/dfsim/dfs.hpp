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
#include <vector>

#include "dfsim/hamiltonians.hpp"
#include "dfsim/hilbert.hpp"

namespace dfsim {

/// Excitation count n and Dicke label l = N/2 - n of one trapped state.
struct SectorLabel {
  int excitations = 0;
  double l = 0.0;
};

/// Orthonormal trapped states: cavity vacuum times atomic states with J_- v = 0.
struct DfsBasis {
  std::vector<StateVector> vectors;
  std::vector<SectorLabel> labels;

  std::size_t size() const { return vectors.size(); }
};

inline constexpr double kRankTolerance = 1e-10;

std::uint64_t binomial(int n, int k);

/// binomial(N, floor(N/2)).
std::uint64_t dfs_dimension(int n_atoms);

/// Number of independent trapped states with Dicke label l, i.e.
/// C(N, N/2-l) - C(N, N/2-l-1), and 1 for l = N/2.
std::uint64_t dicke_degeneracy(int n_atoms, double l);

/// Every product of n disjoint singlet pairs a_ij = (|1>_i|0>_j - |0>_i|1>_j)/sqrt2
/// with all other atoms in |0>. Pairings are enumerated in lexicographic order of
/// their sorted (i, j) lists. Vectors live in the n_max = 0 space.
std::vector<StateVector> generating_states(int n_atoms, int n_pairs);

/// Modified Gram-Schmidt in input order; drops residuals with norm < tol.
std::vector<CVector> orthonormalize(const std::vector<CVector>& vectors,
                                    double tol = kRankTolerance);

DfsBasis dfs_basis(const HilbertSpace& space);

Operator dfs_projector(const DfsBasis& basis);
Operator dfs_projector(const HilbertSpace& space);

/// P H_laser P when gamma = 0, otherwise P H_cond P.
Operator effective_hamiltonian(const HilbertSpace& space, const Pulse& pulse);

/// Numerical rank of J_- restricted to the vacuum sector (SVD, relative tol).
Index collective_lowering_kernel_dimension(int n_atoms);

/// Projector onto the column span of the given vectors (orthonormalized first).
CMatrix span_projector(const std::vector<CVector>& vectors, double tol = kRankTolerance);

}  // namespace dfsim
