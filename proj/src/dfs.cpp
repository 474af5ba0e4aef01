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

#include "dfsim/dfs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/SVD>

namespace dfsim {
namespace {

using AtomPair = std::pair<int, int>;  // 0-based, first < second

std::vector<AtomPair> all_pairs(int n_atoms) {
  std::vector<AtomPair> pairs;
  for (int i = 0; i < n_atoms; ++i) {
    for (int j = i + 1; j < n_atoms; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

// Disjoint choices of n_pairs pairs, as increasing index lists into `pairs`.
void enumerate_pairings(const std::vector<AtomPair>& pairs, int n_pairs, std::size_t start,
                        std::uint32_t used, std::vector<AtomPair>& current,
                        std::vector<std::vector<AtomPair>>& out) {
  if (static_cast<int>(current.size()) == n_pairs) {
    out.push_back(current);
    return;
  }
  for (std::size_t k = start; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const std::uint32_t mask = (1u << i) | (1u << j);
    if (used & mask) continue;
    current.push_back(pairs[k]);
    enumerate_pairings(pairs, n_pairs, k + 1, used | mask, current, out);
    current.pop_back();
  }
}

CVector singlet_product(int n_atoms, const std::vector<AtomPair>& pairing) {
  CVector v = CVector::Zero(Index{1} << n_atoms);
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(pairing.size()));
  const std::size_t n = pairing.size();
  for (std::uint32_t choice = 0; choice < (1u << n); ++choice) {
    std::uint32_t bits = 0;
    double sign = 1.0;
    for (std::size_t p = 0; p < n; ++p) {
      const auto [i, j] = pairing[p];
      if (choice & (1u << p)) {
        bits |= 1u << j;  // |0>_i |1>_j carries the minus sign
        sign = -sign;
      } else {
        bits |= 1u << i;
      }
    }
    v(bits) = sign * amp;
  }
  return v;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t dfs_dimension(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  return binomial(n_atoms, n_atoms / 2);
}

std::uint64_t dicke_degeneracy(int n_atoms, double l) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  const double n_real = 0.5 * n_atoms - l;
  const double n_round = std::round(n_real);
  if (std::abs(n_real - n_round) > 1e-12 || n_round < 0.0 || n_round > n_atoms / 2) {
    throw std::invalid_argument("l = " + std::to_string(l) + " is not a valid Dicke label for N = " +
                                std::to_string(n_atoms));
  }
  const int n = static_cast<int>(n_round);
  if (n == 0) return 1;
  return binomial(n_atoms, n) - binomial(n_atoms, n - 1);
}

std::vector<StateVector> generating_states(int n_atoms, int n_pairs) {
  if (n_atoms < 1 || n_atoms > kMaxAtoms) throw std::invalid_argument("n_atoms out of range");
  if (n_pairs < 0 || n_pairs > n_atoms / 2) {
    throw std::invalid_argument("number of singlet pairs must lie in [0, N/2]");
  }
  std::vector<std::vector<AtomPair>> pairings;
  std::vector<AtomPair> current;
  enumerate_pairings(all_pairs(n_atoms), n_pairs, 0, 0, current, pairings);

  std::vector<StateVector> out;
  out.reserve(pairings.size());
  for (const auto& pairing : pairings) out.push_back({singlet_product(n_atoms, pairing), true});
  return out;
}

std::vector<CVector> orthonormalize(const std::vector<CVector>& vectors, double tol) {
  std::vector<CVector> basis;
  for (const CVector& v : vectors) {
    CVector r = v;
    for (const CVector& q : basis) r -= q.dot(r) * q;
    const double norm = r.norm();
    if (norm < tol) continue;
    basis.push_back(r / norm);
  }
  return basis;
}

DfsBasis dfs_basis(const HilbertSpace& space) {
  const int n_atoms = space.n_atoms();
  DfsBasis basis;
  for (int n = 0; n <= n_atoms / 2; ++n) {
    std::vector<CVector> generators;
    for (const StateVector& s : generating_states(n_atoms, n)) generators.push_back(s.amplitudes);
    for (CVector& atomic : orthonormalize(generators)) {
      CVector full = CVector::Zero(space.dim());
      full.head(space.atomic_dim()) = atomic;  // vacuum block comes first
      basis.vectors.push_back({std::move(full), true});
      basis.labels.push_back({n, 0.5 * n_atoms - n});
    }
  }
  return basis;
}

Operator dfs_projector(const DfsBasis& basis) {
  if (basis.vectors.empty()) return Operator{};
  const Index dim = basis.vectors.front().dim();
  CMatrix p = CMatrix::Zero(dim, dim);
  for (const StateVector& v : basis.vectors) p += v.amplitudes * v.amplitudes.adjoint();
  return Operator{std::move(p)};
}

Operator dfs_projector(const HilbertSpace& space) { return dfs_projector(dfs_basis(space)); }

Operator effective_hamiltonian(const HilbertSpace& space, const Pulse& pulse) {
  const CMatrix p = dfs_projector(space).matrix;
  const CMatrix h = space.params().gamma == 0.0 ? laser_hamiltonian(space, pulse).matrix
                                                : conditional_hamiltonian(space, pulse).matrix;
  return Operator{p * h * p};
}

Index collective_lowering_kernel_dimension(int n_atoms) {
  SystemParams p;
  p.n_atoms = n_atoms;
  p.n_max = 0;
  const HilbertSpace space(p);
  const CMatrix jm = collective_lowering(space).matrix;
  // Two-sided Jacobi: divide-and-conquer leaves ~1e-9 residues on exact zeros here.
  Eigen::JacobiSVD<CMatrix> svd(jm);
  const auto& sv = svd.singularValues();
  const double cutoff = kRankTolerance * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k) rank += sv(k) > cutoff ? 1 : 0;
  return space.dim() - rank;
}

CMatrix span_projector(const std::vector<CVector>& vectors, double tol) {
  if (vectors.empty()) return {};
  const Index dim = vectors.front().size();
  CMatrix p = CMatrix::Zero(dim, dim);
  for (const CVector& q : orthonormalize(vectors, tol)) p += q * q.adjoint();
  return p;
}

}  // namespace dfsim
