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

#include "dfsim/hilbert.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace dfsim {

void SystemParams::validate() const {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  if (!(g > 0.0)) throw std::invalid_argument("g must be > 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (n_atoms > kMaxAtoms) {
    throw std::invalid_argument("n_atoms = " + std::to_string(n_atoms) +
                                " exceeds the desk-scale limit of " + std::to_string(kMaxAtoms));
  }
  const Index dim = (Index{1} << n_atoms) * (static_cast<Index>(n_max) + 1);
  if (dim > kMaxDimension) {
    throw std::invalid_argument("space dimension " + std::to_string(dim) +
                                " exceeds the desk-scale limit of " + std::to_string(kMaxDimension));
  }
}

HilbertSpace::HilbertSpace(const SystemParams& params) : params_(params) {
  params_.validate();
  atomic_dim_ = Index{1} << params_.n_atoms;
}

Index HilbertSpace::flat_index(const BasisIndex& b) const {
  if (b.photon_number < 0 || b.photon_number > params_.n_max) {
    throw std::out_of_range("photon number out of range");
  }
  if (static_cast<Index>(b.atomic_config) >= atomic_dim_) {
    throw std::out_of_range("atomic configuration out of range");
  }
  return static_cast<Index>(b.photon_number) * atomic_dim_ + static_cast<Index>(b.atomic_config);
}

BasisIndex HilbertSpace::basis_index(Index flat) const {
  if (flat < 0 || flat >= dim()) throw std::out_of_range("flat index out of range");
  return BasisIndex{static_cast<int>(flat / atomic_dim_),
                    static_cast<std::uint32_t>(flat % atomic_dim_)};
}

HilbertSpace HilbertSpace::atomic_only() const {
  SystemParams p = params_;
  p.n_max = 0;
  return HilbertSpace(p);
}

HilbertSpace build_space(const SystemParams& params) { return HilbertSpace(params); }

void StateVector::check() const {
  if (normalized && std::abs(norm_squared() - 1.0) >= 1e-12) {
    throw std::invalid_argument("state flagged normalized has squared norm " +
                                std::to_string(norm_squared()));
  }
}

StateVector StateVector::basis(const HilbertSpace& space, const BasisIndex& b) {
  CVector v = CVector::Zero(space.dim());
  v(space.flat_index(b)) = 1.0;
  return StateVector{std::move(v), true};
}

StateVector StateVector::from_amplitudes(CVector amplitudes) {
  return StateVector{std::move(amplitudes), false};
}

StateVector normalize(const StateVector& psi) {
  const double n = psi.amplitudes.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  return StateVector{psi.amplitudes / n, true};
}

StateVector Operator::apply(const StateVector& psi) const {
  if (psi.dim() != dim()) throw std::invalid_argument("operator/state dimension mismatch");
  return StateVector{matrix * psi.amplitudes, false};
}

Operator identity(const HilbertSpace& space) {
  return Operator{CMatrix::Identity(space.dim(), space.dim())};
}

Operator atomic_lowering(const HilbertSpace& space, int atom) {
  if (atom < 1 || atom > space.n_atoms()) {
    throw std::out_of_range("atom index " + std::to_string(atom) + " outside 1.." +
                            std::to_string(space.n_atoms()));
  }
  const std::uint32_t mask = 1u << (atom - 1);
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (Index col = 0; col < space.dim(); ++col) {
    const BasisIndex b = space.basis_index(col);
    if (b.atomic_config & mask) {
      m(space.flat_index({b.photon_number, b.atomic_config & ~mask}), col) = 1.0;
    }
  }
  return Operator{std::move(m)};
}

Operator cavity_annihilation(const HilbertSpace& space) {
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (Index col = 0; col < space.dim(); ++col) {
    const BasisIndex b = space.basis_index(col);
    if (b.photon_number > 0) {
      m(space.flat_index({b.photon_number - 1, b.atomic_config}), col) =
          std::sqrt(static_cast<double>(b.photon_number));
    }
  }
  return Operator{std::move(m)};
}

Operator collective_lowering(const HilbertSpace& space) {
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (int i = 1; i <= space.n_atoms(); ++i) m += atomic_lowering(space, i).matrix;
  return Operator{std::move(m)};
}

Operator excitation_number(const HilbertSpace& space) {
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (Index k = 0; k < space.dim(); ++k) {
    m(k, k) = static_cast<double>(std::popcount(space.basis_index(k).atomic_config));
  }
  return Operator{std::move(m)};
}

Complex expectation(const Operator& op, const StateVector& psi) {
  if (psi.dim() != op.dim()) throw std::invalid_argument("operator/state dimension mismatch");
  return psi.amplitudes.dot(op.matrix * psi.amplitudes);
}

}  // namespace dfsim
