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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dfsim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr int kMaxAtoms = 12;
inline constexpr Index kMaxDimension = 65536;

/// Raised when a numerical quantity leaves its guarded range (trace drift,
/// norm collapse, overdamped pulse design). Distinct from bad input.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rates of the atom-cavity system. hbar = 1, every entry is an angular
/// frequency. gamma and kappa are amplitude decay rates.
struct SystemParams {
  int n_atoms = 2;
  double g = 1.0;
  double kappa = 1.0;
  double gamma = 0.0;
  int n_max = 3;

  void validate() const;
};

/// Photon number and atomic bitstring; bit (i-1) set iff atom i is excited.
struct BasisIndex {
  int photon_number = 0;
  std::uint32_t atomic_config = 0;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Truncated product space Fock(n_max) x (C^2)^N with photon-major ordering:
/// flat = n * 2^N + bits.
class HilbertSpace {
 public:
  explicit HilbertSpace(const SystemParams& params);

  const SystemParams& params() const { return params_; }
  int n_atoms() const { return params_.n_atoms; }
  int n_max() const { return params_.n_max; }
  Index atomic_dim() const { return atomic_dim_; }
  Index dim() const { return atomic_dim_ * (params_.n_max + 1); }

  Index flat_index(const BasisIndex& b) const;
  BasisIndex basis_index(Index flat) const;

  /// Same atoms, cavity truncated at n_max = 0.
  HilbertSpace atomic_only() const;

 private:
  SystemParams params_;
  Index atomic_dim_;
};

HilbertSpace build_space(const SystemParams& params);

struct StateVector {
  CVector amplitudes;
  bool normalized = false;

  double norm_squared() const { return amplitudes.squaredNorm(); }
  Index dim() const { return amplitudes.size(); }

  /// Throws if the normalized flag is set but the norm deviates by >= 1e-12.
  void check() const;

  static StateVector basis(const HilbertSpace& space, const BasisIndex& b);
  static StateVector from_amplitudes(CVector amplitudes);
};

/// Returns psi / ||psi|| flagged as normalized.
StateVector normalize(const StateVector& psi);

struct Operator {
  CMatrix matrix;

  Index dim() const { return matrix.rows(); }
  StateVector apply(const StateVector& psi) const;
  Operator adjoint() const { return Operator{matrix.adjoint()}; }
};

Operator identity(const HilbertSpace& space);

/// sigma_i = |0><1| on atom i (1-based), identity elsewhere.
Operator atomic_lowering(const HilbertSpace& space, int atom);
Operator cavity_annihilation(const HilbertSpace& space);
/// J_- = sum_i sigma_i.
Operator collective_lowering(const HilbertSpace& space);
/// sum_i sigma_i^dagger sigma_i, diagonal.
Operator excitation_number(const HilbertSpace& space);

/// <psi|A|psi> on the raw amplitudes.
Complex expectation(const Operator& op, const StateVector& psi);

}  // namespace dfsim
