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
#include <random>

#include "dfsim/hamiltonians.hpp"

using namespace dfsim;

namespace {

constexpr Complex kI{0.0, 1.0};

SystemParams two_atoms(double kappa, double gamma, int n_max) {
  SystemParams p;
  p.n_atoms = 2;
  p.g = 1.3;
  p.kappa = kappa;
  p.gamma = gamma;
  p.n_max = n_max;
  return p;
}

CVector random_vector(Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CVector v(n);
  for (Index k = 0; k < n; ++k) v(k) = Complex(d(rng), d(rng));
  return v;
}

}  // namespace

TEST_CASE("anti-Hermitian part carries the decay rates") {
  SystemParams p = two_atoms(0.7, 0.05, 3);
  p.n_atoms = 3;
  const HilbertSpace space(p);
  const Pulse pulse{{Complex(0.1, 0.2), Complex(-0.3, 0.0), Complex(0.0, 0.05)}, 1.0};
  const CMatrix h = conditional_hamiltonian(space, pulse).matrix;
  const CMatrix herm = 0.5 * (h + h.adjoint());
  const CMatrix anti = 0.5 * (h - h.adjoint());

  const CMatrix b = cavity_annihilation(space).matrix;
  const CMatrix expected_anti = -kI * (p.kappa * b.adjoint() * b + p.gamma * excitation_number(space).matrix);
  CHECK((anti - expected_anti).norm() < 1e-14);

  CMatrix expected_herm = CMatrix::Zero(space.dim(), space.dim());
  for (int i = 1; i <= 3; ++i) {
    const CMatrix s = atomic_lowering(space, i).matrix;
    const Complex w = pulse.rabi[static_cast<std::size_t>(i - 1)];
    expected_herm += kI * p.g * (b * s.adjoint() - b.adjoint() * s);
    expected_herm += 0.5 * (w * s + std::conj(w) * s.adjoint());
  }
  CHECK((herm - expected_herm).norm() < 1e-14);
  CHECK((laser_hamiltonian(space, pulse).matrix - laser_hamiltonian(space, pulse).matrix.adjoint()).norm() == 0.0);
}

TEST_CASE("photon loss density equals the weighted occupation numbers") {
  SystemParams p = two_atoms(0.9, 0.02, 2);
  const HilbertSpace space(p);
  const Operator h = conditional_hamiltonian(space, Pulse{{0.3, -0.1}, 1.0});
  const StateVector psi = normalize(StateVector::from_amplitudes(random_vector(space.dim(), 7)));
  const CMatrix b = cavity_annihilation(space).matrix;
  const double photons = expectation(Operator{b.adjoint() * b}, psi).real();
  const double excited = expectation(excitation_number(space), psi).real();
  CHECK(photon_loss_density(h, psi) == doctest::Approx(2.0 * p.kappa * photons + 2.0 * p.gamma * excited));
  CHECK_THROWS_AS(photon_loss_density(h, StateVector::from_amplitudes(2.0 * psi.amplitudes)),
                  std::invalid_argument);
}

TEST_CASE("pair basis change is unitary and maps the singlet correctly") {
  const HilbertSpace space(two_atoms(1.0, 0.0, 2));
  const CMatrix w = pair_basis_change(space);
  CHECK((w.adjoint() * w - CMatrix::Identity(space.dim(), space.dim())).norm() < 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  // |a> = (|atom 1 excited> - |atom 2 excited>) / sqrt2
  CHECK(w(space.flat_index({1, 0b01}), pair_index(1, PairState::a)).real() == doctest::Approx(r));
  CHECK(w(space.flat_index({1, 0b10}), pair_index(1, PairState::a)).real() == doctest::Approx(-r));
  SystemParams three = two_atoms(1.0, 0.0, 1);
  three.n_atoms = 3;
  CHECK_THROWS_AS(pair_basis_change(HilbertSpace(three)), std::invalid_argument);
}

TEST_CASE("cavity coupling signs in the pair basis") {
  const HilbertSpace space(two_atoms(1.0, 0.0, 3));
  const CMatrix w = pair_basis_change(space);
  const CMatrix hp = w.adjoint() * conditional_hamiltonian(space).matrix * w;
  const double g = space.params().g;
  for (int n = 0; n < 3; ++n) {
    const double f = g * std::sqrt(2.0 * (n + 1));
    CHECK(std::abs(hp(pair_index(n + 1, PairState::g), pair_index(n, PairState::s)) - (-kI * f)) < 1e-14);
    CHECK(std::abs(hp(pair_index(n, PairState::s), pair_index(n + 1, PairState::g)) - (kI * f)) < 1e-14);
    // The singlet never couples to the cavity.
    for (Index k = 0; k < hp.rows(); ++k) {
      if (k == pair_index(n, PairState::a)) continue;
      CHECK(std::abs(hp(k, pair_index(n, PairState::a))) < 1e-14);
    }
  }
}

TEST_CASE("pair-basis ODE right-hand side equals -i H c") {
  for (double gamma : {0.0, 0.03}) {
    for (int n_max : {0, 1, 3}) {
      const SystemParams p = two_atoms(0.8, gamma, n_max);
      const HilbertSpace space(p);
      const Complex w1(0.07, 0.02);
      const Complex w2(-0.04, 0.05);
      const Complex wp = (w1 + w2) / (2.0 * std::sqrt(2.0));
      const Complex wm = (w1 - w2) / (2.0 * std::sqrt(2.0));
      const CMatrix w = pair_basis_change(space);
      const CMatrix hp = w.adjoint() * conditional_hamiltonian(space, Pulse{{w1, w2}, 0.0}).matrix * w;
      const CVector c = random_vector(space.dim(), 11 + static_cast<unsigned>(n_max));
      const CVector expected = -kI * (hp * c);
      CHECK((two_atom_ode_rhs(c, p, wp, wm) - expected).norm() < 1e-14 * (1.0 + expected.norm()));
    }
  }
  SystemParams p = two_atoms(1.0, 0.0, 1);
  CHECK_THROWS_AS(two_atom_ode_rhs(CVector::Zero(6), p, 0.0, 0.0), std::invalid_argument);
  p.n_atoms = 3;
  CHECK_THROWS_AS(two_atom_ode_rhs(CVector::Zero(8), p, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("pulse validation and the Zeno diagnostic") {
  const SystemParams p = two_atoms(1.0, 1e-4, 1);
  CHECK_THROWS_AS(Pulse({0.1}, 1.0).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(Pulse({0.1, 0.1}, -1.0).validate(2), std::invalid_argument);
  CHECK(Pulse({Complex(0.3, 0.4), 0.1}, 1.0).max_rabi() == doctest::Approx(0.5));
  SystemParams unit = p;
  unit.g = 1.0;
  CHECK(zeno_regime(Pulse{{0.01, -0.01}, 1.0}, unit));
  CHECK_FALSE(zeno_regime(Pulse{{0.5, -0.5}, 1.0}, unit));
}
