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

#include "dfsim/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dfsim {
namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

double Pulse::max_rabi() const {
  double m = 0.0;
  for (const Complex& w : rabi) m = std::max(m, std::abs(w));
  return m;
}

void Pulse::validate(int n_atoms) const {
  if (static_cast<int>(rabi.size()) != n_atoms) {
    throw std::invalid_argument("pulse has " + std::to_string(rabi.size()) +
                                " Rabi frequencies for " + std::to_string(n_atoms) + " atoms");
  }
  if (!(duration >= 0.0)) throw std::invalid_argument("pulse duration must be >= 0");
}

bool zeno_regime(const Pulse& pulse, const SystemParams& params) {
  const double w = pulse.max_rabi();
  return w <= 0.1 * std::min(params.g, params.kappa) && params.gamma <= 0.1 * w;
}

Operator laser_hamiltonian(const HilbertSpace& space, const Pulse& pulse) {
  pulse.validate(space.n_atoms());
  CMatrix h = CMatrix::Zero(space.dim(), space.dim());
  for (int i = 1; i <= space.n_atoms(); ++i) {
    const Complex w = pulse.rabi[static_cast<std::size_t>(i - 1)];
    if (w == Complex{}) continue;
    const CMatrix sigma = atomic_lowering(space, i).matrix;
    h += 0.5 * w * sigma + 0.5 * std::conj(w) * sigma.adjoint();
  }
  return Operator{std::move(h)};
}

Operator conditional_hamiltonian(const HilbertSpace& space) {
  const SystemParams& p = space.params();
  const CMatrix b = cavity_annihilation(space).matrix;
  const CMatrix jm = collective_lowering(space).matrix;
  CMatrix h = kI * p.g * (b * jm.adjoint() - b.adjoint() * jm);
  h -= kI * p.gamma * excitation_number(space).matrix;
  h -= kI * p.kappa * (b.adjoint() * b);
  return Operator{std::move(h)};
}

Operator conditional_hamiltonian(const HilbertSpace& space, const Pulse& pulse) {
  Operator h = conditional_hamiltonian(space);
  h.matrix += laser_hamiltonian(space, pulse).matrix;
  return h;
}

double photon_loss_density(const Operator& h_cond, const StateVector& psi) {
  if (std::abs(psi.norm_squared() - 1.0) > 1e-9) {
    throw std::invalid_argument("photon_loss_density needs a normalized state");
  }
  const Complex v = psi.amplitudes.dot((h_cond.matrix - h_cond.matrix.adjoint()) * psi.amplitudes);
  return -v.imag();
}

CMatrix pair_basis_change(const HilbertSpace& space) {
  if (space.n_atoms() != 2) throw std::invalid_argument("pair basis needs exactly two atoms");
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix w = CMatrix::Zero(space.dim(), space.dim());
  for (int n = 0; n <= space.n_max(); ++n) {
    auto at = [&](std::uint32_t bits) { return space.flat_index({n, bits}); };
    w(at(0b00), pair_index(n, PairState::g)) = 1.0;
    w(at(0b01), pair_index(n, PairState::a)) = r;
    w(at(0b10), pair_index(n, PairState::a)) = -r;
    w(at(0b01), pair_index(n, PairState::s)) = r;
    w(at(0b10), pair_index(n, PairState::s)) = r;
    w(at(0b11), pair_index(n, PairState::e)) = 1.0;
  }
  return w;
}

CVector two_atom_ode_rhs(const CVector& c, const SystemParams& params, Complex omega_plus,
                         Complex omega_minus) {
  if (params.n_atoms != 2) throw std::invalid_argument("two_atom_ode_rhs needs n_atoms == 2");
  if (c.size() == 0 || c.size() % 4 != 0) {
    throw std::invalid_argument("pair coefficients must have length 4 (n_max + 1)");
  }
  const int top = static_cast<int>(c.size() / 4) - 1;
  const double g = params.g;
  const double kappa = params.kappa;
  const double gamma = params.gamma;
  const Complex wp = omega_plus;
  const Complex wm = omega_minus;

  auto at = [&](int n, PairState x) -> Complex {
    if (n < 0 || n > top) return 0.0;
    return c(pair_index(n, x));
  };

  CVector d(c.size());
  for (int n = 0; n <= top; ++n) {
    const double dn = n;
    const double down = std::sqrt(2.0 * dn);
    const double up = std::sqrt(2.0 * (dn + 1.0));
    const Complex cg = at(n, PairState::g);
    const Complex ca = at(n, PairState::a);
    const Complex cs = at(n, PairState::s);
    const Complex ce = at(n, PairState::e);

    d(pair_index(n, PairState::g)) =
        -kI * wm * ca - kI * wp * cs - down * g * at(n - 1, PairState::s) - dn * kappa * cg;
    d(pair_index(n, PairState::a)) =
        -kI * std::conj(wm) * cg + kI * wm * ce - (gamma + dn * kappa) * ca;
    d(pair_index(n, PairState::s)) = -kI * std::conj(wp) * cg - kI * wp * ce -
                                     down * g * at(n - 1, PairState::e) +
                                     up * g * at(n + 1, PairState::g) - (gamma + dn * kappa) * cs;
    d(pair_index(n, PairState::e)) = kI * std::conj(wm) * ca - kI * std::conj(wp) * cs +
                                     up * g * at(n + 1, PairState::s) -
                                     (2.0 * gamma + dn * kappa) * ce;
  }
  return d;
}

}  // namespace dfsim
