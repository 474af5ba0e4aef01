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

#include "dfsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "dfsim/expm.hpp"

namespace dfsim {

double segment_duration(const Segment& segment) {
  return std::visit([](const auto& s) { return s.duration; }, segment);
}

Operator segment_hamiltonian(const HilbertSpace& space, const Segment& segment) {
  if (const auto* pulse = std::get_if<Pulse>(&segment)) return conditional_hamiltonian(space, *pulse);
  return conditional_hamiltonian(space);
}

double Schedule::total_duration() const {
  double t = 0.0;
  for (const Segment& s : segments) t += segment_duration(s);
  return t;
}

void Schedule::validate(int n_atoms) const {
  for (const Segment& s : segments) {
    if (const auto* pulse = std::get_if<Pulse>(&s)) {
      pulse->validate(n_atoms);
    } else if (!(segment_duration(s) >= 0.0)) {
      throw std::invalid_argument("segment durations must be >= 0");
    }
  }
}

StateVector propagate_conditional(const Operator& h_cond, const StateVector& psi, double t) {
  if (psi.dim() != h_cond.dim()) throw std::invalid_argument("operator/state dimension mismatch");
  if (t == 0.0) return StateVector{psi.amplitudes, false};
  return StateVector{conditional_propagator(h_cond.matrix, t) * psi.amplitudes, false};
}

double no_photon_probability(const Operator& h_cond, const StateVector& psi, double t) {
  if (std::abs(psi.norm_squared() - 1.0) > 1e-9) {
    throw std::invalid_argument("no_photon_probability needs a normalized initial state");
  }
  return propagate_conditional(h_cond, psi, t).norm_squared();
}

StateVector conditional_state(const Operator& h_cond, const StateVector& psi, double t) {
  const StateVector out = propagate_conditional(h_cond, psi, t);
  const double n = out.amplitudes.norm();
  if (!(n >= 1e-300)) {
    throw NumericalGuardError("conditional state has vanishing norm; no-emission branch is empty");
  }
  return StateVector{out.amplitudes / n, true};
}

StateVector propagate_schedule(const HilbertSpace& space, const Schedule& schedule,
                               const StateVector& psi) {
  schedule.validate(space.n_atoms());
  StateVector out{psi.amplitudes, false};
  for (const Segment& s : schedule.segments) {
    out = propagate_conditional(segment_hamiltonian(space, s), out, segment_duration(s));
  }
  return out;
}

CVector integrate_pair_amplitudes(const SystemParams& params, Complex omega_plus,
                                  Complex omega_minus, const CVector& c0, double t,
                                  double rel_tol, double abs_tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Complex>;

  if (params.n_atoms != 2) throw std::invalid_argument("pair amplitudes need n_atoms == 2");
  if (c0.size() != 4 * (Index{params.n_max} + 1)) {
    throw std::invalid_argument("initial pair coefficients do not match n_max");
  }
  if (t < 0.0) throw std::invalid_argument("integration time must be >= 0");

  State state(c0.data(), c0.data() + c0.size());
  if (t == 0.0) return c0;

  auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
    const CVector d = two_atom_ode_rhs(Eigen::Map<const CVector>(x.data(), Index(x.size())), params,
                                       omega_plus, omega_minus);
    dxdt.assign(d.data(), d.data() + d.size());
  };
  const double rate = std::max({params.g, params.kappa, std::abs(omega_plus), std::abs(omega_minus)});
  odeint::integrate_adaptive(
      odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>()), rhs, state,
      0.0, t, 0.1 / rate);
  return Eigen::Map<const CVector>(state.data(), Index(state.size()));
}

}  // namespace dfsim
