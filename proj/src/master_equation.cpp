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

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dfsim/dynamics.hpp"

namespace dfsim {
namespace {

constexpr double kTraceDriftLimit = 1e-6;

struct Lindbladian {
  CMatrix h;
  CMatrix h_adj;
  std::vector<CMatrix> jumps;
  std::vector<CMatrix> jumps_adj;

  CMatrix operator()(const CMatrix& rho) const {
    const Complex mi{0.0, -1.0};
    CMatrix out = mi * (h * rho - rho * h_adj);
    for (std::size_t k = 0; k < jumps.size(); ++k) out.noalias() += jumps[k] * rho * jumps_adj[k];
    return out;
  }
};

void evolve_segment(const Lindbladian& l, CMatrix& rho, double duration, double max_step) {
  if (duration <= 0.0) return;
  const long steps = std::max(1L, static_cast<long>(std::ceil(duration / max_step)));
  const double dt = duration / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    const CMatrix k1 = l(rho);
    const CMatrix k2 = l(rho + 0.5 * dt * k1);
    const CMatrix k3 = l(rho + 0.5 * dt * k2);
    const CMatrix k4 = l(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

}  // namespace

void check_density_matrix(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > tol) throw std::invalid_argument("density matrix trace != 1");
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

CMatrix master_equation_evolve(const HilbertSpace& space, const Schedule& schedule,
                               const CMatrix& rho0, double t) {
  if (rho0.rows() != space.dim() || rho0.cols() != space.dim()) {
    throw std::invalid_argument("initial density matrix dimension mismatch");
  }
  check_density_matrix(rho0, 1e-8);
  if (t < 0.0) throw std::invalid_argument("evolution time must be >= 0");
  schedule.validate(space.n_atoms());

  Lindbladian l;
  for (const JumpOperator& c : jump_operators(space)) {
    l.jumps.push_back(c.matrix);
    l.jumps_adj.push_back(c.matrix.adjoint());
  }
  const SystemParams& p = space.params();

  CMatrix rho = rho0;
  double elapsed = 0.0;
  auto run = [&](const Operator& h, double duration) {
    l.h = h.matrix;
    l.h_adj = h.matrix.adjoint();
    Eigen::JacobiSVD<CMatrix> svd(h.matrix);
    const double h_norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const double max_step = 1e-2 / std::max({p.g, p.kappa, h_norm});
    evolve_segment(l, rho, duration, max_step);
    elapsed += duration;
    const double drift = std::abs(rho.trace() - 1.0);
    if (drift > kTraceDriftLimit) {
      throw NumericalGuardError("master equation trace drift " + std::to_string(drift) +
                                " at t = " + std::to_string(elapsed));
    }
  };

  for (const Segment& s : schedule.segments) {
    if (elapsed >= t) break;
    run(segment_hamiltonian(space, s), std::min(segment_duration(s), t - elapsed));
  }
  if (elapsed < t) run(conditional_hamiltonian(space), t - elapsed);
  return rho;
}

NoDetectionMixture no_detection_mixture(double p0, const StateVector& psi0, const CMatrix& rho_perp,
                                        double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  if (std::abs(psi0.norm_squared() - 1.0) > 1e-9) throw std::invalid_argument("psi0 must be normalized");
  if (rho_perp.rows() != psi0.dim()) throw std::invalid_argument("rho_perp dimension mismatch");
  const double perp_weight = (1.0 - eta) * (1.0 - p0);
  if (perp_weight > 0.0) check_density_matrix(rho_perp, 1e-8);

  const double denom = 1.0 - eta * (1.0 - p0);
  if (!(denom > 0.0)) {
    throw NumericalGuardError("no-detection branch is empty (p0 = 0 with eta = 1)");
  }
  const CVector& v = psi0.amplitudes;
  CMatrix rho = p0 * (v * v.adjoint());
  if (perp_weight > 0.0) rho += perp_weight * rho_perp;
  rho /= rho.trace().real();
  return {std::move(rho), p0 / denom};
}

double fidelity(const CMatrix& rho, const StateVector& target) {
  if (rho.rows() != target.dim()) throw std::invalid_argument("rho/target dimension mismatch");
  if (std::abs(target.norm_squared() - 1.0) > 1e-9) {
    throw std::invalid_argument("fidelity target must be normalized");
  }
  return target.amplitudes.dot(rho * target.amplitudes).real();
}

}  // namespace dfsim
