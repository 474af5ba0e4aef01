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

#include "dfsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dfsim {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kImagResidue = 1e-10;

// sin(S t) / S, continuous through S = 0.
Complex sin_over_s(Complex s, double t) {
  if (std::abs(s) * t < 1e-8) return t * (1.0 - (s * t) * (s * t) / 6.0);
  return std::sin(s * t) / s;
}

double checked_real(Complex z, const char* what) {
  if (std::abs(z.imag()) > kImagResidue * std::max(1.0, std::abs(z.real()))) {
    throw NumericalGuardError(std::string(what) + " has imaginary residue " + std::to_string(z.imag()));
  }
  return z.real();
}

}  // namespace

RabiCombination omega_pm(Complex omega1, Complex omega2) {
  const double scale = 1.0 / (2.0 * std::numbers::sqrt2);
  return {(omega1 + omega2) * scale, (omega1 - omega2) * scale};
}

EffectiveRates effective_rates(const SystemParams& params, Complex omega_plus, Complex omega_minus) {
  const double g = params.g;
  const double kappa = params.kappa;
  if (!(g > 0.0)) throw std::invalid_argument("effective rates need g > 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("effective rates need a leaky cavity (kappa > 0)");
  const double k1 = std::norm(omega_plus) * kappa / (2.0 * g * g);
  const double k2 = std::norm(omega_minus) * (2.0 * g * g + kappa * kappa) / (2.0 * g * g * kappa) + params.gamma;
  return {k1, k2};
}

SlowModel SlowModel::from_rates(double k1, double k2, Complex omega_minus) {
  if (k1 < 0.0 || k2 < 0.0) throw std::invalid_argument("slow-model rates must be >= 0");
  SlowModel m;
  m.k1 = k1;
  m.k2 = k2;
  m.omega_minus = omega_minus;
  const double mean = 0.5 * (k1 + k2);
  const double half_diff = 0.5 * (k1 - k2);
  // |Omega_-| sqrt(1 - (half_diff / |Omega_-|)^2) on the principal branch.
  m.s = std::sqrt(Complex(std::norm(omega_minus) - half_diff * half_diff, 0.0));
  m.lambda1 = mean + kI * m.s;
  m.lambda2 = mean - kI * m.s;
  return m;
}

SlowModel SlowModel::from_pulse(const SystemParams& params, Complex omega1, Complex omega2) {
  const RabiCombination w = omega_pm(omega1, omega2);
  const EffectiveRates r = effective_rates(params, w.plus, w.minus);
  return from_rates(r.k1, r.k2, w.minus);
}

Eigen::Matrix2cd SlowModel::matrix() const {
  Eigen::Matrix2cd m;
  m << k1, kI * omega_minus, kI * std::conj(omega_minus), k2;
  return m;
}

bool SlowModel::underdamped() const { return std::abs(k1 - k2) < 2.0 * std::abs(omega_minus); }

Eigen::Matrix2cd slow_propagator(const SlowModel& model, double t) {
  // The two-eigenvalue expansion with lambda_1,2 = mean +- i S, combined as
  // exp(-mean t) [cos(S t) I - (M - mean I) sin(S t) / S]; (M - mean I)^2 = -S^2 I.
  // This form is continuous through the confluent point S = 0.
  const double mean = 0.5 * (model.k1 + model.k2);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd shifted = model.matrix() - mean * id;
  return std::exp(-mean * t) * (std::cos(model.s * t) * id - shifted * sin_over_s(model.s, t));
}

Eigen::Vector2cd slow_amplitudes(const SlowModel& model, double t) {
  const double mean = 0.5 * (model.k1 + model.k2);
  const double half_diff = 0.5 * (model.k1 - model.k2);
  const Complex c = std::cos(model.s * t);
  const Complex sn = sin_over_s(model.s, t);
  const double decay = std::exp(-mean * t);
  return {decay * (c - half_diff * sn), decay * (-kI * std::conj(model.omega_minus) * sn)};
}

Eigen::Vector2cd final_dfs_state(const SlowModel& model, double duration) {
  const Eigen::Vector2cd c = slow_amplitudes(model, duration);
  const double n = c.norm();
  if (!(n >= 1e-300)) throw NumericalGuardError("slow amplitudes vanished; cannot normalize");
  return c / n;
}

double p0_closed_form(const SlowModel& model, double duration) {
  const double diff = model.k1 - model.k2;
  const Complex c = std::cos(model.s * duration);
  const Complex sn = sin_over_s(model.s, duration);
  const Complex bracket = 1.0 - diff * sn * c + 0.5 * diff * diff * sn * sn;
  return std::exp(-(model.k1 + model.k2) * duration) * checked_real(bracket, "P0 bracket");
}

double entangling_pulse_duration(const SlowModel& model) {
  if (!model.underdamped()) {
    throw NumericalGuardError("overdamped slow dynamics (|k1 - k2| >= 2|Omega_-|): no full rotation");
  }
  const double s = checked_real(model.s, "S");
  const double x = (model.k1 - model.k2) / (2.0 * s);
  const double arccot = 0.5 * std::numbers::pi - std::atan(x);
  return arccot / s;
}

ZenoReport zeno_timescale_check(const SystemParams& params, const Pulse& pulse) {
  const double inf = std::numeric_limits<double>::infinity();
  const double w = pulse.max_rabi();
  const double slowest = std::min(params.g, params.kappa);
  ZenoReport r;
  r.drive_ratio = w == 0.0 ? 0.0 : (slowest > 0.0 ? w / slowest : inf);
  r.decay_ratio = params.gamma == 0.0 ? 0.0 : (w > 0.0 ? params.gamma / w : inf);
  r.drive_ok = r.drive_ratio <= kZenoThreshold;
  r.decay_ok = r.decay_ratio <= kZenoThreshold;
  return r;
}

}  // namespace dfsim
