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


#include "dfsim/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "dfsim/analytic.hpp"
#include "dfsim/expm.hpp"

namespace dfsim {
namespace {

Json params_json(const SystemParams& p) {
  return {{"n_atoms", p.n_atoms}, {"g", p.g}, {"kappa", p.kappa}, {"gamma", p.gamma}, {"n_max", p.n_max}};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json schedule_json(const Schedule& schedule) {
  Json out = Json::array();
  for (const Segment& s : schedule.segments) {
    Json seg{{"duration", segment_duration(s)}};
    if (const auto* pulse = std::get_if<Pulse>(&s)) {
      Json rabi = Json::array();
      for (Complex w : pulse->rabi) rabi.push_back(complex_json(w));
      seg["rabi"] = rabi;
    } else {
      seg["rabi"] = nullptr;
    }
    out.push_back(seg);
  }
  return out;
}

double automatic_duration(const RunConfig& config) {
  if (config.params.n_atoms != 2 || config.rabi.size() != 2) {
    throw ConfigError("automatic `duration` is only defined for two atoms");
  }
  if (!(config.params.kappa > 0.0)) throw ConfigError("automatic `duration` needs kappa > 0");
  return entangling_pulse_duration(SlowModel::from_pulse(config.params, config.rabi[0], config.rabi[1]));
}

double fidelity_to(const StateVector& target, const StateVector& phi) {
  return std::norm(target.amplitudes.dot(phi.amplitudes));
}

/// Target state, or nullopt when none applies. `conditional` resolves to phi.
std::optional<StateVector> resolve_target(const RunConfig& config, const HilbertSpace& space,
                                          const StateVector& phi) {
  const std::optional<StateSpec> spec = default_target(config);
  if (!spec) return std::nullopt;
  if (spec->kind == StateSpec::Kind::conditional) return phi;
  return resolve_state(space, *spec);
}

/// Conditional propagation between output times, reusing the full-step
/// propagator of every segment.
class ScheduleStepper {
 public:
  ScheduleStepper(const HilbertSpace& space, const Schedule& schedule, double step) : step_(step) {
    double start = 0.0;
    for (const Segment& s : schedule.segments) {
      const double d = segment_duration(s);
      if (d > 0.0) pieces_.push_back({start, start + d, segment_hamiltonian(space, s).matrix, {}});
      start += d;
    }
  }

  CVector advance(CVector psi, double from, double to) {
    for (Piece& p : pieces_) {
      const double lo = std::max(from, p.start);
      const double hi = std::min(to, p.end);
      const double len = hi - lo;
      if (!(len > 0.0)) continue;
      if (std::abs(len - step_) <= 1e-12 * step_) {
        if (p.step.size() == 0) p.step = conditional_propagator(p.h, step_);
        psi = p.step * psi;
      } else {
        psi = conditional_propagator(p.h, len) * psi;
      }
    }
    return psi;
  }

 private:
  struct Piece {
    double start;
    double end;
    CMatrix h;
    CMatrix step;
  };
  double step_;
  std::vector<Piece> pieces_;
};

std::string sector_summary(const DfsBasis& basis) {
  std::ostringstream s;
  int last = -1;
  int count = 0;
  bool first = true;
  const auto flush = [&] {
    if (last < 0) return;
    s << (first ? "" : ", ") << "n=" << last << ": " << count;
    first = false;
  };
  for (const SectorLabel& label : basis.labels) {
    if (label.excitations != last) {
      flush();
      last = label.excitations;
      count = 0;
    }
    ++count;
  }
  flush();
  return s.str();
}

}  // namespace

Schedule resolve_schedule(const RunConfig& config) {
  Schedule schedule;
  if (!config.segments.empty()) {
    for (const SegmentSpec& s : config.segments) {
      if (s.rabi.empty()) {
        schedule.segments.push_back(Idle{s.duration});
      } else {
        schedule.segments.push_back(Pulse{s.rabi, s.duration});
      }
    }
  } else if (!config.rabi.empty()) {
    const double d = config.duration ? *config.duration : automatic_duration(config);
    schedule.segments.push_back(Pulse{config.rabi, d});
  } else if (config.duration) {
    schedule.segments.push_back(Idle{*config.duration});
  }
  if (config.settle > 0.0) schedule.segments.push_back(Idle{config.settle});
  try {
    schedule.validate(config.params.n_atoms);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return schedule;
}

StateVector resolve_state(const HilbertSpace& space, const StateSpec& spec) {
  switch (spec.kind) {
    case StateSpec::Kind::ground:
      return StateVector::basis(space, {0, 0});
    case StateSpec::Kind::dfs: {
      DfsBasis basis = dfs_basis(space);
      if (spec.dfs_index < 0 || static_cast<std::size_t>(spec.dfs_index) >= basis.size()) {
        throw ConfigError("dfs:" + std::to_string(spec.dfs_index) + " is out of range (dimension " +
                          std::to_string(basis.size()) + ")");
      }
      return basis.vectors[static_cast<std::size_t>(spec.dfs_index)];
    }
    case StateSpec::Kind::basis:
      try {
        return StateVector::basis(space, spec.basis);
      } catch (const std::out_of_range& e) {
        throw ConfigError(std::string("basis state: ") + e.what());
      }
    case StateSpec::Kind::conditional:
      break;
  }
  throw ConfigError("`conditional` is only valid as a target");
}

std::optional<StateSpec> default_target(const RunConfig& config) {
  if (config.target) return config.target;
  if (config.params.n_atoms == 2) return StateSpec{StateSpec::Kind::dfs, 1, {}};
  return std::nullopt;
}

SweepRow sweep_point(const SystemParams& params, double omega1, double eta) {
  if (params.n_atoms != 2) throw std::invalid_argument("sweep points are defined for two atoms");
  const Complex w1{omega1, 0.0};
  const Complex w2 = -w1;
  const SlowModel model = SlowModel::from_pulse(params, w1, w2);
  const double t = entangling_pulse_duration(model);

  const RabiCombination w = omega_pm(w1, w2);
  CVector c0 = CVector::Zero(4 * (Index{params.n_max} + 1));
  c0(pair_index(0, PairState::g)) = 1.0;
  const CVector c = integrate_pair_amplitudes(params, w.plus, w.minus, c0, t);
  const double pg = std::norm(c(pair_index(0, PairState::g)));
  const double pa = std::norm(c(pair_index(0, PairState::a)));

  SweepRow row;
  row.omega1_over_g = omega1 / params.g;
  row.gamma_over_g = params.gamma / params.g;
  row.t_g = t * params.g;
  row.p0_numeric = pg + pa;
  row.p0_analytic = p0_closed_form(model, t);
  if (!(row.p0_numeric > 0.0)) throw NumericalGuardError("trapped-state population vanished");
  row.fidelity_conditional = pa / row.p0_numeric;
  const double denom = 1.0 - eta * (1.0 - row.p0_numeric);
  row.fidelity_no_detection = row.fidelity_conditional * row.p0_numeric / denom;
  row.zeno_ok = zeno_timescale_check(params, Pulse{{w1, w2}, t}).pass();
  return row;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

CommandResult cmd_basis(const RunConfig& config, const std::filesystem::path& out_dir) {
  SystemParams p = config.params;
  p.n_max = 0;  // trapped states live in the cavity vacuum
  const HilbertSpace space(p);
  const DfsBasis basis = dfs_basis(space);

  CommandResult r;
  r.files = {out_dir / "dfs_basis.csv", out_dir / "dfs_basis.json"};
  write_file(r.files[0], dfs_basis_csv(basis));
  write_file(r.files[1], json_text(dfs_basis_sidecar(space, basis)));
  r.summary = "DFS dimension " + std::to_string(basis.size()) + " for N = " + std::to_string(p.n_atoms) +
              " (" + sector_summary(basis) + ")";
  return r;
}

CommandResult cmd_evolve(const RunConfig& config, const std::filesystem::path& out_dir) {
  const HilbertSpace space(config.params);
  const Schedule schedule = resolve_schedule(config);
  const double total = schedule.total_duration();
  if (!(total > 0.0)) throw ConfigError("schedule has zero duration");

  const StateVector psi0 = resolve_state(space, config.initial);
  const CMatrix projector = dfs_projector(space).matrix;
  const CMatrix b = cavity_annihilation(space).matrix;
  const CMatrix photons = b.adjoint() * b;
  const CMatrix excitations = excitation_number(space).matrix;
  const std::optional<StateVector> target = [&]() -> std::optional<StateVector> {
    const auto spec = default_target(config);
    if (!spec || spec->kind == StateSpec::Kind::conditional) return std::nullopt;
    return resolve_state(space, *spec);
  }();

  std::vector<std::string> header{"t", "p0", "dfs_population", "mean_photons", "mean_excitations"};
  if (target) header.push_back("target_fidelity");

  const int points = config.output_points;
  const double dt = total / (points - 1);
  ScheduleStepper stepper(space, schedule, dt);
  std::vector<std::vector<double>> rows;
  CVector psi = psi0.amplitudes;
  double t_prev = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = k == points - 1 ? total : k * dt;
    psi = stepper.advance(std::move(psi), t_prev, t);
    t_prev = t;
    const double p0 = psi.squaredNorm();
    if (!(p0 >= 1e-300)) throw NumericalGuardError("conditional state norm underflowed at t = " + format_double(t));
    const CVector phi = psi / std::sqrt(p0);
    std::vector<double> row{t, p0, phi.dot(projector * phi).real(), phi.dot(photons * phi).real(),
                            phi.dot(excitations * phi).real()};
    if (target) row.push_back(std::norm(target->amplitudes.dot(phi)));
    rows.push_back(std::move(row));
  }

  Json meta{{"mode", "evolve"},
            {"params", params_json(config.params)},
            {"schedule", schedule_json(schedule)},
            {"total_duration", total},
            {"output_points", points},
            {"p0_final", rows.back()[1]},
            {"dfs_population_final", rows.back()[2]}};
  if (target) meta["target_fidelity_final"] = rows.back()[5];

  CommandResult r;
  r.files = {out_dir / "evolve.csv", out_dir / "evolve.json"};
  write_file(r.files[0], numeric_csv(header, rows));
  write_file(r.files[1], json_text(meta));
  r.summary = "P0(" + format_double(total) + ") = " + format_double(rows.back()[1]);
  return r;
}

CommandResult cmd_pulse(const RunConfig& config, const std::filesystem::path& out_dir) {
  const HilbertSpace space(config.params);
  const Schedule schedule = resolve_schedule(config);
  const StateVector psi0 = resolve_state(space, config.initial);

  const StateVector psi_t = propagate_schedule(space, schedule, psi0);
  const double p0 = psi_t.norm_squared();
  if (!(p0 >= 1e-300)) throw NumericalGuardError("conditional state norm underflowed");
  const StateVector phi{psi_t.amplitudes / std::sqrt(p0), true};

  const DfsBasis basis = dfs_basis(space);
  Json overlaps = Json::array();
  double dfs_population = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double w = fidelity_to(basis.vectors[k], phi);
    dfs_population += w;
    overlaps.push_back({{"vector_index", k},
                        {"excitations", basis.labels[k].excitations},
                        {"l", basis.labels[k].l},
                        {"probability", w}});
  }

  double max_drive = 0.0;
  double max_decay = 0.0;
  bool zeno_ok = true;
  for (const Segment& s : schedule.segments) {
    if (const auto* pulse = std::get_if<Pulse>(&s)) {
      const ZenoReport z = zeno_timescale_check(config.params, *pulse);
      max_drive = std::max(max_drive, z.drive_ratio);
      max_decay = std::max(max_decay, z.decay_ratio);
      zeno_ok = zeno_ok && z.pass();
    }
  }

  Json meta{{"mode", "pulse"},
            {"params", params_json(config.params)},
            {"schedule", schedule_json(schedule)},
            {"total_duration", schedule.total_duration()},
            {"p0", p0},
            {"dfs_population", dfs_population},
            {"dfs_overlaps", overlaps},
            {"zeno", {{"drive_ratio", max_drive}, {"decay_ratio", max_decay}, {"pass", zeno_ok}}}};
  const std::optional<StateVector> target = resolve_target(config, space, phi);
  if (target) meta["target_fidelity"] = fidelity_to(*target, phi);

  std::vector<std::vector<double>> rows;
  for (Index i = 0; i < phi.dim(); ++i) {
    const BasisIndex bi = space.basis_index(i);
    rows.push_back({static_cast<double>(i), static_cast<double>(bi.photon_number),
                    static_cast<double>(bi.atomic_config), phi.amplitudes(i).real(),
                    phi.amplitudes(i).imag()});
  }

  CommandResult r;
  r.files = {out_dir / "pulse_state.csv", out_dir / "pulse.json"};
  write_file(r.files[0], numeric_csv({"flat_basis_index", "photon_number", "atomic_config",
                                      "re_amplitude", "im_amplitude"},
                                     rows));
  write_file(r.files[1], json_text(meta));
  r.summary = "P0 = " + format_double(p0) + ", DFS population " + format_double(dfs_population);
  if (target) r.summary += ", target fidelity " + format_double(fidelity_to(*target, phi));
  return r;
}

CommandResult cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir) {
  const std::size_t n_omega = config.sweep_omega1.size();
  const std::size_t n_gamma = config.sweep_gamma.size();
  std::vector<SweepRow> rows(n_omega * n_gamma);
  parallel_for(rows.size(), [&](std::size_t i) {
    SystemParams p = config.params;
    p.gamma = config.sweep_gamma[i / n_omega] * p.g;
    rows[i] = sweep_point(p, config.sweep_omega1[i % n_omega] * p.g, config.eta);
  });

  Json zeno = Json::array();
  std::size_t zeno_pass = 0;
  for (const SweepRow& row : rows) {
    zeno.push_back(row.zeno_ok);
    zeno_pass += row.zeno_ok ? 1 : 0;
  }
  Json meta{
      {"mode", "sweep"},
      {"params", params_json(config.params)},
      {"omega2", "-omega1"},
      {"eta", config.eta},
      {"row_order", "gamma-major, omega1 ascending"},
      {"omega1_grid", config.sweep_omega1},
      {"omega1_grid_source",
       config.sweep_omega1_default ? "default: 40 log-spaced points in [1e-3, 0.3]" : "config"},
      {"gamma_list", config.sweep_gamma},
      {"gamma_list_source",
       config.sweep_gamma_default ? "default: documented choice, not a measured value" : "config"},
      {"zeno_ok", zeno}};

  CommandResult r;
  r.files = {out_dir / "sweep.csv", out_dir / "sweep.json"};
  write_file(r.files[0], sweep_csv(rows));
  write_file(r.files[1], json_text(meta));
  r.summary = std::to_string(rows.size()) + " grid points (" + std::to_string(zeno_pass) +
              " inside the Zeno regime)";
  return r;
}

CommandResult cmd_trajectories(const RunConfig& config, const std::filesystem::path& out_dir) {
  const HilbertSpace space(config.params);
  const Schedule schedule = resolve_schedule(config);
  const StateVector initial = resolve_state(space, config.initial);

  const StateVector psi_t = propagate_schedule(space, schedule, initial);
  const double p0_exact = psi_t.norm_squared();
  if (!(p0_exact >= 1e-300)) throw NumericalGuardError("no-emission branch has vanishing weight");
  const StateVector psi0{psi_t.amplitudes / std::sqrt(p0_exact), true};

  const TrajectorySampler sampler(space, schedule);
  EnsembleOptions options;
  options.keep_trajectories = config.trajectory_log;
  const EnsembleResult ens = run_ensemble(sampler, initial, config.samples, config.seed, options);

  const StateVector target = resolve_target(config, space, psi0).value_or(psi0);
  const NoDetectionMixture mix = no_detection_mixture(ens.p0_estimate, psi0, ens.rho_perp, config.eta);
  const double fid = fidelity(mix.rho, target);

  Json meta{{"p0_estimate", ens.p0_estimate},
            {"stderr", ens.p0_stderr},
            {"n_samples", ens.n_samples},
            {"seed", ens.seed},
            {"fidelity", fid},
            {"eta", config.eta},
            {"n_jumped", ens.n_jumped},
            {"p0_conditional_norm", p0_exact},
            {"fidelity_conditional", fidelity_to(target, psi0)},
            {"fidelity_multiplier", mix.fidelity_multiplier},
            {"total_duration", schedule.total_duration()},
            {"params", params_json(config.params)},
            {"schedule", schedule_json(schedule)}};

  CommandResult r;
  r.files = {out_dir / "ensemble.json"};
  write_file(r.files[0], json_text(meta));
  if (config.trajectory_log) {
    r.files.push_back(out_dir / "trajectories.csv");
    write_file(r.files[1], trajectory_csv(ens.trajectories));
  }
  r.summary = "jump-free fraction " + format_double(ens.p0_estimate) + " +/- " +
              format_double(ens.p0_stderr) + " over " + std::to_string(ens.n_samples) +
              " trajectories; fidelity " + format_double(fid) + " at eta = " + format_double(config.eta);
  return r;
}

CommandResult run_command(Mode mode, const RunConfig& config, const std::filesystem::path& out_dir) {
  if (config.mode && *config.mode != mode) {
    throw ConfigError("config declares mode `" + std::string(mode_name(*config.mode)) +
                      "` but the command is `" + std::string(mode_name(mode)) + "`");
  }
  config.validate(mode);
  switch (mode) {
    case Mode::basis: return cmd_basis(config, out_dir);
    case Mode::evolve: return cmd_evolve(config, out_dir);
    case Mode::pulse: return cmd_pulse(config, out_dir);
    case Mode::sweep: return cmd_sweep(config, out_dir);
    case Mode::trajectories: return cmd_trajectories(config, out_dir);
  }
  throw ConfigError("unknown mode");
}

}  // namespace dfsim
