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


#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dfsim/analytic.hpp"
#include "dfsim/commands.hpp"
#include "dfsim/config.hpp"
#include "dfsim/dfs.hpp"
#include "dfsim/dynamics.hpp"
#include "dfsim/expm.hpp"
#include "dfsim/hamiltonians.hpp"
#include "dfsim/hilbert.hpp"

namespace py = pybind11;
using namespace dfsim;

namespace {

Schedule single_pulse(std::vector<Complex> rabi, double duration, double settle) {
  Schedule s;
  s.segments.push_back(Pulse{std::move(rabi), duration});
  if (settle > 0.0) s.segments.push_back(Idle{settle});
  return s;
}

StateVector ground_or(const HilbertSpace& space, const std::optional<CVector>& initial) {
  if (!initial) return StateVector::basis(space, {0, 0});
  if (initial->size() != space.dim()) throw std::invalid_argument("initial state dimension mismatch");
  return normalize(StateVector::from_amplitudes(*initial));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trapped-state dynamics of two-level atoms in a leaky cavity";

  py::register_exception<NumericalGuardError>(m, "NumericalGuardError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](int n_atoms, double g, double kappa, double gamma, int n_max) {
             SystemParams p{n_atoms, g, kappa, gamma, n_max};
             p.validate();
             return p;
           }),
           py::arg("n_atoms") = 2, py::arg("g") = 1.0, py::arg("kappa") = 1.0, py::arg("gamma") = 0.0,
           py::arg("n_max") = 3)
      .def_readwrite("n_atoms", &SystemParams::n_atoms)
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("kappa", &SystemParams::kappa)
      .def_readwrite("gamma", &SystemParams::gamma)
      .def_readwrite("n_max", &SystemParams::n_max)
      .def("validate", &SystemParams::validate)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(n_atoms=" + std::to_string(p.n_atoms) + ", g=" + std::to_string(p.g) +
               ", kappa=" + std::to_string(p.kappa) + ", gamma=" + std::to_string(p.gamma) +
               ", n_max=" + std::to_string(p.n_max) + ")";
      });

  m.def("dimension", [](const SystemParams& p) { return HilbertSpace(p).dim(); },
        "Full Hilbert-space dimension 2^N (n_max + 1).");
  m.def("flat_index",
        [](const SystemParams& p, int photons, std::uint32_t config) {
          return HilbertSpace(p).flat_index({photons, config});
        },
        py::arg("params"), py::arg("photon_number"), py::arg("atomic_config"));

  m.def("dfs_dimension", &dfs_dimension, py::arg("n_atoms"));
  m.def("dicke_degeneracy", &dicke_degeneracy, py::arg("n_atoms"), py::arg("l"));
  m.def("kernel_dimension", &collective_lowering_kernel_dimension, py::arg("n_atoms"),
        "Numerical dimension of ker J_- in the cavity vacuum.");
  m.def("dfs_basis",
        [](const SystemParams& p) {
          const HilbertSpace space(p);
          const DfsBasis basis = dfs_basis(space);
          CMatrix cols(space.dim(), static_cast<Index>(basis.size()));
          std::vector<std::pair<int, double>> labels;
          for (std::size_t k = 0; k < basis.size(); ++k) {
            cols.col(static_cast<Index>(k)) = basis.vectors[k].amplitudes;
            labels.emplace_back(basis.labels[k].excitations, basis.labels[k].l);
          }
          return py::make_tuple(cols, labels);
        },
        py::arg("params"), "Orthonormal trapped states as columns, with (excitations, l) labels.");

  m.def("conditional_hamiltonian",
        [](const SystemParams& p, std::optional<std::vector<Complex>> rabi) {
          const HilbertSpace space(p);
          if (!rabi) return conditional_hamiltonian(space).matrix;
          return conditional_hamiltonian(space, Pulse{*rabi, 0.0}).matrix;
        },
        py::arg("params"), py::arg("rabi") = py::none());
  m.def("effective_hamiltonian",
        [](const SystemParams& p, std::vector<Complex> rabi) {
          return effective_hamiltonian(HilbertSpace(p), Pulse{std::move(rabi), 0.0}).matrix;
        },
        py::arg("params"), py::arg("rabi"));
  m.def("expm", &expm, py::arg("matrix"), "Dense matrix exponential (Pade scaling and squaring).");

  m.def("no_photon_probability",
        [](const SystemParams& p, std::vector<Complex> rabi, double duration, double settle,
           std::optional<CVector> initial) {
          const HilbertSpace space(p);
          const Schedule s = single_pulse(std::move(rabi), duration, settle);
          return propagate_schedule(space, s, ground_or(space, initial)).norm_squared();
        },
        py::arg("params"), py::arg("rabi"), py::arg("duration"), py::arg("settle") = 0.0,
        py::arg("initial") = py::none());
  m.def("conditional_state",
        [](const SystemParams& p, std::vector<Complex> rabi, double duration, double settle,
           std::optional<CVector> initial) {
          const HilbertSpace space(p);
          const Schedule s = single_pulse(std::move(rabi), duration, settle);
          const StateVector out = propagate_schedule(space, s, ground_or(space, initial));
          if (!(out.norm_squared() >= 1e-300)) throw NumericalGuardError("conditional state vanished");
          return CVector(out.amplitudes / out.amplitudes.norm());
        },
        py::arg("params"), py::arg("rabi"), py::arg("duration"), py::arg("settle") = 0.0,
        py::arg("initial") = py::none());

  m.def("entangling_pulse_duration",
        [](const SystemParams& p, Complex w1, Complex w2) {
          return entangling_pulse_duration(SlowModel::from_pulse(p, w1, w2));
        },
        py::arg("params"), py::arg("omega1"), py::arg("omega2"));
  m.def("p0_closed_form",
        [](const SystemParams& p, Complex w1, Complex w2, std::optional<double> duration) {
          const SlowModel model = SlowModel::from_pulse(p, w1, w2);
          return p0_closed_form(model, duration ? *duration : entangling_pulse_duration(model));
        },
        py::arg("params"), py::arg("omega1"), py::arg("omega2"), py::arg("duration") = py::none());
  m.def("sweep_point",
        [](const SystemParams& p, double omega1, double eta) {
          const SweepRow r = sweep_point(p, omega1, eta);
          py::dict d;
          d["omega1_over_g"] = r.omega1_over_g;
          d["gamma_over_g"] = r.gamma_over_g;
          d["T_g"] = r.t_g;
          d["p0_numeric"] = r.p0_numeric;
          d["p0_analytic"] = r.p0_analytic;
          d["fidelity_conditional"] = r.fidelity_conditional;
          d["fidelity_no_detection"] = r.fidelity_no_detection;
          d["zeno_ok"] = r.zeno_ok;
          return d;
        },
        py::arg("params"), py::arg("omega1"), py::arg("eta") = 0.0,
        "One two-atom preparation point with omega2 = -omega1.");

  m.def("run_ensemble",
        [](const SystemParams& p, std::vector<Complex> rabi, double duration, std::size_t n_samples,
           std::uint64_t seed, std::optional<CVector> initial) {
          const HilbertSpace space(p);
          const TrajectorySampler sampler(space, single_pulse(std::move(rabi), duration, 0.0));
          EnsembleResult r;
          {
            py::gil_scoped_release release;
            r = run_ensemble(sampler, ground_or(space, initial), static_cast<Index>(n_samples), seed);
          }
          py::dict d;
          d["p0_estimate"] = r.p0_estimate;
          d["stderr"] = r.p0_stderr;
          d["n_samples"] = r.n_samples;
          d["n_jumped"] = r.n_jumped;
          d["seed"] = r.seed;
          d["density_matrix"] = r.density_matrix;
          return d;
        },
        py::arg("params"), py::arg("rabi"), py::arg("duration"), py::arg("n_samples"),
        py::arg("seed") = 1, py::arg("initial") = py::none());
  m.def("master_equation_evolve",
        [](const SystemParams& p, std::vector<Complex> rabi, double duration, const CMatrix& rho0,
           double t) {
          const HilbertSpace space(p);
          return master_equation_evolve(space, single_pulse(std::move(rabi), duration, 0.0), rho0, t);
        },
        py::arg("params"), py::arg("rabi"), py::arg("duration"), py::arg("rho0"), py::arg("t"));

  m.def("run_command",
        [](const std::string& mode, const std::string& config_text, const std::filesystem::path& out_dir) {
          const CommandResult r = run_command(parse_mode(mode), parse_config(config_text), out_dir);
          return py::make_tuple(r.summary, r.files);
        },
        py::arg("mode"), py::arg("config_text"), py::arg("out_dir"),
        "Runs a CLI command from config text; returns (summary, written files).");
}
