# Copyright 2026 The dfs-cavity-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python bindings and the command-line tool."""

import math
import os
import subprocess
import json

import numpy as np
import pytest

import dfs_cavity_sim as dcs


def test_dimensions():
    assert [dcs.dfs_dimension(n) for n in range(1, 7)] == [1, 2, 3, 6, 10, 20]
    assert dcs.kernel_dimension(5) == 10
    assert dcs.dicke_degeneracy(4, 0.0) == 2
    assert dcs.dimension(dcs.SystemParams(n_atoms=3, n_max=2)) == 24
    assert dcs.flat_index(dcs.SystemParams(), 1, 2) == 6


def test_dfs_basis_is_orthonormal_and_trapped():
    params = dcs.SystemParams(n_atoms=4, n_max=1)
    vectors, labels = dcs.dfs_basis(params)
    assert vectors.shape == (32, 6)
    assert [n for n, _ in labels] == [0, 1, 1, 1, 2, 2]
    np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(6), atol=1e-12)
    h = dcs.conditional_hamiltonian(params)
    assert np.linalg.norm(h @ vectors) < 1e-12


def test_expm_matches_eigendecomposition():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = a + a.conj().T
    w, v = np.linalg.eigh(h)
    ref = v @ np.diag(np.exp(-1j * 0.7 * w)) @ v.conj().T
    np.testing.assert_allclose(dcs.expm(-1j * 0.7 * h), ref, atol=1e-12)


def test_entangling_pulse():
    params = dcs.SystemParams()
    t = dcs.entangling_pulse_duration(params, 0.02, -0.02)
    assert abs(t - math.pi / (2 * 0.02 / math.sqrt(2))) / t < 0.05
    psi = dcs.conditional_state(params, [0.02, -0.02], t)
    singlet = np.zeros(psi.size, dtype=complex)
    singlet[1], singlet[2] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    assert abs(np.vdot(singlet, psi)) ** 2 > 0.999
    p0 = dcs.no_photon_probability(params, [0.02, -0.02], t)
    assert abs(p0 - dcs.p0_closed_form(params, 0.02, -0.02)) / p0 < 0.01


def test_sweep_point_and_errors():
    row = dcs.sweep_point(dcs.SystemParams(gamma=1e-4), 0.03, eta=1.0)
    assert row["zeno_ok"]
    assert row["fidelity_conditional"] > 0.99
    assert row["fidelity_no_detection"] == pytest.approx(row["fidelity_conditional"])
    with pytest.raises(dcs.NumericalGuardError):
        dcs.entangling_pulse_duration(dcs.SystemParams(gamma=0.01), 0.001, -0.001)
    with pytest.raises(ValueError):
        dcs.SystemParams(n_atoms=0)


def test_ensemble_against_master_equation():
    params = dcs.SystemParams(gamma=0.05, n_max=1)
    rabi, t = [0.4, 0.1], 6.0
    ens = dcs.run_ensemble(params, rabi, t, 2000, seed=11)
    again = dcs.run_ensemble(params, rabi, t, 2000, seed=11)
    assert ens["p0_estimate"] == again["p0_estimate"]
    rho0 = np.zeros((8, 8), dtype=complex)
    rho0[0, 0] = 1.0
    rho = dcs.master_equation_evolve(params, rabi, t, rho0, t)
    assert abs(np.trace(rho) - 1) < 1e-9
    assert np.max(np.abs(ens["density_matrix"] - rho)) < 5 / math.sqrt(2000)
    p0 = dcs.no_photon_probability(params, rabi, t)
    assert abs(ens["p0_estimate"] - p0) < 4 * math.sqrt(p0 * (1 - p0) / 2000)


def test_run_command(tmp_path):
    summary, files = dcs.run_command("basis", "n_atoms = 3\n", str(tmp_path))
    assert "dimension 3" in summary
    sidecar = json.loads((tmp_path / "dfs_basis.json").read_text())
    assert sidecar["dimension"] == 3
    with pytest.raises(dcs.ConfigError):
        dcs.run_command("sweep", "n_atoms = 3\n", str(tmp_path))


@pytest.mark.skipif("DFS_SIM_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["DFS_SIM_CLI"]
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mode = sweep\nsweep_omega1 = 0.01, 0.02\nsweep_gamma = 0\n")
    done = subprocess.run([cli, "sweep", "--config", str(cfg), "--out", str(tmp_path)])
    assert done.returncode == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("omega1_over_g,gamma_over_g,T_g")
    assert len(lines) == 3
    cfg.write_text("n_atoms = -1\n")
    assert subprocess.run([cli, "basis", "--config", str(cfg)], capture_output=True).returncode == 2
