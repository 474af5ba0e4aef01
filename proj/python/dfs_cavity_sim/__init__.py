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

"""Simulator for two-level atoms in a leaky optical cavity."""

from ._core import (
    ConfigError,
    NumericalGuardError,
    SystemParams,
    conditional_hamiltonian,
    conditional_state,
    dfs_basis,
    dfs_dimension,
    dicke_degeneracy,
    dimension,
    effective_hamiltonian,
    entangling_pulse_duration,
    expm,
    flat_index,
    kernel_dimension,
    master_equation_evolve,
    no_photon_probability,
    p0_closed_form,
    run_command,
    run_ensemble,
    sweep_point,
)

__all__ = [
    "ConfigError",
    "NumericalGuardError",
    "SystemParams",
    "conditional_hamiltonian",
    "conditional_state",
    "dfs_basis",
    "dfs_dimension",
    "dicke_degeneracy",
    "dimension",
    "effective_hamiltonian",
    "entangling_pulse_duration",
    "expm",
    "flat_index",
    "kernel_dimension",
    "master_equation_evolve",
    "no_photon_probability",
    "p0_closed_form",
    "run_command",
    "run_ensemble",
    "sweep_point",
]
__version__ = "0.1.0"
