# Copyright 2026 The mdiqm Authors
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

"""Semi-quantum signaling game simulator for single-qubit memory checks."""

from ._core import (
    AttackReport,
    BsmModel,
    Channel,
    ConfigError,
    CurvePoint,
    DataError,
    MemoryParams,
    Tally,
    TomographyRecord,
    WitnessResult,
    bsm_povm,
    default_memory_params,
    exact_witness,
    is_entanglement_breaking,
    lambda_from_visibility,
    noise_strength,
    outcome_distribution,
    payoff,
    prepared_state,
    process_fidelity_to_identity,
    reconstruct_chi,
    run_attack_comparison,
    run_tomography,
    simulate_rounds,
    storage_efficiency,
    theory_curve,
    visibility_from_overlap,
    witness_estimate,
)

__all__ = [
    "AttackReport",
    "BsmModel",
    "Channel",
    "ConfigError",
    "CurvePoint",
    "DataError",
    "MemoryParams",
    "Tally",
    "TomographyRecord",
    "WitnessResult",
    "bsm_povm",
    "default_memory_params",
    "exact_witness",
    "is_entanglement_breaking",
    "lambda_from_visibility",
    "noise_strength",
    "outcome_distribution",
    "payoff",
    "prepared_state",
    "process_fidelity_to_identity",
    "reconstruct_chi",
    "run_attack_comparison",
    "run_tomography",
    "simulate_rounds",
    "storage_efficiency",
    "theory_curve",
    "visibility_from_overlap",
    "witness_estimate",
]

__version__ = "0.1.0"
