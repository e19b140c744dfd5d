"""Floquet geometric entangling gates for two three-level Rydberg atoms.

Simulates the three-step controlled-gate protocol (control excitation,
bright-state Floquet drive on the target, control return) for both the
dynamical-control (dg-fgqc) and Floquet-control (fgqc-fgqc) schemes, plus
the original single-drive comparison gate, with amplitude, detuning, and
Rydberg-decay error models and average-gate-fidelity evaluation.
"""

from .hilbert import (
    COMPUTATIONAL_INDICES,
    DIM_ATOM,
    DIM_PAIR,
    E,
    G,
    R,
    basis_index,
    embed_computational,
    ket_atom,
    project_computational,
    tensor,
)
from .floquet import (
    bessel_j0,
    coefficient_C,
    effective_gate,
    effective_hamiltonian_control,
    effective_hamiltonian_target,
    micromotion_rotation,
    solve_params,
    x_field,
)
from .pulses import (
    SCHEME_DG,
    SCHEME_FGQC,
    GateParams,
    NoiseModel,
    PulseSchedule,
    PulseSegment,
    bright_dark,
    original_fgqc_hamiltonian,
    schedule,
    step1_hamiltonian,
    step2_hamiltonian,
)
from .propagate import (
    IntegratorConfig,
    QuantumChannel,
    apply_channel,
    convergence_check,
    evolve_lindblad,
    evolve_unitary,
    make_channel,
)
from .gates import (
    CNOT,
    CT,
    ideal_controlled,
    ideal_gate,
    original_fgqc_channel,
    original_fgqc_ideal,
    preset_params,
    realized_channel,
)
from .fidelity import (
    FidelityResult,
    average_gate_fidelity,
    pauli_basis2,
)

__version__ = "0.1.0"

__all__ = [
    "COMPUTATIONAL_INDICES",
    "DIM_ATOM",
    "DIM_PAIR",
    "G",
    "E",
    "R",
    "basis_index",
    "ket_atom",
    "tensor",
    "embed_computational",
    "project_computational",
    "bessel_j0",
    "coefficient_C",
    "x_field",
    "effective_hamiltonian_target",
    "effective_hamiltonian_control",
    "effective_gate",
    "micromotion_rotation",
    "solve_params",
    "SCHEME_DG",
    "SCHEME_FGQC",
    "GateParams",
    "NoiseModel",
    "PulseSegment",
    "PulseSchedule",
    "bright_dark",
    "step1_hamiltonian",
    "step2_hamiltonian",
    "schedule",
    "original_fgqc_hamiltonian",
    "IntegratorConfig",
    "QuantumChannel",
    "evolve_unitary",
    "evolve_lindblad",
    "apply_channel",
    "make_channel",
    "convergence_check",
    "CNOT",
    "CT",
    "ideal_controlled",
    "ideal_gate",
    "preset_params",
    "realized_channel",
    "original_fgqc_ideal",
    "original_fgqc_channel",
    "FidelityResult",
    "pauli_basis2",
    "average_gate_fidelity",
    "__version__",
]
