"""Average gate fidelity and leakage via the Pauli-transfer twirl.

For a d-dimensional target unitary U and channel eps,

    F_avg = [ sum_j tr(U P_j^dag U^dag eps(P_j)) + d^2 ] / [ d^2 (d + 1) ]

with {P_j} the d^2 Pauli operators.  Channels acting on the full two-atom
space (dim 9) are probed by embedding each Pauli into the computational
block and projecting the output back, which also yields the leakage out
of the computational subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import DIM_PAIR, embed_computational, project_computational
from .propagate import QuantumChannel

_PAULI_1 = (
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)


def pauli_basis1() -> np.ndarray:
    """The four single-qubit Paulis, shape (4, 2, 2), order 1, x, y, z."""
    return np.stack(_PAULI_1)


def pauli_basis2() -> np.ndarray:
    """The 16 two-qubit Paulis P_i (x) P_j, shape (16, 4, 4), j fastest."""
    return np.stack([np.kron(p, q) for p in _PAULI_1 for q in _PAULI_1])


@dataclass(frozen=True)
class FidelityResult:
    """Average gate fidelity plus the leakage seen by the identity input."""

    value: float
    leakage: float
    dimension: int
    meta: dict = field(default_factory=dict)


def average_gate_fidelity(u_ideal: np.ndarray, channel: QuantumChannel) -> FidelityResult:
    """Twirl the channel against the ideal unitary over the Pauli basis.

    u_ideal is 4x4 (two-qubit gates) or 2x2 (single-qubit checks).  The
    channel may act directly on that dimension, or on the full two-atom
    space (dim 9) for 4x4 targets, in which case inputs are embedded in
    the computational block and outputs projected back.
    """
    u = np.asarray(u_ideal, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"u_ideal must be square, got shape {u.shape}")
    d = u.shape[0]
    if d == 4:
        basis = pauli_basis2()
    elif d == 2:
        basis = pauli_basis1()
    else:
        raise ValueError(f"unsupported gate dimension {d}; expected 2 or 4")

    if channel.dim == d:
        inputs = basis
        project = None
    elif channel.dim == DIM_PAIR and d == 4:
        inputs = np.stack([embed_computational(p) for p in basis])
        project = project_computational
    else:
        raise ValueError(
            f"channel dim {channel.dim} incompatible with gate dim {d}"
        )

    outputs = channel.apply_many(inputs)

    total = 0.0
    uh = u.conj().T
    for j in range(basis.shape[0]):
        mapped = outputs[j] if project is None else project(outputs[j])
        total += np.trace(u @ basis[j].conj().T @ uh @ mapped).real
    value = (total + d * d) / (d * d * (d + 1))

    # basis[0] is the identity: its image carries the leakage directly
    image_id = outputs[0] if project is None else project(outputs[0])
    leakage = 1.0 - np.trace(image_id).real / d

    meta = {"channel": channel.label}
    if channel.noise is not None:
        meta.update(
            rabi_error=channel.noise.rabi_error,
            detuning_error=channel.noise.detuning_error,
            gamma=channel.noise.gamma,
        )
    return FidelityResult(
        value=float(value), leakage=float(leakage), dimension=d, meta=meta
    )
