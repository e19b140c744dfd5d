"""Hilbert-space bookkeeping for two three-level atoms.

Each atom carries the levels |g> (index 0), |e> (index 1), |r> (index 2);
the qubit is encoded as |0> = |g>, |1> = |e>, with |r> the Rydberg level.
The pair space is ordered atom1 (x) atom2, so the product state |l1 l2>
sits at index 3*l1 + l2.  The computational block is the 4-dim subspace
spanned by {|gg>, |ge>, |eg>, |ee>} at indices {0, 1, 3, 4}.
"""

from __future__ import annotations

import numpy as np

G, E, R = 0, 1, 2

DIM_ATOM = 3
DIM_PAIR = DIM_ATOM * DIM_ATOM

#: pair-space indices of |00>, |01>, |10>, |11>
COMPUTATIONAL_INDICES = (0, 1, 3, 4)

IDENTITY_ATOM = np.eye(DIM_ATOM, dtype=complex)
IDENTITY_PAIR = np.eye(DIM_PAIR, dtype=complex)


def basis_index(l1: int, l2: int) -> int:
    """Pair-space index of |l1 l2> with atom 1 as the left tensor factor."""
    if not (0 <= l1 < DIM_ATOM and 0 <= l2 < DIM_ATOM):
        raise ValueError(f"atom levels must be in [0, {DIM_ATOM}), got ({l1}, {l2})")
    return DIM_ATOM * l1 + l2


def ket_atom(level: int) -> np.ndarray:
    """Single-atom basis ket as a length-3 complex vector."""
    v = np.zeros(DIM_ATOM, dtype=complex)
    v[level] = 1.0
    return v


def op_atom(a: int, b: int) -> np.ndarray:
    """Single-atom operator |a><b| as a dense 3x3 matrix."""
    m = np.zeros((DIM_ATOM, DIM_ATOM), dtype=complex)
    m[a, b] = 1.0
    return m


#: projector onto the single-atom qubit subspace span{|g>, |e>}
QUBIT_PROJECTOR_ATOM = op_atom(G, G) + op_atom(E, E)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with atom 1 as the left factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def embed_computational(u4: np.ndarray) -> np.ndarray:
    """Embed a 4x4 computational-block operator into the 9-dim pair space.

    Entries land on rows/columns {0, 1, 3, 4}; everything else is zero.
    """
    u4 = np.asarray(u4, dtype=complex)
    if u4.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got shape {u4.shape}")
    out = np.zeros((DIM_PAIR, DIM_PAIR), dtype=complex)
    idx = np.asarray(COMPUTATIONAL_INDICES)
    out[np.ix_(idx, idx)] = u4
    return out


def project_computational(op9: np.ndarray) -> np.ndarray:
    """Restrict a 9x9 pair-space operator to the 4x4 computational block."""
    op9 = np.asarray(op9, dtype=complex)
    if op9.shape != (DIM_PAIR, DIM_PAIR):
        raise ValueError(f"expected a 9x9 operator, got shape {op9.shape}")
    idx = np.asarray(COMPUTATIONAL_INDICES)
    return op9[np.ix_(idx, idx)]
