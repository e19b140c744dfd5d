"""Average gate fidelity: basis properties, sanity values, leakage."""

import numpy as np
import pytest

from fgqc.fidelity import (
    average_gate_fidelity,
    pauli_basis1,
    pauli_basis2,
)
from fgqc.gates import CNOT
from fgqc.hilbert import DIM_PAIR, embed_computational, project_computational
from fgqc.propagate import QuantumChannel


def _channel_from_map(dim, apply_fn):
    def apply_many(batch):
        return np.stack([apply_fn(a) for a in np.asarray(batch, complex)])

    return QuantumChannel(dim=dim, apply=apply_fn, apply_many=apply_many)


def _conjugation_channel(w):
    return _channel_from_map(w.shape[0], lambda a: w @ a @ w.conj().T)


# ---------------------------------------------------------------------------
# Pauli bases
# ---------------------------------------------------------------------------


def test_two_qubit_basis_orthogonality():
    basis = pauli_basis2()
    assert basis.shape == (16, 4, 4)
    gram = np.einsum("aij,bij->ab", basis.conj(), basis)  # tr(Pa^dag Pb)
    assert np.allclose(gram, 4.0 * np.eye(16), atol=1e-13)


def test_two_qubit_basis_ordering():
    basis = pauli_basis2()
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(basis[0], np.eye(4))
    # second factor varies fastest
    assert np.allclose(basis[1], np.kron(np.eye(2), sx))
    assert np.allclose(basis[4], np.kron(sx, np.eye(2)))


def test_single_qubit_basis():
    basis = pauli_basis1()
    assert basis.shape == (4, 2, 2)
    gram = np.einsum("aij,bij->ab", basis.conj(), basis)  # tr(Pa^dag Pb)
    assert np.allclose(gram, 2.0 * np.eye(4), atol=1e-14)


# ---------------------------------------------------------------------------
# fidelity values
# ---------------------------------------------------------------------------


def test_perfect_gate_scores_unity():
    ch = _conjugation_channel(embed_computational(CNOT))
    res = average_gate_fidelity(CNOT, ch)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.leakage == pytest.approx(0.0, abs=1e-12)
    assert res.dimension == 4


def test_depolarizing_channel_scores_quarter():
    eye = embed_computational(np.eye(4, dtype=complex))

    def depolarize(a):
        return eye * (np.trace(project_computational(a)).real / 4.0)

    res = average_gate_fidelity(CNOT, _channel_from_map(DIM_PAIR, depolarize))
    assert res.value == pytest.approx(0.25, abs=1e-12)


def test_global_phase_invariance():
    w = embed_computational(np.exp(1j * 0.73) * CNOT)
    res = average_gate_fidelity(CNOT, _conjugation_channel(w))
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_direct_four_dim_channel():
    res = average_gate_fidelity(CNOT, _conjugation_channel(CNOT.copy()))
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.leakage == pytest.approx(0.0, abs=1e-12)


def test_single_qubit_variant():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    res = average_gate_fidelity(sx, _conjugation_channel(sx.copy()))
    assert res.value == pytest.approx(1.0, abs=1e-12)
    # a maximally wrong single-qubit comparison: identity target vs X channel
    res = average_gate_fidelity(np.eye(2, dtype=complex), _conjugation_channel(sx.copy()))
    assert res.value == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_leakage_of_lossy_channel():
    w = embed_computational(np.eye(4, dtype=complex))

    def lossy(a):
        return 0.8 * (w @ a @ w.conj().T)

    res = average_gate_fidelity(CNOT, _channel_from_map(DIM_PAIR, lossy))
    assert res.leakage == pytest.approx(0.2, abs=1e-12)


def test_dimension_validation():
    ch = _conjugation_channel(CNOT.copy())
    with pytest.raises(ValueError):
        average_gate_fidelity(np.eye(3), ch)
    with pytest.raises(ValueError):
        average_gate_fidelity(np.eye(2), ch)


def test_meta_carries_noise_parameters(cfg):
    from fgqc.gates import preset_params, realized_channel
    from fgqc.pulses import NoiseModel

    params = preset_params("ct", "dg-fgqc")
    noise = NoiseModel(rabi_error=0.05, gamma=0.0)
    res = average_gate_fidelity(
        np.eye(4, dtype=complex), realized_channel(params, noise, cfg)
    )
    assert res.meta["rabi_error"] == 0.05
    assert res.meta["gamma"] == 0.0
