"""Hamiltonian builders: structure, Hermiticity, scaling, schedules."""

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgqc.hilbert import (
    DIM_PAIR,
    E,
    G,
    R,
    basis_index,
    ket_atom,
    op_atom,
    tensor,
)
from fgqc.gates import preset_params
from fgqc.pulses import (
    SCHEME_DG,
    SCHEME_FGQC,
    GateParams,
    NoiseModel,
    bright_dark,
    original_fgqc_hamiltonian,
    original_fgqc_schedule,
    schedule,
    step1_hamiltonian,
    step2_hamiltonian,
)

DG_PARAMS = preset_params("cnot", SCHEME_DG)
FGQC_PARAMS = preset_params("cnot", SCHEME_FGQC)


def _hermiticity_defect(h):
    h = np.atleast_3d(h)
    return np.max(np.abs(h - h.conj().transpose(0, 2, 1)))


# ---------------------------------------------------------------------------
# bright/dark basis
# ---------------------------------------------------------------------------


def test_bright_dark_examples():
    b, d = bright_dark(0.0, 0.0)
    assert np.allclose(b, [0.0, 1.0])
    assert np.allclose(d, [1.0, 0.0])
    b, d = bright_dark(np.pi, 0.0)
    assert np.allclose(b, [1.0, 0.0])
    assert np.allclose(d, [0.0, -1.0])
    b, _ = bright_dark(-np.pi / 2, 0.0)
    assert np.allclose(b, np.array([-1.0, 1.0]) / np.sqrt(2))


@given(
    theta=st.floats(-np.pi, np.pi),
    phi=st.floats(-np.pi, np.pi),
)
@settings(max_examples=60, deadline=None)
def test_bright_dark_orthonormal(theta, phi):
    b, d = bright_dark(theta, phi)
    assert abs(np.vdot(b, b) - 1.0) < 1e-12
    assert abs(np.vdot(d, d) - 1.0) < 1e-12
    assert abs(np.vdot(b, d)) < 1e-12


# ---------------------------------------------------------------------------
# Hermiticity of every builder
# ---------------------------------------------------------------------------


@given(
    t=st.floats(0.0, 7.8),
    delta=st.floats(-0.2, 0.2),
    deltap=st.floats(-0.2, 0.2),
    sign=st.sampled_from([1, -1]),
)
@settings(max_examples=60, deadline=None)
def test_step1_hermitian_both_schemes(t, delta, deltap, sign):
    noise = NoiseModel(rabi_error=delta, detuning_error=deltap)
    for params in (DG_PARAMS, FGQC_PARAMS):
        h = step1_hamiltonian(np.array([t]), params, noise, sign=sign)
        assert _hermiticity_defect(h) < 1e-12


@given(
    t=st.floats(0.0, 7.8),
    delta=st.floats(-0.2, 0.2),
    theta=st.floats(-np.pi, np.pi),
    phi=st.floats(-np.pi, np.pi),
)
@settings(max_examples=60, deadline=None)
def test_step2_hermitian(t, delta, theta, phi):
    params = dataclasses.replace(DG_PARAMS, theta=theta, phi=phi)
    h = step2_hamiltonian(np.array([t]), params, NoiseModel(rabi_error=delta))
    assert _hermiticity_defect(h) < 1e-12


def test_original_hamiltonian_hermitian():
    ts = np.linspace(0.0, 7.7, 40)
    h = original_fgqc_hamiltonian(
        ts, 4 * np.pi, 3.2576, 0.5806, np.pi / 2, 80 * np.pi, rabi_error=0.08
    )
    assert _hermiticity_defect(h) < 1e-12


# ---------------------------------------------------------------------------
# structural checks on the three steps
# ---------------------------------------------------------------------------


def test_step1_dg_is_constant_pi_pulse():
    noise = NoiseModel(rabi_error=0.1)
    ts = np.array([0.0, 0.1, 0.2])
    h = step1_hamiltonian(ts, DG_PARAMS, noise, sign=1)
    # constant in time
    assert np.allclose(h[0], h[1]) and np.allclose(h[0], h[2])
    expected = 0.5 * 1.1 * DG_PARAMS.rabi_pi * tensor(
        op_atom(G, R) + op_atom(R, G), np.eye(3)
    )
    assert np.allclose(h[0], expected, atol=1e-12)
    # the return pulse flips the sign
    h_back = step1_hamiltonian(ts, DG_PARAMS, noise, sign=-1)
    assert np.allclose(h_back, -h, atol=1e-12)


def test_step1_fgqc_noise_routing():
    # delta scales the transverse term, delta' the detuning term, independently
    ts = np.array([0.3, 1.1])
    base = step1_hamiltonian(ts, FGQC_PARAMS, NoiseModel(), sign=1)
    sz = tensor(op_atom(G, G) - op_atom(R, R), np.eye(3))

    bumped = step1_hamiltonian(ts, FGQC_PARAMS, NoiseModel(detuning_error=0.5), sign=1)
    change = bumped - base
    # the detuning bump is diagonal along sigma_z of the g-r transition
    for i in range(len(ts)):
        coeff = change[i, 0, 0]
        assert np.allclose(change[i], coeff * sz, atol=1e-12)

    scaled = step1_hamiltonian(ts, FGQC_PARAMS, NoiseModel(rabi_error=0.25), sign=1)
    transverse = scaled - base
    # the Rabi bump leaves the diagonal untouched
    assert np.max(np.abs(np.diagonal(transverse, axis1=1, axis2=2))) < 1e-12


def test_step1_fgqc_mirror_flips_only_transverse():
    ts = np.array([0.2, 0.9, 2.4])
    fwd = step1_hamiltonian(ts, FGQC_PARAMS, NoiseModel(), sign=1)
    back = step1_hamiltonian(ts, FGQC_PARAMS, NoiseModel(), sign=-1)
    diag = np.arange(DIM_PAIR)
    assert np.allclose(fwd[:, diag, diag], back[:, diag, diag], atol=1e-12)
    off_fwd = fwd.copy()
    off_back = back.copy()
    off_fwd[:, diag, diag] = 0.0
    off_back[:, diag, diag] = 0.0
    assert np.allclose(off_back, -off_fwd, atol=1e-12)


def test_step2_scales_linearly_with_rabi_error():
    ts = np.array([0.7, 2.3])
    v_term = DG_PARAMS.blockade * tensor(op_atom(R, R), op_atom(R, R))
    clean = step2_hamiltonian(ts, DG_PARAMS, NoiseModel()) - v_term
    noisy = step2_hamiltonian(ts, DG_PARAMS, NoiseModel(rabi_error=0.1)) - v_term
    assert np.allclose(noisy, 1.1 * clean, atol=1e-12)


def test_step2_dark_state_decouples():
    for theta, phi in [(-np.pi / 2, 0.0), (0.0, 0.0), (0.8, -1.2)]:
        params = dataclasses.replace(DG_PARAMS, theta=theta, phi=phi)
        _, d = bright_dark(theta, phi)
        dark3 = np.array([d[0], d[1], 0.0], dtype=complex)
        psi = tensor((ket_atom(G) + ket_atom(E) + ket_atom(R)) / np.sqrt(3), dark3)
        h = step2_hamiltonian(np.linspace(0, params.tau, 17), params, NoiseModel())
        assert np.max(np.abs(h @ psi)) < 1e-12


def test_step2_frozen_rydberg_control_branch():
    # ideal blockade: with the control in |r>, the drive does not act
    params = DG_PARAMS
    h = step2_hamiltonian(np.array([0.4, 1.9]), params, NoiseModel())
    for target_level in (G, E):
        psi = tensor(ket_atom(R), ket_atom(target_level))
        assert np.max(np.abs(h @ psi)) < 1e-12


def test_step2_blockade_term_present():
    h = step2_hamiltonian(np.array([0.0]), DG_PARAMS, NoiseModel())[0]
    rr = basis_index(R, R)
    assert h[rr, rr] == pytest.approx(DG_PARAMS.blockade)


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------


def test_dg_schedule_durations():
    sched = schedule(DG_PARAMS, NoiseModel())
    durations = [seg.duration for seg in sched.segments]
    assert durations == pytest.approx([0.25, 7.715, 0.25], rel=1e-6)
    assert sched.total_time == pytest.approx(sum(durations))
    assert len(sched.segments) == 3


def test_fgqc_schedule_durations():
    sched = schedule(FGQC_PARAMS, NoiseModel())
    durations = [seg.duration for seg in sched.segments]
    # control block duration matches its rounded reference value 7.797
    assert durations[0] == pytest.approx(7.797, rel=1e-3)
    assert durations[0] == durations[2]
    assert durations[1] == pytest.approx(7.715, rel=1e-6)


def test_schedule_scales_cover_fastest_frequency():
    for params in (DG_PARAMS, FGQC_PARAMS):
        sched = schedule(params, NoiseModel(rabi_error=0.1))
        drive_seg = sched.segments[1]
        assert drive_seg.scale >= params.blockade
        for seg in sched.segments:
            assert seg.scale > 0


def test_schedule_segment_labels():
    sched = schedule(DG_PARAMS, NoiseModel())
    labels = [seg.label for seg in sched.segments]
    assert labels == ["control-excite", "target-drive", "control-return"]


# ---------------------------------------------------------------------------
# noise model
# ---------------------------------------------------------------------------


def test_jump_operators_empty_without_decay():
    assert NoiseModel().jump_operators() == []


def test_jump_operators_rydberg_decay_structure():
    gamma = 1.3e-3
    ops = NoiseModel(gamma=gamma).jump_operators()
    assert len(ops) == 4
    # total out-rate from the Rydberg level is 7 gamma / 13 per atom
    k_total = sum(op.conj().T @ op for op in ops)
    p_r1 = tensor(op_atom(R, R), np.eye(3))
    p_r2 = tensor(np.eye(3), op_atom(R, R))
    assert np.allclose(k_total, (7 * gamma / 13) * (p_r1 + p_r2), atol=1e-15)


def test_jump_operators_literal_labels():
    ops = NoiseModel(gamma=1e-3, literal_jump_labels=True).jump_operators()
    # literal reading decays from |e> instead of |r>
    for op in ops:
        assert np.max(np.abs(op @ tensor(ket_atom(R), ket_atom(G)))) == 0.0
    total = sum(np.abs(op @ tensor(ket_atom(E), ket_atom(E))).sum() for op in ops)
    assert total > 0


def test_negative_decay_rejected():
    with pytest.raises(ValueError):
        NoiseModel(gamma=-1e-3).jump_operators()


# ---------------------------------------------------------------------------
# GateParams validation
# ---------------------------------------------------------------------------


def test_gate_params_rejects_broken_closure():
    params = dataclasses.replace(DG_PARAMS, tau=DG_PARAMS.tau * 1.1)
    with pytest.raises(ValueError, match="k\\*pi"):
        params.validate()


def test_gate_params_rejects_weak_blockade():
    params = dataclasses.replace(DG_PARAMS, blockade=5 * DG_PARAMS.rabi0)
    with pytest.raises(ValueError, match="blockade"):
        params.validate()


def test_gate_params_warns_on_low_adiabaticity():
    params = dataclasses.replace(DG_PARAMS, phase_rate=DG_PARAMS.drive_freq)
    with pytest.warns(UserWarning, match="adiabaticity"):
        params.validate()


def test_dg_params_require_pi_pulse_amplitude():
    with pytest.raises(ValueError):
        GateParams(
            gate="cnot",
            scheme=SCHEME_DG,
            theta=0.0,
            phi=0.0,
            rabi0=4 * np.pi,
            drive_freq=3.0,
            phase_rate=0.5,
            tau=8.0,
            k=8,
            blockade=80 * np.pi,
            rabi_pi=0.0,
        )


# ---------------------------------------------------------------------------
# original single-drive scheme
# ---------------------------------------------------------------------------


def test_original_hamiltonian_couples_bright_states():
    phi_angle = np.pi / 2
    h = original_fgqc_hamiltonian(
        np.array([0.0]), 4 * np.pi, 3.2576, 0.5806, phi_angle, 80 * np.pi
    )[0]
    bright = np.zeros(4, dtype=complex)
    bright[1] = np.sin(phi_angle / 2)
    bright[2] = -np.cos(phi_angle / 2)
    # at t=0 the drive couples |00> to the bright state with amplitude Omega0/2
    assert abs(np.vdot(bright, h[:, 0])) == pytest.approx(2 * np.pi, rel=1e-12)
    # the interaction sits on the doubly-excited state
    assert h[3, 3] == pytest.approx(80 * np.pi + 0j)


def test_original_schedule_shape():
    sched = original_fgqc_schedule(
        4 * np.pi, 3.2576463031391243, 0.5806335684510614, np.pi / 2,
        80 * np.pi, 8, 0.0,
    )
    assert sched.dim == 4
    assert len(sched.segments) == 1
    assert sched.total_time == pytest.approx(8 * np.pi / 3.2576463031391243)
