"""Pulse-schedule builders for the three-step entangling protocols.

Both schemes share the same skeleton on two three-level atoms:

  step 1  excite the control qubit |g>_1 -> |r>_1 (pi pulse or Floquet X),
  step 2  run the Floquet geometric drive on the target qubit for tau,
  step 3  de-excite the control (inverse of step 1).

In the "dg" control flavor steps 1/3 are plain resonant pi pulses of
duration pi/Omega1 with the Rabi sign flipped on the return pulse.  In the
"fgqc" flavor they are cosine-modulated Floquet X blocks with a rotating
transverse/detuning field; the return block flips the transverse sign so
the two blocks compose to the identity on the control ((+i sx)(-i sx) = 1).

Step 2 drives the target conditioned on the control occupying the qubit
subspace span{|g>, |e>} — the ideal-blockade limit in which the
Rydberg-excited control branch is frozen while the drive runs.  The
Rydberg-Rydberg interaction term V|rr><rr| is kept explicitly.

All builders accept scalar or 1-d array time arguments (segment-local time)
and return matching (9, 9) or (n, 9, 9) Hermitian arrays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hilbert import (
    DIM_PAIR,
    E,
    G,
    IDENTITY_ATOM,
    QUBIT_PROJECTOR_ATOM,
    R,
    op_atom,
    tensor,
)

SCHEME_DG = "dg-fgqc"
SCHEME_FGQC = "fgqc-fgqc"
SCHEMES = (SCHEME_DG, SCHEME_FGQC)

# single-atom spin operators on the {|g>, |r>} transition
_SX_GR = op_atom(G, R) + op_atom(R, G)
_SY_GR = -1j * op_atom(G, R) + 1j * op_atom(R, G)
_SZ_GR = op_atom(G, G) - op_atom(R, R)

_RR_PROJECTOR = tensor(op_atom(R, R), op_atom(R, R))


@dataclass(frozen=True)
class GateParams:
    """Solved drive parameters for one gate realization.

    Frequencies are angular (rad/us), times in us.  The control-block
    fields (rabi_ctrl, ctrl_freq, ctrl_phase_rate, tau_ctrl, k_ctrl) are
    only meaningful for the fgqc-fgqc scheme.
    """

    gate: str               # 'cnot' | 'ct' | 'custom'
    scheme: str             # 'dg-fgqc' | 'fgqc-fgqc'
    theta: float            # bright-state mixing angle
    phi: float              # bright-state azimuthal phase (held constant)
    rabi0: float            # target drive peak Rabi amplitude Omega0
    drive_freq: float       # target envelope frequency omega
    phase_rate: float       # target field rotation rate N
    tau: float              # step-2 duration
    k: int                  # stroboscopic half-period count, omega*tau = k*pi
    blockade: float         # Rydberg-Rydberg interaction V
    rabi_pi: float = 0.0    # DG control pulse Rabi Omega1
    phi_c: float = np.pi / 2  # control transverse-drive phase
    rabi_ctrl: float = 0.0  # control Floquet peak amplitude Omega'
    ctrl_freq: float = 0.0  # control envelope frequency omega1
    ctrl_phase_rate: float = 0.0  # control field rotation rate N1
    tau_ctrl: float = 0.0   # control Floquet block duration tau1
    k_ctrl: int = 0         # control stroboscopic count, omega1*tau1 = k1*pi

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.scheme == SCHEME_DG and self.rabi_pi <= 0:
            raise ValueError("dg-fgqc scheme needs a positive pi-pulse Rabi")
        if self.scheme == SCHEME_FGQC and (
            self.rabi_ctrl <= 0 or self.ctrl_freq <= 0 or self.tau_ctrl <= 0
        ):
            raise ValueError("fgqc-fgqc scheme needs the control-block fields")

    def validate(self) -> None:
        """Enforce the regime invariants the derivation relies on.

        Stroboscopic closure and the blockade regime are hard requirements;
        the adiabaticity margin omega/N >= 5 only warns, because the
        shorter working points (e.g. the controlled-T drive at k = 2) sit
        below the nominal margin yet still close the geometric loop.
        """
        k_pi = self.k * np.pi
        if abs(self.drive_freq * self.tau - k_pi) > 0.02 * k_pi:
            raise ValueError("omega*tau deviates from k*pi by more than 2%")
        if self.blockade < 10.0 * self.rabi0:
            raise ValueError("blockade regime requires V >= 10*Omega0")
        if self.phase_rate != 0 and self.drive_freq / abs(self.phase_rate) < 5.0:
            warnings.warn(
                f"adiabaticity ratio omega/N = "
                f"{self.drive_freq / abs(self.phase_rate):.3g} below 5.0; "
                "the effective-Hamiltonian picture degrades",
                stacklevel=2,
            )

    def durations(self) -> tuple[float, float, float]:
        """(T1, T2, T3) of the three steps."""
        if self.scheme == SCHEME_DG:
            t_ctrl = np.pi / self.rabi_pi
        else:
            t_ctrl = self.tau_ctrl
        return (t_ctrl, self.tau, t_ctrl)


@dataclass(frozen=True)
class NoiseModel:
    """Systematic drive errors and Rydberg decay.

    rabi_error (delta) multiplies every Rabi amplitude; detuning_error
    (delta') multiplies the control detuning modulation Delta1(t); gamma is
    the Rydberg decay rate (1/us) split 4/13 -> |g> and 3/13 -> |e> per
    atom.  Segment durations stay at their nominal calibration.
    """

    rabi_error: float = 0.0
    detuning_error: float = 0.0
    gamma: float = 0.0
    #: read the decay operators literally as |g><e| / |e><e| instead of
    #: the Rydberg-decay reading |g><r| / |e><r|
    literal_jump_labels: bool = False

    def jump_operators(self) -> list[np.ndarray]:
        """Pair-space jump operators; empty when gamma = 0."""
        if self.gamma < 0:
            raise ValueError("decay rate must be non-negative")
        if self.gamma == 0:
            return []
        source = E if self.literal_jump_labels else R
        ops = []
        for target, weight in ((G, 4.0 / 13.0), (E, 3.0 / 13.0)):
            single = np.sqrt(weight * self.gamma) * op_atom(target, source)
            ops.append(tensor(single, IDENTITY_ATOM))
            ops.append(tensor(IDENTITY_ATOM, single))
        return ops


@dataclass(frozen=True)
class PulseSegment:
    """One schedule segment: duration plus a vectorized H(t) builder.

    The Hamiltonian callable takes segment-local times (1-d array) and
    returns (n, dim, dim).  `scale` is the fastest angular-frequency scale
    in the segment, used to enforce the integrator step-size invariant.
    """

    duration: float
    hamiltonian: Callable[[np.ndarray], np.ndarray]
    dim: int = DIM_PAIR
    constant: bool = False
    scale: float = 0.0
    label: str = ""


@dataclass(frozen=True)
class PulseSchedule:
    segments: tuple[PulseSegment, ...]
    label: str = ""

    @property
    def dim(self) -> int:
        return self.segments[0].dim

    @property
    def total_time(self) -> float:
        return float(sum(seg.duration for seg in self.segments))


def bright_dark(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Bright/dark qubit superpositions of the target drive.

    |b> = sin(theta/2) e^{i phi} |0> + cos(theta/2) |1>
    |d> = cos(theta/2) e^{i phi} |0> - sin(theta/2) |1>

    Returned as length-2 complex vectors over {|0>, |1>}; the drive couples
    only |b> to |r> while |d> is exactly decoupled.
    """
    st, ct = np.sin(theta / 2.0), np.cos(theta / 2.0)
    phase = np.exp(1j * phi)
    bright = np.array([st * phase, ct], dtype=complex)
    dark = np.array([ct * phase, -st], dtype=complex)
    return bright, dark


def _as_times(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _kron_with_identity(blocks: np.ndarray, left: bool) -> np.ndarray:
    """Batched kron of (n,3,3) single-atom blocks with the 3x3 identity."""
    n = blocks.shape[0]
    if left:
        out = np.einsum("ab,nij->naibj", IDENTITY_ATOM, blocks)
    else:
        out = np.einsum("nij,ab->niajb", blocks, IDENTITY_ATOM)
    return out.reshape(n, DIM_PAIR, DIM_PAIR)


def step1_hamiltonian(t, params: GateParams, noise: NoiseModel, sign: int = 1):
    """Control-excitation Hamiltonian (step 1; step 3 with sign = -1).

    dg-fgqc: constant H = sign (1+delta) (Omega1/2) (|g><r| + |r><g|) (x) 1.
    fgqc-fgqc: cosine-modulated Floquet block
        H = cos(w1 t) [ sign (1+delta) cos(N1 t) (Omega'/2) (cos phic sx + sin phic sy)
                        + (1+delta') sin(N1 t) (Omega'/2) sz ]  on {|g>,|r>},
    tensored with the identity on the target atom.  The sign flips only the
    transverse term, mirroring the -pi return pulse of the dg flavor.
    """
    times, scalar = _as_times(t)
    amp = sign * (1.0 + noise.rabi_error)
    if params.scheme == SCHEME_DG:
        block = 0.5 * amp * params.rabi_pi * _SX_GR
        blocks = np.broadcast_to(block, (len(times), 3, 3))
    else:
        envelope = np.cos(params.ctrl_freq * times)
        transverse = amp * np.cos(params.ctrl_phase_rate * times) * params.rabi_ctrl
        detuning = (
            (1.0 + noise.detuning_error)
            * np.sin(params.ctrl_phase_rate * times)
            * params.rabi_ctrl
        )
        axis = np.cos(params.phi_c) * _SX_GR + np.sin(params.phi_c) * _SY_GR
        blocks = 0.5 * envelope[:, None, None] * (
            transverse[:, None, None] * axis + detuning[:, None, None] * _SZ_GR
        )
    out = _kron_with_identity(blocks, left=False)
    return out[0] if scalar else out


def step2_hamiltonian(t, params: GateParams, noise: NoiseModel):
    """Target Floquet drive (step 2), conditioned on the control qubit.

    H = P_q (x) [ (1+delta) cos(w t) (Omega0/2)
                  ( sin(theta/2) e^{i(N t + phi)} |g><r|
                    + cos(theta/2) e^{i N t} |e><r| ) + h.c. ]
        + V |rr><rr|

    with P_q = |g><g| + |e><e| the control qubit projector (ideal-blockade
    limit: the Rydberg-excited control branch is frozen during the drive).
    """
    times, scalar = _as_times(t)
    amp = (1.0 + noise.rabi_error) * 0.5 * params.rabi0 * np.cos(
        params.drive_freq * times
    )
    rotation = np.exp(1j * params.phase_rate * times)
    cg = amp * np.sin(params.theta / 2.0) * rotation * np.exp(1j * params.phi)
    ce = amp * np.cos(params.theta / 2.0) * rotation
    blocks = (
        cg[:, None, None] * op_atom(G, R)
        + ce[:, None, None] * op_atom(E, R)
    )
    blocks = blocks + np.conjugate(np.swapaxes(blocks, -1, -2))
    n = len(times)
    drive = np.einsum("ab,nij->naibj", QUBIT_PROJECTOR_ATOM, blocks).reshape(
        n, DIM_PAIR, DIM_PAIR
    )
    out = drive + params.blockade * _RR_PROJECTOR
    return out[0] if scalar else out


def schedule(params: GateParams, noise: NoiseModel) -> PulseSchedule:
    """Three-segment schedule [step1, step2, step3] for the given scheme."""
    t_ctrl, tau, _ = params.durations()
    if params.scheme == SCHEME_DG:
        ctrl_scale = params.rabi_pi * (1.0 + abs(noise.rabi_error))
        ctrl_constant = True
    else:
        ctrl_scale = max(
            params.ctrl_freq,
            params.rabi_ctrl * (1.0 + abs(noise.rabi_error)),
            params.rabi_ctrl * (1.0 + abs(noise.detuning_error)),
        )
        ctrl_constant = False
    drive_scale = max(
        params.drive_freq,
        params.rabi0 * (1.0 + abs(noise.rabi_error)),
        abs(params.phase_rate),
        params.blockade,
    )
    segments = (
        PulseSegment(
            duration=t_ctrl,
            hamiltonian=lambda ts: step1_hamiltonian(ts, params, noise, sign=1),
            constant=ctrl_constant,
            scale=ctrl_scale,
            label="control-excite",
        ),
        PulseSegment(
            duration=tau,
            hamiltonian=lambda ts: step2_hamiltonian(ts, params, noise),
            constant=False,
            scale=drive_scale,
            label="target-drive",
        ),
        PulseSegment(
            duration=t_ctrl,
            hamiltonian=lambda ts: step1_hamiltonian(ts, params, noise, sign=-1),
            constant=ctrl_constant,
            scale=ctrl_scale,
            label="control-return",
        ),
    )
    return PulseSchedule(segments=segments, label=f"{params.gate}:{params.scheme}")


def _pair_ket(i: int, j: int) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[2 * i + j] = 1.0
    return v


def original_fgqc_hamiltonian(
    t,
    rabi0: float,
    drive_freq: float,
    phase_rate: float,
    phi_angle: float,
    blockade: float,
    rabi_error: float = 0.0,
):
    """Single-drive entangling Hamiltonian on two two-level atoms (4-dim).

    Basis {|00>, |01>, |10>, |11>}.  The complex drive
    Omega_R(t) = (1+delta)(Omega0/2) cos(w t) e^{i N t} couples |00> to the
    bright combination |B> = sin(phi/2)|01> - cos(phi/2)|10> and |11> to
    |B'> = cos(phi/2)|01> - sin(phi/2)|10| (suppressed by the interaction):

        H = Omega_R(t) (|B><00| - |B'><11|) + h.c. + V |11><11|

    This is the full lab-frame model; blockade of the doubly excited state
    emerges numerically from the V term rather than by approximation.
    """
    times, scalar = _as_times(t)
    half = np.sin(phi_angle / 2.0), np.cos(phi_angle / 2.0)
    bright = half[0] * _pair_ket(0, 1) - half[1] * _pair_ket(1, 0)
    bright_blocked = half[1] * _pair_ket(0, 1) - half[0] * _pair_ket(1, 0)
    coupler = np.outer(bright, _pair_ket(0, 0)) - np.outer(
        bright_blocked, _pair_ket(1, 1)
    )
    drive = (
        (1.0 + rabi_error)
        * 0.5
        * rabi0
        * np.cos(drive_freq * times)
        * np.exp(1j * phase_rate * times)
    )
    out = drive[:, None, None] * coupler
    out = out + np.conjugate(np.swapaxes(out, -1, -2))
    out += blockade * np.outer(_pair_ket(1, 1), _pair_ket(1, 1))
    return out[0] if scalar else out


def original_fgqc_schedule(
    rabi0: float,
    drive_freq: float,
    phase_rate: float,
    phi_angle: float,
    blockade: float,
    k: int,
    rabi_error: float = 0.0,
) -> PulseSchedule:
    """Single-segment schedule for the original single-drive gate."""
    tau = k * np.pi / drive_freq
    seg = PulseSegment(
        duration=tau,
        hamiltonian=lambda ts: original_fgqc_hamiltonian(
            ts, rabi0, drive_freq, phase_rate, phi_angle, blockade, rabi_error
        ),
        dim=4,
        constant=False,
        scale=max(drive_freq, rabi0 * (1.0 + abs(rabi_error)), blockade),
        label="original-drive",
    )
    return PulseSchedule(segments=(seg,), label="original-fgqc")
