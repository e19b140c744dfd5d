"""Floquet effective-Hamiltonian theory for the cosine-modulated drives.

The drives here share one structure: a fast envelope f(w t) = cos(w t)
multiplying a slowly rotating field H(t) = f(w t) * F . n(t), with
F = (sx, sy, sz)/2 spin operators on a two-level subspace and n(t) a
rotating field vector of constant length.  At stroboscopic times
w*tau = k*pi the micromotion closes and the evolution is governed by the
effective Hamiltonian

    H_eff = [1 - J0(|n|/w)] * F . (n x ndot) / |n|^2,

whose strength is set by the zero-order Bessel function J0.  This module
evaluates J0 (by quadrature of its integral definition, with a power-series
cross-check), the effective Hamiltonians of the target and control drives,
the resulting single-qubit gate matrix, and the parameter solver that pins
the accumulated phase C*tau to a requested target.
"""

from __future__ import annotations

import warnings

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: a 3-component real field vector (rad/us); plain ndarray of shape (3,)
Field3 = np.ndarray

#: ratio below which w/N triggers the adiabaticity warning
ADIABATICITY_MIN_RATIO = 5.0


def bessel_j0(a: float) -> float:
    """Zero-order Bessel function J0(a) = (1/2pi) int_0^2pi exp(i a sin t) dt.

    Evaluated by trapezoid quadrature of the integral definition with
    adaptive grid doubling (the integrand is periodic, so the trapezoid
    rule converges spectrally).  The imaginary part vanishes by symmetry.
    """
    a = float(a)
    n = 32
    prev = None
    val = 1.0
    for _ in range(14):
        theta = np.arange(n) * (2.0 * np.pi / n)
        val = float(np.mean(np.cos(a * np.sin(theta))))
        if prev is not None and abs(val - prev) < 1e-14:
            break
        prev = val
        n *= 2
    return val


def bessel_j0_series(a: float, max_terms: int = 80) -> float:
    """Power-series route J0(a) = sum_m (-1)^m (a/2)^(2m) / (m!)^2.

    Independent cross-check for bessel_j0; accurate to ~1e-12 for |a| <~ 15
    (beyond that float64 cancellation degrades the series).
    """
    x = float(a) * float(a) / 4.0
    term = 1.0
    total = 1.0
    for m in range(1, max_terms):
        term *= -x / (m * m)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)):
            break
    return total


def coefficient_C(N: float, omega0: float, omega: float) -> float:
    """Effective precession rate C = -(N/2) [1 - J0(omega0/omega)] in rad/us.

    N is the rotation rate of the drive field vector, omega0 its length
    (the peak Rabi amplitude) and omega the envelope frequency.
    """
    if omega <= 0:
        raise ValueError("envelope frequency must be positive")
    return -(N / 2.0) * (1.0 - bessel_j0(omega0 / omega))


def x_field(area: float, n: Field3, ndot: Field3) -> Field3:
    """Closed-form auxiliary field X(area) of the micromotion frame.

    Solves dX/dF = -ndot + n x X with X(0) = 0, where F ("area") is the
    accumulated envelope integral and n, ndot are the drive field vector
    and its time derivative at the frozen instant:

        X = -F (n.ndot) n/|n|^2 - sin(F|n|) (n x ndot) x n / |n|^3
            - [cos(F|n|) - 1] (n x ndot) / |n|^2
    """
    n = np.asarray(n, dtype=float)
    ndot = np.asarray(ndot, dtype=float)
    mag = float(np.linalg.norm(n))
    if mag == 0.0:
        raise ValueError("x_field is singular for |n| = 0")
    cross = np.cross(n, ndot)
    radial = -area * float(np.dot(n, ndot)) * n / mag**2
    transverse = -np.sin(area * mag) * np.cross(cross, n) / mag**3
    azimuthal = -(np.cos(area * mag) - 1.0) * cross / mag**2
    return radial + transverse + azimuthal


def target_field(t: float, params) -> tuple[Field3, Field3]:
    """Target drive field n(t) = Omega0 (cos Nt, -sin Nt, 0) and its derivative."""
    om0, N = params.rabi0, params.phase_rate
    n = om0 * np.array([np.cos(N * t), -np.sin(N * t), 0.0])
    ndot = om0 * N * np.array([-np.sin(N * t), -np.cos(N * t), 0.0])
    return n, ndot


def control_field(t: float, params) -> tuple[Field3, Field3]:
    """Control drive field r(t) = Omega' (cos N1t cos phic, cos N1t sin phic, sin N1t)."""
    omp, N1, phic = params.rabi_ctrl, params.ctrl_phase_rate, params.phi_c
    c, s = np.cos(N1 * t), np.sin(N1 * t)
    r = omp * np.array([c * np.cos(phic), c * np.sin(phic), s])
    rdot = omp * N1 * np.array([-s * np.cos(phic), -s * np.sin(phic), c])
    return r, rdot


def _effective_from_field(n: Field3, ndot: Field3, bessel_arg: float) -> np.ndarray:
    """H_eff = [1 - J0(arg)] F.(n x ndot) / |n|^2 with F = sigma/2."""
    cross = np.cross(n, ndot)
    mag2 = float(np.dot(n, n))
    coeff = (1.0 - bessel_j0(bessel_arg)) / (2.0 * mag2)
    return coeff * (cross[0] * SIGMA_X + cross[1] * SIGMA_Y + cross[2] * SIGMA_Z)


def effective_hamiltonian_target(t: float, params) -> np.ndarray:
    """Effective 2x2 Hamiltonian of the target drive on {|b>, |r>}.

    For the rotating field n(t) this is the constant operator C*sigma_z
    with C = coefficient_C(N, Omega0, omega).
    """
    n, ndot = target_field(t, params)
    return _effective_from_field(n, ndot, params.rabi0 / params.drive_freq)


def effective_hamiltonian_control(t: float, params) -> np.ndarray:
    """Effective 2x2 Hamiltonian of the control drive on {|g>, |r>}.

    For the constant-length rotating field r(t) this is the constant
    operator [1 - J0(Omega'/omega1)] (N1/2) (sin phic * sx - cos phic * sy).
    """
    r, rdot = control_field(t, params)
    return _effective_from_field(r, rdot, params.rabi_ctrl / params.ctrl_freq)


def effective_gate(theta: float, phi: float, c_tau: float) -> np.ndarray:
    """Single-qubit gate on {|0>, |1>} generated by the bright-state phase.

    The bright state acquires exp(-i*c_tau) while the dark state idles;
    written back in the qubit basis:

        U00 = e^{-iCt} sin^2(t/2) + cos^2(t/2)      (t = theta)
        U01 = (e^{-iCt} - 1) sin(theta) e^{+i phi} / 2
        U10 = (e^{-iCt} - 1) sin(theta) e^{-i phi} / 2
        U11 = e^{-iCt} cos^2(t/2) + sin^2(t/2)
    """
    g = np.exp(-1j * c_tau)
    st, ct = np.sin(theta / 2.0), np.cos(theta / 2.0)
    off = (g - 1.0) * np.sin(theta) / 2.0
    return np.array(
        [
            [g * st**2 + ct**2, off * np.exp(1j * phi)],
            [off * np.exp(-1j * phi), g * ct**2 + st**2],
        ],
        dtype=complex,
    )


def micromotion_rotation(t: float, params) -> np.ndarray:
    """Micromotion frame operator R(t) = exp[-i sin(w t) F.n(t) / w] (2x2).

    Satisfies R(tau) = R(0) = identity at stroboscopic times w*tau = k*pi.
    """
    n, _ = target_field(t, params)
    w = params.drive_freq
    gen = (np.sin(w * t) / (2.0 * w)) * (
        n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    )
    lam, vec = np.linalg.eigh(gen)
    return (vec * np.exp(-1j * lam)) @ vec.conj().T


def solve_params(
    target_c_tau: float, rabi0: float, rho: float, k: int
) -> tuple[float, float, float]:
    """Solve (omega, tau, N) for a requested accumulated phase C*tau.

    Constraints: omega = rabi0/rho (drive-ratio pin), omega*tau = k*pi
    (stroboscopic closure), and coefficient_C(N, rabi0, omega)*tau equal to
    target_c_tau.  Warns when omega/N falls below the adiabaticity ratio.
    """
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    j = bessel_j0(rho)
    if abs(1.0 - j) < 1e-9:
        raise ValueError(
            "degenerate drive ratio: J0(rho) = 1 accrues no geometric phase"
        )
    omega = rabi0 / rho
    tau = k * np.pi / omega
    N = -2.0 * target_c_tau / (tau * (1.0 - j))
    if N != 0.0 and omega / abs(N) < ADIABATICITY_MIN_RATIO:
        warnings.warn(
            f"adiabaticity ratio omega/N = {omega / abs(N):.2f} below "
            f"{ADIABATICITY_MIN_RATIO}; the effective-Hamiltonian picture degrades",
            stacklevel=2,
        )
    return omega, tau, N
