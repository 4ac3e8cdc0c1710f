"""
Rotating-frame Hamiltonians, the relaxation/dephasing Liouvillean, and
dark-state analysis for the ladder qutrit.

Matrices are indexed by level (0, 1, 2). All functions accept leading array
axes (time, phase, ...) and return arrays shaped ``(..., 3, 3)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cache
from typing import TYPE_CHECKING

import numpy as np

from .exceptions import DegenerateDriveError
from .pulses import envelope, pi_pulse_pair

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike, NDArray

    from .models import DriveSchedule, QutritParams
    from .pulses import PiPulse

    DensityMatrix = NDArray[np.complex128]

log = logging.getLogger(__name__)

DIMENSION = 3


def basis_state(level: int) -> DensityMatrix:
    """|level><level|."""
    rho = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    rho[level, level] = 1.0
    return rho


def populations(rho: ArrayLike) -> NDArray[np.float64]:
    """Diagonal (P0, P1, P2) of one or many density matrices."""
    return np.real(np.diagonal(np.asarray(rho), axis1=-2, axis2=-1))


def validate_density_matrix(
    rho: ArrayLike,
    *,
    trace_atol: float = 1e-9,
    hermitian_atol: float = 1e-10,
    psd_atol: float = 1e-8,
) -> None:
    """Raise ``ValueError`` naming the first violated density-matrix invariant."""
    rho = np.asarray(rho)
    if rho.shape[-2:] != (DIMENSION, DIMENSION):
        raise ValueError(f"expected (..., 3, 3) density matrices, got {rho.shape}")
    asymmetry = np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2))))
    if asymmetry > hermitian_atol:
        raise ValueError(f"density matrix is not Hermitian (max |rho - rho^+| = {asymmetry:.3g})")
    trace_error = np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1))
    if trace_error > trace_atol:
        raise ValueError(f"density matrix trace deviates from 1 by {trace_error:.3g}")
    smallest = np.min(np.linalg.eigvalsh(0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))))
    if smallest < -psd_atol:
        raise ValueError(f"density matrix has negative eigenvalue {smallest:.3g}")


def trace_distance(rho: ArrayLike, sigma: ArrayLike) -> float | NDArray[np.float64]:
    """1/2 ||rho - sigma||_1 for Hermitian arguments."""
    difference = np.asarray(rho) - np.asarray(sigma)
    difference = 0.5 * (difference + np.conj(np.swapaxes(difference, -1, -2)))
    return 0.5 * np.sum(np.abs(np.linalg.eigvalsh(difference)), axis=-1)


def two_photon_delta(params: QutritParams, sched: DriveSchedule) -> float:
    """delta = omega_p - omega_s = (omega10 - omega21) - Delta_p + Delta_s."""
    return params.bare_delta - sched.delta_p + sched.delta_s


def _hermitian_ladder(
    shape: tuple[int, ...],
    h01: ArrayLike,
    h12: ArrayLike,
    diagonal: tuple[float, float],
) -> NDArray[np.complex128]:
    hamiltonian = np.zeros((*shape, DIMENSION, DIMENSION), dtype=complex)
    hamiltonian[..., 1, 1] = diagonal[0]
    hamiltonian[..., 2, 2] = diagonal[1]
    hamiltonian[..., 0, 1] = h01
    hamiltonian[..., 1, 0] = np.conj(h01)
    hamiltonian[..., 1, 2] = h12
    hamiltonian[..., 2, 1] = np.conj(h12)
    return hamiltonian


def build_hamiltonian(
    t: ArrayLike,
    params: QutritParams,
    sched: DriveSchedule,
    phi: ArrayLike | None = None,
    *,
    cross_terms: bool = True,
) -> NDArray[np.complex128]:
    """
    Double-rotating-frame RWA Hamiltonian with relative tone phase phi (rad/s).

    The pump couples 0-1 with g_p = Omega_p / 2 and 1-2 with lambda g_p; the
    Stokes tone couples 1-2 with lambda g_s = Omega_s / 2 and 0-1 with g_s.
    The off-resonant couplings rotate at delta. ``cross_terms=False`` drops
    them, which reproduces the Raman Hamiltonian. ``phi`` overrides
    ``sched.phi`` and broadcasts against ``t``.
    """
    t = np.asarray(t, dtype=float)
    phi = np.asarray(sched.phi if phi is None else phi, dtype=float)
    shape = np.broadcast_shapes(t.shape, phi.shape)
    if sched.order == "pi-pulse-pair":
        hamiltonian = build_pi_hamiltonian(t, params, pi_pulse_pair(sched))
        return np.broadcast_to(hamiltonian, (*shape, DIMENSION, DIMENSION)).copy()

    if params.lam == 0:
        raise ValueError("the Stokes tone cannot couple 1-2 when lambda = 0")
    sample = envelope(t, sched.omega0, sched.td, sched.order)
    g_p = 0.5 * np.asarray(sample.omega_p)
    g_s = 0.5 * np.asarray(sample.omega_s) / params.lam
    if cross_terms:
        rotation = np.exp(1j * (two_photon_delta(params, sched) * t - phi))
        h01 = g_p + g_s * np.conj(rotation)
        h12 = params.lam * (g_p * rotation + g_s)
    else:
        h01 = g_p + 0j
        h12 = params.lam * g_s + 0j
    return _hermitian_ladder(
        shape,
        np.broadcast_to(h01, shape),
        np.broadcast_to(h12, shape),
        (sched.delta_p, sched.delta_p + sched.delta_s),
    )


def build_pi_hamiltonian(
    t: ArrayLike,
    params: QutritParams,
    pulses: Iterable[PiPulse],
) -> NDArray[np.complex128]:
    """
    Bare-level interaction-frame Hamiltonian for single-tone resonant pulses.

    A tone at carrier omega_d contributes g e^{i(omega_d - omega10) t} to the
    0-1 element and lambda g e^{i(omega_d - omega21) t} to the 1-2 element, so
    a pulse resonant with one transition leaks onto the other detuned by
    omega10 - omega21.
    """
    t = np.asarray(t, dtype=float)
    h01 = np.zeros(t.shape, dtype=complex)
    h12 = np.zeros(t.shape, dtype=complex)
    for pulse in pulses:
        carrier = params.omega10 if pulse.target == "01" else params.omega21
        g = pulse.coupling(t, params.lam)
        h01 = h01 + g * np.exp(1j * (carrier - params.omega10) * t)
        h12 = h12 + params.lam * g * np.exp(1j * (carrier - params.omega21) * t)
    return _hermitian_ladder(t.shape, h01, h12, (0.0, 0.0))


def build_raman_hamiltonian(
    omega_p: float,
    omega_s: float,
    delta_p: float,
    delta_s: float,
) -> NDArray[np.float64]:
    """RWA Raman Hamiltonian: diag(0, Dp, Dp + Ds), Omega_p / 2 and Omega_s / 2 couplings."""
    return np.array(
        [
            [0.0, 0.5 * omega_p, 0.0],
            [0.5 * omega_p, delta_p, 0.5 * omega_s],
            [0.0, 0.5 * omega_s, delta_p + delta_s],
        ]
    )


@cache
def _coherence_decay(params: QutritParams) -> NDArray[np.float64]:
    rate01 = 0.5 * (params.gamma10 + params.gphi10)
    rate02 = 0.5 * (params.gamma21 + params.gphi20)
    rate12 = 0.5 * (params.gamma10 + params.gamma21 + params.gphi21)
    decay = np.array(
        [
            [0.0, rate01, rate02],
            [rate01, 0.0, rate12],
            [rate02, rate12, 0.0],
        ]
    )
    decay.setflags(write=False)
    return decay


def dissipator(rho: ArrayLike, params: QutritParams) -> NDArray[np.complex128]:
    """Cascaded relaxation 2 -> 1 -> 0 plus pure dephasing of every coherence (1/s)."""
    rho = np.asarray(rho)
    out = -_coherence_decay(params) * rho
    p1 = rho[..., 1, 1]
    p2 = rho[..., 2, 2]
    out[..., 0, 0] = params.gamma10 * p1
    out[..., 1, 1] = params.gamma21 * p2 - params.gamma10 * p1
    out[..., 2, 2] = -params.gamma21 * p2
    return out


@dataclass(frozen=True)
class DarkStateInfo:
    theta: float
    amplitudes: NDArray[np.complex128]
    #: Ascending eigenvalues of the two-photon-resonant Raman Hamiltonian.
    eigenvalues: NDArray[np.float64]
    #: ||H' |D>||, zero up to rounding.
    residual: float


def dark_state(omega_p: float, omega_s: float, delta_p: float = 0.0) -> DarkStateInfo:
    """
    Zero-energy eigenvector cos(Theta)|0> - sin(Theta)|2> with tan(Theta) = Omega_p / Omega_s.

    The Raman Hamiltonian is evaluated on two-photon resonance
    (Delta_s = -Delta_p).
    """
    if omega_p == 0 and omega_s == 0:
        raise DegenerateDriveError()
    theta = math.atan2(omega_p, omega_s)
    amplitudes = np.array([math.cos(theta), 0.0, -math.sin(theta)], dtype=complex)
    hamiltonian = build_raman_hamiltonian(omega_p, omega_s, delta_p, -delta_p)
    residual = float(np.linalg.norm(hamiltonian @ amplitudes))
    log.debug("dark state theta=%.6g rad, residual %.3g", theta, residual)
    return DarkStateInfo(
        theta=theta,
        amplitudes=amplitudes,
        eigenvalues=np.linalg.eigvalsh(hamiltonian),
        residual=residual,
    )


def dark_state_population(
    rho: ArrayLike,
    omega_p: ArrayLike,
    omega_s: ArrayLike,
) -> NDArray[np.float64]:
    """<D|rho|D> for the instantaneous dark state; |0> where both drives vanish."""
    theta = np.arctan2(omega_p, omega_s)
    vector = np.stack([np.cos(theta), np.zeros_like(theta), -np.sin(theta)], axis=-1)
    return np.real(np.einsum("...i,...ij,...j->...", vector, np.asarray(rho), vector))
