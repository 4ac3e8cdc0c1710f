"""
Master-equation integration: fixed-step RK4, phase averaging over the
uncorrelated tone phase, step-halving checks and a matrix-exponential oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cache
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import expm

from .core import DIMENSION, build_hamiltonian, dissipator, populations, trace_distance
from .exceptions import IntegratorInstabilityError
from .models import MIN_STEPS_PER_TD, IntegratorConfig

if TYPE_CHECKING:
    from collections.abc import Callable
    from typing import Final

    from numpy.typing import ArrayLike, NDArray

    from .core import DensityMatrix
    from .models import DriveSchedule, QutritParams

log = logging.getLogger(__name__)

#: Populations may stray this far outside [0, 1] before a step is declared unstable.
POPULATION_SLACK: Final = 1e-6

#: Step-halving trace distance below which a run counts as converged.
CONVERGENCE_TOLERANCE: Final = 1e-6

#: Number of steps whose Hamiltonians are evaluated in one vectorized call.
_CHUNK: Final = 512


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped density matrices (endpoints included)."""

    times: NDArray[np.float64]
    states: NDArray[np.complex128]

    def __len__(self) -> int:
        return len(self.times)

    @property
    def populations(self) -> NDArray[np.float64]:
        """(n, 3) array of P0, P1, P2."""
        return populations(self.states)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def max_population(self, level: int, after: float | None = None) -> tuple[float, float]:
        """Largest recorded population of ``level`` (optionally for t > ``after``) and its time."""
        mask = np.ones(len(self.times), dtype=bool) if after is None else self.times > after
        series = self.populations[mask, level]
        index = int(np.argmax(series))
        return float(series[index]), float(self.times[mask][index])


@dataclass(frozen=True)
class ConvergenceReport:
    dt: float
    dt_halved_distance: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.dt_halved_distance < self.tolerance


def lindblad_rhs(
    hamiltonian: NDArray[np.complex128],
    rho: NDArray[np.complex128],
    params: QutritParams,
) -> NDArray[np.complex128]:
    """d rho / dt = -i [H, rho] + L(rho)."""
    return -1j * (hamiltonian @ rho - rho @ hamiltonian) + dissipator(rho, params)


def _rk4_step(
    rho: NDArray[np.complex128],
    h_start: NDArray[np.complex128],
    h_mid: NDArray[np.complex128],
    h_end: NDArray[np.complex128],
    dt: float,
    params: QutritParams,
) -> NDArray[np.complex128]:
    k1 = lindblad_rhs(h_start, rho, params)
    k2 = lindblad_rhs(h_mid, rho + 0.5 * dt * k1, params)
    k3 = lindblad_rhs(h_mid, rho + 0.5 * dt * k2, params)
    k4 = lindblad_rhs(h_end, rho + dt * k3, params)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _check_stability(
    rho: NDArray[np.complex128],
    time: float,
    dt: float,
    phases: NDArray[np.float64],
) -> None:
    pops = populations(rho)
    bad = ~np.isfinite(pops) | (pops < -POPULATION_SLACK) | (pops > 1 + POPULATION_SLACK)
    if np.any(bad):
        index = int(np.argmax(np.any(bad, axis=-1)))
        raise IntegratorInstabilityError(time, dt, float(phases[index]))


def _integrate(
    rho0: ArrayLike,
    params: QutritParams,
    hamiltonian_at: Callable[[NDArray[np.float64]], NDArray[np.complex128]],
    t_start: float,
    dt: float,
    n_steps: int,
    cfg: IntegratorConfig,
    phases: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """
    RK4 over a batch of phases at once.

    ``hamiltonian_at`` maps times ``(m,)`` to ``(m, len(phases), 3, 3)``.
    Returns the recorded times ``(k,)`` and states ``(k, len(phases), 3, 3)``.
    """
    rho = np.broadcast_to(
        np.asarray(rho0, dtype=complex), (len(phases), DIMENSION, DIMENSION)
    ).copy()
    times = [t_start]
    states = [rho.copy()]
    for first in range(0, n_steps, _CHUNK):
        count = min(_CHUNK, n_steps - first)
        half_steps = np.arange(2 * first, 2 * (first + count) + 1)
        hamiltonians = hamiltonian_at(t_start + 0.5 * dt * half_steps)
        for offset in range(count):
            rho = _rk4_step(
                rho,
                hamiltonians[2 * offset],
                hamiltonians[2 * offset + 1],
                hamiltonians[2 * offset + 2],
                dt,
                params,
            )
            if cfg.renormalize:
                rho = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
                rho /= np.trace(rho, axis1=-2, axis2=-1)[:, None, None]
            step = first + offset + 1
            time = t_start + dt * step
            _check_stability(rho, time, dt, phases)
            if step % cfg.record_every == 0 or step == n_steps:
                times.append(time)
                states.append(rho.copy())
    return np.asarray(times), np.stack(states)


def _run(
    rho0: ArrayLike,
    params: QutritParams,
    sched: DriveSchedule,
    cfg: IntegratorConfig,
    phases: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    t_start, _ = sched.window
    dt, n_steps = cfg.step_for(sched.duration, sched.td)
    if dt > sched.td / MIN_STEPS_PER_TD:
        log.warning(
            "RK4 step %.3g ps exceeds T_d/%d; expect step-size errors",
            dt / 1e-12,
            MIN_STEPS_PER_TD,
        )
    log.debug(
        "integrating %d steps of %.4g ps for %d phase(s)", n_steps, dt / 1e-12, len(phases)
    )

    def hamiltonian_at(times: NDArray[np.float64]) -> NDArray[np.complex128]:
        return build_hamiltonian(times[:, None], params, sched, phases[None, :])

    return _integrate(rho0, params, hamiltonian_at, t_start, dt, n_steps, cfg, phases)


def evolve(
    rho0: ArrayLike,
    params: QutritParams,
    sched: DriveSchedule,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate at the single phase ``sched.phi``."""
    cfg = cfg or IntegratorConfig()
    times, states = _run(rho0, params, sched, cfg, np.array([sched.phi]))
    return Trajectory(times, states[:, 0])


def phase_angles(samples: int) -> NDArray[np.float64]:
    """Uniform grid phi_k = 2 pi k / N."""
    return 2 * math.pi * np.arange(samples) / samples


def phase_average(
    rho0: ArrayLike,
    params: QutritParams,
    sched_base: DriveSchedule,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """
    Average trajectories over the relative tone phase with the rectangle rule.

    ``sched_base.phi`` is ignored; every phi_k = 2 pi k / N is integrated in
    one batch and the density matrices are averaged pointwise in time.
    """
    cfg = cfg or IntegratorConfig()
    times, states = _run(rho0, params, sched_base, cfg, phase_angles(cfg.phi_samples))
    return Trajectory(times, np.mean(states, axis=1))


def simulate(
    rho0: ArrayLike,
    params: QutritParams,
    sched: DriveSchedule,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Phase-averaged run when ``cfg.phi_samples > 1``, else a single-phase run."""
    cfg = cfg or IntegratorConfig()
    if cfg.phi_samples > 1:
        return phase_average(rho0, params, sched, cfg)
    return evolve(rho0, params, sched, cfg)


def convergence_check(
    rho0: ArrayLike,
    params: QutritParams,
    sched: DriveSchedule,
    cfg: IntegratorConfig | None = None,
    tolerance: float = CONVERGENCE_TOLERANCE,
) -> ConvergenceReport:
    """Compare a run against one with half the step at every recorded time."""
    cfg = cfg or IntegratorConfig()
    dt, _ = cfg.step_for(sched.duration, sched.td)
    coarse = cfg.model_copy(update={"dt": dt})
    fine = cfg.model_copy(update={"dt": 0.5 * dt, "record_every": 2 * cfg.record_every})
    try:
        reference = evolve(rho0, params, sched, coarse)
        halved = evolve(rho0, params, sched, fine)
    except IntegratorInstabilityError as e:
        log.info("step-halving check hit an instability: %s", e)
        return ConvergenceReport(dt, math.inf, tolerance)
    distance = float(np.max(trace_distance(reference.states, halved.states)))
    return ConvergenceReport(dt, distance, tolerance)


@cache
def _dissipator_superoperator(params: QutritParams) -> NDArray[np.complex128]:
    basis = np.eye(DIMENSION * DIMENSION, dtype=complex).reshape(-1, DIMENSION, DIMENSION)
    columns = dissipator(basis, params).reshape(DIMENSION * DIMENSION, -1)
    superoperator = columns.T.copy()
    superoperator.setflags(write=False)
    return superoperator


def liouvillian(hamiltonian: ArrayLike, params: QutritParams) -> NDArray[np.complex128]:
    """
    9x9 generator acting on row-major vec(rho), with leading axes preserved.

    vec(H rho) = (H (x) I) vec(rho) and vec(rho H) = (I (x) H^T) vec(rho).
    """
    hamiltonian = np.asarray(hamiltonian, dtype=complex)
    identity = np.eye(DIMENSION)
    commutator = np.einsum("...ik,jl->...ijkl", hamiltonian, identity) - np.einsum(
        "ik,...lj->...ijkl", identity, hamiltonian
    )
    size = DIMENSION * DIMENSION
    commutator = commutator.reshape(*hamiltonian.shape[:-2], size, size)
    return -1j * commutator + _dissipator_superoperator(params)


def oracle_evolve(
    rho0: ArrayLike,
    params: QutritParams,
    sched: DriveSchedule,
    n_steps: int,
    *,
    t_start: float | None = None,
    t_end: float | None = None,
    chunk: int = 2048,
) -> DensityMatrix:
    """
    Brute-force reference: freeze H at each sub-interval midpoint and apply the
    exact exponential of the Liouvillian to vec(rho).
    """
    window_start, window_end = sched.window
    start = window_start if t_start is None else t_start
    end = window_end if t_end is None else t_end
    rho0 = np.asarray(rho0, dtype=complex)
    if end == start:
        return rho0.copy()
    dt = (end - start) / n_steps
    vector = rho0.reshape(-1)
    for first in range(0, n_steps, chunk):
        midpoints = start + dt * (np.arange(first, min(first + chunk, n_steps)) + 0.5)
        generators = liouvillian(build_hamiltonian(midpoints, params, sched), params)
        for propagator in expm(generators * dt):
            vector = propagator @ vector
    return vector.reshape(DIMENSION, DIMENSION)
