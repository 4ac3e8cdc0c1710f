from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..core import basis_state, dark_state_population
from ..dynamics import simulate
from ..pulses import envelope

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from ..dynamics import Trajectory
    from ..models import DriveSchedule, Scenario

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimeDomainSummary:
    max_P2: float
    t_at_max: float
    #: Largest P1 once the pump has switched on (t > -T_d / 2).
    max_P1_after: float
    final_P0: float
    final_P1: float
    final_P2: float
    #: Lowest overlap with the instantaneous dark state for |t| <= T_d;
    #: ``None`` for pi-pulse schedules.
    min_dark_population: float | None


@dataclass(frozen=True)
class TimeDomainResult:
    trajectory: Trajectory
    summary: TimeDomainSummary


def summarize(trajectory: Trajectory, sched: DriveSchedule) -> TimeDomainSummary:
    max_p2, t_at_max = trajectory.max_population(2)
    max_p1_after, _ = trajectory.max_population(1, after=-0.5 * sched.td)
    final = trajectory.populations[-1]

    min_dark = None
    if sched.order != "pi-pulse-pair":
        inside = np.abs(trajectory.times) <= sched.td
        if np.any(inside):
            sample = envelope(trajectory.times[inside], sched.omega0, sched.td, sched.order)
            overlap = dark_state_population(
                trajectory.states[inside], sample.omega_p, sample.omega_s
            )
            min_dark = float(np.min(overlap))

    return TimeDomainSummary(
        max_P2=max_p2,
        t_at_max=t_at_max,
        max_P1_after=max_p1_after,
        final_P0=float(final[0]),
        final_P1=float(final[1]),
        final_P2=float(final[2]),
        min_dark_population=min_dark,
    )


def run_time_domain(scenario: Scenario, rho0: ArrayLike | None = None) -> TimeDomainResult:
    """Phase-averaged trajectory over the scenario window, starting in |0> by default."""
    rho0 = basis_state(0) if rho0 is None else rho0
    trajectory = simulate(rho0, scenario.qutrit, scenario.drive, scenario.integrator)
    summary = summarize(trajectory, scenario.drive)
    log.info(
        "max P2 = %.4f at t = %.2f ns, final P2 = %.4f",
        summary.max_P2,
        summary.t_at_max * 1e9,
        summary.final_P2,
    )
    return TimeDomainResult(trajectory, summary)
