"""
Sensitivity of a resonant two-pi-pulse sequence to its pulse area compared
with STIRAP under the same fractional amplitude error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from ..core import basis_state
from ..dynamics import evolve
from ..pulses import rabi_transfer
from .sweep import parallel_map
from .time_domain import run_time_domain

if TYPE_CHECKING:
    from collections.abc import Iterable
    from typing import Final

    from ..models import PiShape, Scenario
    from ..pulses import PiPulse

log = logging.getLogger(__name__)

#: Fractional errors on the pulse area / Omega_0 compared by default.
DEFAULT_ERRORS: Final = (-0.2, -0.1, 0.0, 0.1, 0.2)


@dataclass(frozen=True)
class PiComparisonRow:
    error: float
    width: float
    #: Pulse area of each pi pulse in units of pi.
    area: float
    efficiency_two_level: float
    efficiency_pi_sequence: float
    max_P1_pi_sequence: float
    efficiency_stirap: float


def simulate_two_level(pulse: PiPulse) -> float:
    """
    Transfer of a resonant pulse on an isolated two-level system.

    The drive has a single quadrature, so the propagator is the exponential
    of the integrated Hamiltonian.
    """
    area, _ = quad(
        lambda t: float(pulse.amplitude(t)),
        pulse.start,
        pulse.end,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    propagator = expm(-0.5j * area * sigma_x)
    return float(abs(propagator[1, 0]) ** 2)


def _pi_sequence_run(task: tuple[Scenario, float, float, float, PiShape]) -> tuple[float, float]:
    scenario, omega, width, gap, shape = task
    drive = scenario.drive.replace(
        order="pi-pulse-pair",
        omega0=omega,
        td=width,
        pi_gap=gap,
        pi_shape=shape,
        delta_p=0.0,
        delta_s=0.0,
        phi=0.0,
        t_start=-width - 0.5 * gap,
        t_end=width + 0.5 * gap,
    )
    integrator = scenario.integrator.model_copy(update={"dt": None})
    trajectory = evolve(basis_state(0), scenario.qutrit, drive, integrator)
    final_p2 = float(trajectory.populations[-1, 2])
    max_p1, _ = trajectory.max_population(1)
    return final_p2, max_p1


def _stirap_run(task: tuple[Scenario, float]) -> float:
    scenario, scale = task
    drive = scenario.drive.replace(omega0=scenario.drive.omega0 * scale)
    return run_time_domain(scenario.replace(drive=drive)).summary.final_P2


def compare_pi_pulse(
    omega: float,
    widths: Iterable[float] | None,
    scenario: Scenario,
    *,
    omega0_errors: Iterable[float] = DEFAULT_ERRORS,
    gap: float = 0.0,
    shape: PiShape = "rectangular",
    workers: int | None = 1,
    progress: bool = False,
) -> list[PiComparisonRow]:
    """
    Table of pi-sequence and STIRAP transfer versus fractional area error.

    Without ``widths`` each row uses ``pi / omega * (1 + error)``; with
    ``widths`` the error of each row is inferred from its area. The
    pi sequence runs on the full three-level model with both carriers at
    their bare transition frequencies; STIRAP runs the scenario with
    Omega_0 scaled by ``1 + error``.
    """
    if widths is None:
        errors = [float(e) for e in omega0_errors]
        widths = [math.pi / omega * (1 + e) for e in errors]
    else:
        widths = [float(w) for w in widths]
        errors = [omega * w / math.pi - 1 for w in widths]
    if any(w <= 0 for w in widths):
        raise ValueError("pi pulse widths must be positive")

    pi_results = parallel_map(
        _pi_sequence_run,
        [(scenario, omega, w, gap, shape) for w in widths],
        workers=workers,
        progress=progress,
        desc="pi sequence",
    )
    stirap_results = parallel_map(
        _stirap_run,
        [(scenario, 1 + e) for e in errors],
        workers=workers,
        progress=progress,
        desc="STIRAP",
    )

    rows = []
    for error, width, (pi_p2, pi_p1), stirap_p2 in zip(errors, widths, pi_results, stirap_results):
        area = omega * width
        rows.append(
            PiComparisonRow(
                error=error,
                width=width,
                area=area / math.pi,
                efficiency_two_level=float(rabi_transfer(area)),
                efficiency_pi_sequence=pi_p2,
                max_P1_pi_sequence=pi_p1,
                efficiency_stirap=stirap_p2,
            )
        )
        log.debug("area %.3f pi: pi sequence %.4f, STIRAP %.4f", area / math.pi, pi_p2, stirap_p2)
    return rows
