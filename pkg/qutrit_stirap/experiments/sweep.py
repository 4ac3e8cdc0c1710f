"""
Grid sweeps over named scenario parameters.

Axes are given in display units (MHz, ns, multiples of pi, rad). Every grid
point is an independent phase-averaged run from |0>, evaluated in a process
pool and collected in grid order.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Any, Literal  # noqa: TCH003

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from tqdm import tqdm

from ..core import basis_state
from ..dynamics import POPULATION_SLACK, simulate
from ..exceptions import UnknownAxisError
from ..models import MHZ, NS, Positive, Scenario  # noqa: TCH001
from ..pulses import pulse_area

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable
    from typing import Final, TypeVar

    from numpy.typing import NDArray

    from ..dynamics import Trajectory

    T = TypeVar("T")
    R = TypeVar("R")

log = logging.getLogger(__name__)

Metric = Literal["final_P2", "max_P2", "max_P1"]

#: Human-readable definition of each metric, copied into sidecar metadata.
METRIC_NOTES: Final = {
    "final_P2": "P2 at the end of the simulation window (+3 T_d)",
    "max_P2": "maximum of P2 over all recorded times",
    "max_P1": "maximum of P1 over all recorded times",
}


@dataclass(frozen=True)
class SweepParameter:
    name: str
    unit: str
    apply: Callable[[Scenario, float], Scenario]


def _drive_setter(key: str, scale: float) -> Callable[[Scenario, float], Scenario]:
    def apply(scenario: Scenario, value: float) -> Scenario:
        return scenario.replace(drive=scenario.drive.replace(**{key: value * scale}))

    return apply


def _set_pulse_area(scenario: Scenario, value: float) -> Scenario:
    # value is the rms pulse area in units of pi at the current T_d
    omega0 = value * math.pi / pulse_area(1.0, scenario.drive.td)
    return scenario.replace(drive=scenario.drive.replace(omega0=omega0))


#: Sweepable parameters, applied in axis order (sweep ``td`` before
#: ``pulse_area`` when both are present).
PARAMETERS: Final = {
    parameter.name: parameter
    for parameter in (
        SweepParameter("delta_p", "MHz", _drive_setter("delta_p", MHZ)),
        SweepParameter("delta_s", "MHz", _drive_setter("delta_s", MHZ)),
        SweepParameter("omega0", "MHz", _drive_setter("omega0", MHZ)),
        SweepParameter("td", "ns", _drive_setter("td", NS)),
        SweepParameter("pulse_area", "pi", _set_pulse_area),
        SweepParameter("phi", "rad", _drive_setter("phi", 1.0)),
    )
}


class SweepAxis(BaseModel):
    """Inclusive range ``start, start + step, ..., <= stop`` of one parameter."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    start: float
    stop: float
    step: Positive

    @field_validator("name")
    @classmethod
    def check_name(cls, name: str) -> str:
        if name not in PARAMETERS:
            raise UnknownAxisError(name, PARAMETERS)
        return name

    @model_validator(mode="after")
    def check_range(self) -> SweepAxis:
        if self.stop < self.start:
            raise ValueError(
                f"sweep axis {self.name!r} is empty: stop {self.stop:g} < start {self.start:g}"
            )
        return self

    @property
    def parameter(self) -> SweepParameter:
        return PARAMETERS[self.name]

    @property
    def unit(self) -> str:
        return self.parameter.unit

    def values(self) -> NDArray[np.float64]:
        count = math.floor((self.stop - self.start) / self.step + 1e-9) + 1
        return np.round(self.start + self.step * np.arange(count), 10)

    def coarsen(self, factor: int) -> SweepAxis:
        return self.model_copy(update={"step": self.step * factor})


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    axis1: SweepAxis
    axis2: SweepAxis | None = None
    metric: Metric = "final_P2"
    base: Scenario

    @property
    def axes(self) -> tuple[SweepAxis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    def coarsen(self, factor: int) -> SweepSpec:
        return self.model_copy(
            update={
                "axis1": self.axis1.coarsen(factor),
                "axis2": None if self.axis2 is None else self.axis2.coarsen(factor),
            }
        )

    def scenarios(self) -> list[Scenario]:
        """Scenario at every grid point in C order (last axis fastest)."""
        grids = [axis.values() for axis in self.axes]
        points = []
        for coordinates in itertools.product(*grids):
            scenario = self.base
            for axis, value in zip(self.axes, coordinates):
                scenario = axis.parameter.apply(scenario, float(value))
            points.append(scenario)
        return points


@dataclass(frozen=True)
class SweepResult:
    axes: tuple[SweepAxis, ...]
    grid: tuple[NDArray[np.float64], ...]
    values: NDArray[np.float64]
    metric: Metric
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        expected = tuple(len(g) for g in self.grid)
        if self.values.shape != expected:
            raise ValueError(f"sweep values have shape {self.values.shape}, expected {expected}")
        if np.any(self.values < -POPULATION_SLACK) or np.any(self.values > 1 + POPULATION_SLACK):
            raise ValueError("sweep values must lie in [0, 1]")

    def points(self) -> Iterable[tuple[tuple[float, ...], float]]:
        """``(coordinates, value)`` pairs in C order."""
        for index in np.ndindex(self.values.shape):
            coordinates = tuple(float(g[i]) for g, i in zip(self.grid, index))
            yield coordinates, float(self.values[index])


def metric_value(trajectory: Trajectory, metric: Metric) -> float:
    pops = trajectory.populations
    if metric == "final_P2":
        return float(pops[-1, 2])
    if metric == "max_P2":
        return float(np.max(pops[:, 2]))
    return float(np.max(pops[:, 1]))


def evaluate_point(task: tuple[Scenario, Metric]) -> float:
    """Run one grid point from |0>; module level so worker processes can unpickle it."""
    scenario, metric = task
    trajectory = simulate(basis_state(0), scenario.qutrit, scenario.drive, scenario.integrator)
    return metric_value(trajectory, metric)


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    *,
    workers: int | None = 1,
    progress: bool = False,
    desc: str | None = None,
) -> list[R]:
    """``[fn(item) for item in items]`` over a process pool, results in input order."""
    items = list(items)
    if workers is None:
        workers = os.cpu_count() or 1
    workers = max(1, min(workers, len(items)))
    results: list[R] = []
    with tqdm(total=len(items), desc=desc, disable=not progress) as bar:
        if workers == 1:
            for item in items:
                results.append(fn(item))
                bar.update()
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                for result in executor.map(fn, items):
                    results.append(result)
                    bar.update()
    return results


def run_sweep(
    spec: SweepSpec,
    workers: int | None = 1,
    progress: bool = False,
) -> SweepResult:
    grid = tuple(axis.values() for axis in spec.axes)
    scenarios = spec.scenarios()
    log.info(
        "sweeping %s over %d point(s), metric %s",
        " x ".join(axis.name for axis in spec.axes),
        len(scenarios),
        spec.metric,
    )
    values = parallel_map(
        evaluate_point,
        [(scenario, spec.metric) for scenario in scenarios],
        workers=workers,
        progress=progress,
        desc=spec.metric,
    )
    return SweepResult(
        axes=spec.axes,
        grid=grid,
        values=np.asarray(values, dtype=float).reshape([len(g) for g in grid]),
        metric=spec.metric,
        meta={
            "fingerprint": spec.base.fingerprint(),
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "metric": spec.metric,
            "metric_note": METRIC_NOTES[spec.metric],
        },
    )
