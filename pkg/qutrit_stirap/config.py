"""
Scenario files: a JSON document in laboratory units.

Frequencies are ordinary frequencies in MHz (Omega / 2 pi), times are in ns
(``dt`` in ps) and decoherence rates in 1/s. The file is read with
``ruamel.yaml``, which accepts JSON as a subset of YAML 1.2. Conversion to
the SI domain models happens once, in :func:`scenario_from_file`.
"""

from __future__ import annotations

import copy
import logging
from functools import cache
from pathlib import Path
from typing import TYPE_CHECKING, Annotated  # noqa: TCH003

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from ruamel.yaml import YAML, YAMLError

from .exceptions import ConfigurationError, ScenarioParserError, ScenarioValidationError
from .experiments.sweep import Metric, SweepAxis, SweepSpec  # noqa: TCH001
from .models import (  # noqa: TCH001
    DEFAULT_LAMBDA,
    MHZ,
    MIN_STEPS_PER_TD,
    NS,
    PS,
    DriveSchedule,
    IntegratorConfig,
    NonNegative,
    PiShape,
    Positive,
    PulseOrder,
    QutritParams,
    Scenario,
    TomographyCalibration,
)

if TYPE_CHECKING:
    from collections.abc import Mapping
    from typing import Any

log = logging.getLogger(__name__)


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class QutritSection(_Section):
    f10_mhz: Positive
    f21_mhz: Positive
    lam: NonNegative = DEFAULT_LAMBDA
    #: Relaxation and dephasing rates (1/s).
    gamma10: NonNegative = 0.0
    gamma21: NonNegative = 0.0
    gphi10: NonNegative = 0.0
    #: ``None`` derives 2 gphi10 and gphi10 respectively.
    gphi20: NonNegative | None = None
    gphi21: NonNegative | None = None


class DriveSection(_Section):
    omega0_mhz: NonNegative
    td_ns: Positive
    delta_p_mhz: float = 0.0
    delta_s_mhz: float = 0.0
    phi: float = 0.0
    t_start_ns: float | None = None
    t_end_ns: float | None = None
    order: PulseOrder = "counterintuitive"
    pi_gap_ns: NonNegative = 0.0
    pi_shape: PiShape = "rectangular"


class IntegratorSection(_Section):
    dt_ps: Positive | None = None
    record_every: Annotated[int, Field(ge=1)] = 10
    phi_samples: Annotated[int, Field(ge=1)] = 36
    renormalize: bool = False


class SweepSection(_Section):
    axis1: SweepAxis
    axis2: SweepAxis | None = None
    metric: Metric = "final_P2"


class ScenarioFile(_Section):
    qutrit: QutritSection
    drive: DriveSection
    integrator: Annotated[IntegratorSection, Field(default_factory=IntegratorSection)]
    calibration: TomographyCalibration | None = None
    sweep: SweepSection | None = None
    labels: Annotated[dict[str, str], Field(default_factory=dict)]


@cache
def load_config(path: Path) -> dict[str, Any]:
    """Parse a scenario file into plain Python objects (cached per path)."""
    yaml = YAML(typ="safe", pure=True)
    try:
        with path.open() as fh:
            return yaml.load(fh)
    except YAMLError as e:
        raise ScenarioParserError(e, path) from e


def validate_scenario_file(data: Any, source: Path | str) -> ScenarioFile:
    try:
        return ScenarioFile.model_validate(data)
    except ValidationError as e:
        raise ScenarioValidationError(e, source) from e


def read_scenario_file(path: Path | str) -> ScenarioFile:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Scenario file '{path}' does not exist")
    return validate_scenario_file(load_config(path.resolve()), path)


def apply_overrides(
    file: ScenarioFile,
    overrides: Mapping[str, Any],
    source: Path | str = "<overrides>",
) -> ScenarioFile:
    """
    Set dotted keys (``drive.omega0_mhz``) and re-validate.

    ``None`` values are skipped so unset command-line flags leave the file alone.
    """
    data = copy.deepcopy(file.model_dump(mode="json"))
    for key, value in overrides.items():
        if value is None:
            continue
        *parents, leaf = key.split(".")
        node = data
        for part in parents:
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            if not isinstance(child, dict):
                raise ConfigurationError(
                    f"Cannot override '{key}': '{part}' is not a section"
                )
            node = child
        node[leaf] = value
        log.debug("override %s = %r", key, value)
    return validate_scenario_file(data, source)


def scenario_from_file(file: ScenarioFile, source: Path | str = "<scenario>") -> Scenario:
    """Convert to SI domain models, enforcing dt <= T_d / 500."""
    q, d, i = file.qutrit, file.drive, file.integrator
    if i.dt_ps is not None and i.dt_ps * PS > d.td_ns * NS / MIN_STEPS_PER_TD:
        raise ConfigurationError(
            f"Integrator step dt = {i.dt_ps:g} ps exceeds T_d / {MIN_STEPS_PER_TD} "
            f"= {d.td_ns * 1e3 / MIN_STEPS_PER_TD:g} ps in {source}"
        )
    try:
        return Scenario(
            qutrit=QutritParams(
                f10=q.f10_mhz * 1e6,
                f21=q.f21_mhz * 1e6,
                lam=q.lam,
                gamma10=q.gamma10,
                gamma21=q.gamma21,
                gphi10=q.gphi10,
                gphi20=q.gphi20,
                gphi21=q.gphi21,
            ),
            drive=DriveSchedule(
                omega0=d.omega0_mhz * MHZ,
                td=d.td_ns * NS,
                delta_p=d.delta_p_mhz * MHZ,
                delta_s=d.delta_s_mhz * MHZ,
                phi=d.phi,
                t_start=None if d.t_start_ns is None else d.t_start_ns * NS,
                t_end=None if d.t_end_ns is None else d.t_end_ns * NS,
                order=d.order,
                pi_gap=d.pi_gap_ns * NS,
                pi_shape=d.pi_shape,
            ),
            integrator=IntegratorConfig(
                dt=None if i.dt_ps is None else i.dt_ps * PS,
                record_every=i.record_every,
                phi_samples=i.phi_samples,
                renormalize=i.renormalize,
            ),
            calibration=file.calibration,
            labels=file.labels,
        )
    except ValidationError as e:
        raise ScenarioValidationError(e, source) from e


def sweep_spec_from_file(file: ScenarioFile, source: Path | str = "<scenario>") -> SweepSpec:
    if file.sweep is None:
        raise ConfigurationError(f"{source} has no 'sweep' section")
    return SweepSpec(
        axis1=file.sweep.axis1,
        axis2=file.sweep.axis2,
        metric=file.sweep.metric,
        base=scenario_from_file(file, source),
    )


def file_from_scenario(scenario: Scenario, sweep: SweepSection | None = None) -> ScenarioFile:
    """Inverse of :func:`scenario_from_file`, for provenance sidecars."""
    q, d, i = scenario.qutrit, scenario.drive, scenario.integrator
    return ScenarioFile(
        qutrit=QutritSection(
            f10_mhz=q.f10 / 1e6,
            f21_mhz=q.f21 / 1e6,
            lam=q.lam,
            gamma10=q.gamma10,
            gamma21=q.gamma21,
            gphi10=q.gphi10,
            gphi20=q.gphi20,
            gphi21=q.gphi21,
        ),
        drive=DriveSection(
            omega0_mhz=d.omega0 / MHZ,
            td_ns=d.td / NS,
            delta_p_mhz=d.delta_p / MHZ,
            delta_s_mhz=d.delta_s / MHZ,
            phi=d.phi,
            t_start_ns=None if d.t_start is None else d.t_start / NS,
            t_end_ns=None if d.t_end is None else d.t_end / NS,
            order=d.order,
            pi_gap_ns=d.pi_gap / NS,
            pi_shape=d.pi_shape,
        ),
        integrator=IntegratorSection(
            dt_ps=None if i.dt is None else i.dt / PS,
            record_every=i.record_every,
            phi_samples=i.phi_samples,
            renormalize=i.renormalize,
        ),
        calibration=scenario.calibration,
        sweep=sweep,
        labels=scenario.labels,
    )
