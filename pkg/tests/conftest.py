from __future__ import annotations

from collections.abc import Callable

import pytest

from qutrit_stirap.cli import main
from qutrit_stirap.config import read_scenario_file, scenario_from_file
from qutrit_stirap.models import MHZ, NS, DriveSchedule, IntegratorConfig, QutritParams, Scenario
from qutrit_stirap.presets import PAPER_FIG2, PAPER_FIG4B

from . import SHORT_PULSE_SCENARIO

#: ``cli(*argv) -> (out, err, rc)``
CLIFixture = Callable[..., tuple[str, str, int]]


@pytest.fixture
def measured_qutrit() -> QutritParams:
    return scenario_from_file(PAPER_FIG2).qutrit


@pytest.fixture
def lossless_qutrit() -> QutritParams:
    return QutritParams(f10=5555e6, f21=5393e6, lam=1.45)


@pytest.fixture
def reference_drive() -> DriveSchedule:
    return DriveSchedule(omega0=42.8 * MHZ, td=100 * NS)


@pytest.fixture
def reference_scenario() -> Scenario:
    return scenario_from_file(PAPER_FIG2)


@pytest.fixture
def improved_scenario() -> Scenario:
    return scenario_from_file(PAPER_FIG4B)


@pytest.fixture
def short_scenario() -> Scenario:
    """10 ns pulses, 20 ps steps and two phases: runs in about a second."""
    return scenario_from_file(read_scenario_file(SHORT_PULSE_SCENARIO))


@pytest.fixture
def fast_integrator() -> IntegratorConfig:
    return IntegratorConfig(dt=20e-12, record_every=5, phi_samples=2)


@pytest.fixture
def cli(capsys: pytest.CaptureFixture[str]) -> CLIFixture:
    """Run the command line in-process and return ``(out, err, rc)``."""

    def run(*argv: str) -> tuple[str, str, int]:
        rc = main([*argv])
        out, err = capsys.readouterr()
        return out, err, rc

    return run
