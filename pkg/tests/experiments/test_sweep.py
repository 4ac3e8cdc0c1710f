from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
import pytest
from pydantic import ValidationError

from qutrit_stirap.config import read_scenario_file, sweep_spec_from_file
from qutrit_stirap.exceptions import UnknownAxisError
from qutrit_stirap.experiments import PARAMETERS, SweepAxis, SweepResult, SweepSpec, run_sweep
from qutrit_stirap.experiments.sweep import parallel_map
from qutrit_stirap.models import MHZ, NS
from qutrit_stirap.presets import PAPER_FIG3
from qutrit_stirap.pulses import pulse_area

from .. import SHORT_PULSE_SCENARIO

if TYPE_CHECKING:
    from pytest_mock import MockerFixture

    from qutrit_stirap.models import Scenario


def test_axis_values_are_inclusive() -> None:
    axis = SweepAxis(name="delta_p", start=-60.0, stop=120.0, step=1.0)
    values = axis.values()
    assert len(values) == 181
    assert values[0] == -60.0
    assert values[-1] == 120.0
    assert axis.coarsen(4).values().tolist()[-1] == 120.0
    assert len(axis.coarsen(4).values()) == 46


def test_axis_with_fractional_step() -> None:
    values = SweepAxis(name="phi", start=0.0, stop=0.3, step=0.1).values()
    assert values.tolist() == [0.0, 0.1, 0.2, 0.3]


def test_empty_axis() -> None:
    with pytest.raises(ValidationError, match="is empty"):
        SweepAxis(name="td", start=10.0, stop=5.0, step=1.0)


def test_unknown_axis() -> None:
    with pytest.raises(UnknownAxisError, match="- pulse_area"):
        SweepAxis(name="delta_x", start=0.0, stop=1.0, step=1.0)


def test_units() -> None:
    assert {name: parameter.unit for name, parameter in PARAMETERS.items()} == {
        "delta_p": "MHz",
        "delta_s": "MHz",
        "omega0": "MHz",
        "td": "ns",
        "pulse_area": "pi",
        "phi": "rad",
    }


def test_parameters_convert_display_units(reference_scenario: Scenario) -> None:
    changed = PARAMETERS["delta_p"].apply(reference_scenario, -20.0)
    assert changed.drive.delta_p == pytest.approx(-20 * MHZ)
    changed = PARAMETERS["td"].apply(reference_scenario, 50.0)
    assert changed.drive.td == pytest.approx(50 * NS)
    assert reference_scenario.drive.td == pytest.approx(100 * NS)


def test_pulse_area_parameter(reference_scenario: Scenario) -> None:
    changed = PARAMETERS["pulse_area"].apply(reference_scenario, 12.0)
    assert pulse_area(changed.drive.omega0, changed.drive.td) == pytest.approx(12 * math.pi)


def test_scenarios_in_c_order(reference_scenario: Scenario) -> None:
    spec = SweepSpec(
        axis1=SweepAxis(name="omega0", start=10.0, stop=20.0, step=10.0),
        axis2=SweepAxis(name="td", start=50.0, stop=70.0, step=10.0),
        base=reference_scenario,
    )
    points = [(s.drive.omega0 / MHZ, s.drive.td / NS) for s in spec.scenarios()]
    assert points == pytest.approx(
        [(10, 50), (10, 60), (10, 70), (20, 50), (20, 60), (20, 70)]
    )


def test_parallel_map_preserves_order() -> None:
    items = list(range(20))
    expected = [math.sqrt(i) for i in items]
    assert parallel_map(math.sqrt, items, workers=2) == expected
    assert parallel_map(math.sqrt, items) == expected
    assert parallel_map(math.sqrt, []) == []


def test_single_worker_stays_in_process(mocker: MockerFixture) -> None:
    pool = mocker.patch("qutrit_stirap.experiments.sweep.ProcessPoolExecutor")
    assert parallel_map(math.sqrt, [1.0, 4.0], workers=1) == [1.0, 2.0]
    assert parallel_map(math.sqrt, [9.0], workers=4) == [3.0]
    pool.assert_not_called()


def test_sweep_without_drive(short_scenario: Scenario) -> None:
    spec = SweepSpec(
        axis1=SweepAxis(name="delta_p", start=-10.0, stop=10.0, step=10.0),
        metric="max_P2",
        base=short_scenario.replace(drive=short_scenario.drive.replace(omega0=0.0)),
    )
    result = run_sweep(spec)
    np.testing.assert_allclose(result.values, 0.0, atol=1e-15)
    assert result.meta["metric"] == "max_P2"
    assert result.meta["fingerprint"] == spec.base.fingerprint()


def test_sweep_from_file(short_scenario: Scenario) -> None:
    spec = sweep_spec_from_file(read_scenario_file(SHORT_PULSE_SCENARIO))
    assert spec.base == short_scenario
    result = run_sweep(spec, workers=2)
    assert result.values.shape == (3,)
    assert result.values[0] == pytest.approx(0.0, abs=1e-15)
    assert list(result.points())[1][0] == (50.0,)


def test_sweep_result_validation() -> None:
    axis = SweepAxis(name="omega0", start=0.0, stop=1.0, step=1.0)
    grid = (axis.values(),)
    with pytest.raises(ValueError, match="shape"):
        SweepResult((axis,), grid, np.zeros(3), "final_P2")
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        SweepResult((axis,), grid, np.array([0.5, 1.1]), "final_P2")


def test_detuning_preset_spec() -> None:
    spec = sweep_spec_from_file(PAPER_FIG3)
    assert spec.base.drive.delta_s == pytest.approx(20 * MHZ)
    assert spec.coarsen(4).axis1.step == 4.0
