from __future__ import annotations

import json

import pytest

from qutrit_stirap.config import read_scenario_file, scenario_from_file
from qutrit_stirap.exceptions import UnknownPresetError
from qutrit_stirap.models import MHZ, NS
from qutrit_stirap.presets import ALIASES, PRESETS, resolve_preset
from qutrit_stirap.pulses import adiabaticity_check


@pytest.mark.parametrize("name", PRESETS)
def test_preset_json_round_trip(name: str, tmp_path) -> None:
    preset = PRESETS[name]
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(preset.model_dump(mode="json"), indent=2))
    assert read_scenario_file(path) == preset


@pytest.mark.parametrize("name", PRESETS)
def test_presets_convert(name: str) -> None:
    scenario = scenario_from_file(PRESETS[name], name)
    assert scenario.labels["preset"] == name
    assert scenario.calibration is not None
    assert scenario.calibration.synthetic


def test_alias() -> None:
    assert set(ALIASES.values()) <= set(PRESETS)
    assert resolve_preset("paper-fig4") is resolve_preset("paper-fig4b")


def test_unknown_preset() -> None:
    with pytest.raises(UnknownPresetError, match="paper-fig5") as exc_info:
        resolve_preset("paper-fig5")
    assert "- paper-fig2" in str(exc_info.value)
    assert exc_info.value.return_code == 2


def test_measured_device() -> None:
    scenario = scenario_from_file(resolve_preset("paper-fig2"))
    assert scenario.qutrit.bare_delta == pytest.approx(162 * MHZ)
    assert scenario.drive.omega0 == pytest.approx(42.8 * MHZ)
    assert scenario.drive.td == pytest.approx(100 * NS)
    assert adiabaticity_check(
        scenario.drive.omega0, scenario.drive.td, scenario.qutrit.bare_delta
    ).passed


def test_improved_device() -> None:
    scenario = scenario_from_file(resolve_preset("paper-fig4b"))
    assert scenario.qutrit.anharmonicity == pytest.approx(0.08)
    assert scenario.qutrit.gamma10 == pytest.approx(1 / 35.3e-6)
    assert scenario.qutrit.gphi10 == pytest.approx(1 / 12.4e-6)


def test_sweep_presets() -> None:
    detuning = resolve_preset("paper-fig3").sweep
    assert detuning is not None
    assert detuning.axis1.name == "delta_p"
    assert len(detuning.axis1.values()) == 181

    efficiency = resolve_preset("paper-fig4a").sweep
    assert efficiency is not None
    assert (efficiency.axis1.name, efficiency.axis2.name) == ("omega0", "td")
    assert efficiency.metric == "final_P2"
