from __future__ import annotations

import csv
import json
from typing import TYPE_CHECKING

import numpy as np
import pytest

from qutrit_stirap import APP_NAME
from qutrit_stirap.cli import build_parser, subcommands
from qutrit_stirap.experiments import run_time_domain
from qutrit_stirap.export import read_state_csv

from . import MEASURED_PROBABILITIES, SHORT_PULSE_SCENARIO

if TYPE_CHECKING:
    from pathlib import Path

    from qutrit_stirap.models import Scenario

    from .conftest import CLIFixture


def read_header(path: Path) -> list[str]:
    with path.open(newline="") as fh:
        return next(csv.reader(fh))


def only(directory: Path, pattern: str) -> Path:
    (match,) = directory.glob(pattern)
    return match


def test_subcommands_are_registered() -> None:
    names = [command.name for command in subcommands()]
    assert names == ["evolve", "sweep", "tomography", "check", "pulses", "robustness"]
    defaults = {command.name: command.default_preset for command in subcommands()}
    assert defaults["sweep"] == "paper-fig3"
    assert defaults["robustness"] == "paper-fig4b"


def test_preset_and_config_are_exclusive(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args(
            ["evolve", "--preset", "paper-fig2", "--config", str(SHORT_PULSE_SCENARIO)]
        )
    assert "not allowed with argument" in capsys.readouterr().err


def test_pulses(cli: CLIFixture, tmp_path: Path) -> None:
    out, _, rc = cli("pulses", "--out-dir", str(tmp_path), "--samples", "11")
    assert rc == 0
    assert "pulse area:" in out
    envelope = only(tmp_path, "envelope-*.csv")
    assert read_header(envelope) == ["t_ns", "omega_p_mhz", "omega_s_mhz"]
    assert len(envelope.read_text().splitlines()) == 12


def test_pulses_pi_order(cli: CLIFixture, tmp_path: Path) -> None:
    _, _, rc = cli(
        "pulses",
        "--out-dir", str(tmp_path),
        "--order", "pi-pulse-pair",
        "--omega0-mhz", "100",
        "--td-ns", "5",
    )
    assert rc == 0
    rows = list(csv.DictReader(only(tmp_path, "envelope-*.csv").open(newline="")))
    assert any(float(row["omega_p_mhz"]) > 0 for row in rows)
    assert any(float(row["omega_s_mhz"]) > 0 for row in rows)


@pytest.mark.parametrize(
    "flags,failed",
    [
        pytest.param(["--td-ns", "10", "--dt-ps", "20"], "pulse area", id="short-pulses"),
        pytest.param(["--omega0-mhz", "150", "--dt-ps", "200"], "detuning ratio", id="strong-drive"),
    ],
)
def test_check_fails(cli: CLIFixture, flags: list[str], failed: str) -> None:
    out, _, rc = cli("check", *flags)
    assert rc == 1
    verdicts = {line.split(":")[0]: line.split()[-1] for line in out.splitlines()}
    assert verdicts[failed] == "FAIL"
    assert verdicts["overall"] == "FAIL"


def test_tomography(
    cli: CLIFixture, tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    out, _, rc = cli("tomography", str(MEASURED_PROBABILITIES), "--out-dir", str(tmp_path))
    assert rc == 0
    assert "4 row(s) inverted" in out
    assert "synthetic" in caplog.text
    output = only(tmp_path, "tomography-measured-*.csv")
    rows = list(csv.DictReader(output.open(newline="")))
    assert [float(rows[0][key]) for key in ("P0", "P1", "P2")] == pytest.approx(
        [1.0, 0.0, 0.0], abs=1e-12
    )


def test_tomography_singular_calibration(cli: CLIFixture, tmp_path: Path) -> None:
    _, err, rc = cli(
        "tomography",
        str(MEASURED_PROBABILITIES),
        "--out-dir", str(tmp_path),
        "--pa", "0.1", "0.5", "0.9",
        "--pb", "0.1", "0.5", "0.9",
    )
    assert rc == 4
    assert err.startswith(f"{APP_NAME}: error: Tomography calibration is singular")


@pytest.mark.parametrize(
    "argv,match",
    [
        pytest.param(["evolve", "--preset", "paper-fig5"], "Unknown preset", id="preset"),
        pytest.param(["sweep", "--preset", "paper-fig2"], "no 'sweep' section", id="no-sweep"),
        pytest.param(["evolve", "--dt-ps", "1000"], "exceeds T_d / 500", id="step"),
        pytest.param(["evolve", "--config", "absent.json"], "does not exist", id="missing"),
    ],
)
def test_configuration_errors(cli: CLIFixture, tmp_path: Path, argv: list[str], match: str) -> None:
    _, err, rc = cli(*argv, "--out-dir", str(tmp_path))
    assert rc == 2
    assert match in err
    assert not any(tmp_path.iterdir())


def test_evolve_without_drive(cli: CLIFixture, tmp_path: Path) -> None:
    out, _, rc = cli(
        "evolve",
        "--config", str(SHORT_PULSE_SCENARIO),
        "--omega0-mhz", "0",
        "--out-dir", str(tmp_path),
        "--full-state",
    )
    assert rc == 0
    assert out.startswith("max_P2 = 0.0000")
    header = read_header(only(tmp_path, "trajectory-*.csv"))
    assert header[:4] == ["t_ns", "P0", "P1", "P2"]
    assert "re_01" in header
    sidecar = json.loads(only(tmp_path, "evolve-*.json").read_text())
    assert sidecar["scenario"]["drive"]["omega0_mhz"] == 0.0
    assert sidecar["summary"]["min_dark_population"] == pytest.approx(1.0)


def test_full_state_columns(
    cli: CLIFixture, tmp_path: Path, short_scenario: Scenario
) -> None:
    _, _, rc = cli(
        "evolve", "--config", str(SHORT_PULSE_SCENARIO), "--out-dir", str(tmp_path), "--full-state"
    )
    assert rc == 0
    path = only(tmp_path, "trajectory-*.csv")
    header = read_header(path)
    assert len(header) == 4 + 18
    assert header[4:8] == ["re_00", "im_00", "re_01", "im_01"]
    assert header[-2:] == ["re_22", "im_22"]

    times, states = read_state_csv(path)
    expected = run_time_domain(short_scenario).trajectory
    np.testing.assert_allclose(times, expected.times, rtol=0, atol=1e-18)
    np.testing.assert_allclose(states, expected.states, rtol=0, atol=1e-15)
    np.testing.assert_allclose(states, np.conj(np.swapaxes(states, -1, -2)), atol=1e-12)
    with path.open(newline="") as fh:
        populations = [[float(row[p]) for p in ("P0", "P1", "P2")] for row in csv.DictReader(fh)]
    np.testing.assert_allclose(np.real(np.diagonal(states, axis1=-2, axis2=-1)), populations)


def test_sweep_is_independent_of_workers(cli: CLIFixture, tmp_path: Path) -> None:
    outputs = []
    for workers in ("1", "2"):
        out_dir = tmp_path / f"workers-{workers}"
        _, _, rc = cli(
            "sweep",
            "--config", str(SHORT_PULSE_SCENARIO),
            "--workers", workers,
            "--out-dir", str(out_dir),
        )
        assert rc == 0
        outputs.append(only(out_dir, "sweep-*.csv").read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].splitlines()[0] == b"omega0_mhz,final_P2"


def test_coarse_sweep_file_name(cli: CLIFixture, tmp_path: Path) -> None:
    out, _, rc = cli(
        "sweep", "--config", str(SHORT_PULSE_SCENARIO), "--coarse", "--out-dir", str(tmp_path)
    )
    assert rc == 0
    # a step of 200 MHz leaves only the start of the 0..100 MHz axis
    assert "1 point(s)" in out
    assert only(tmp_path, "sweep-coarse-*.json").exists()


@pytest.mark.slow
def test_evolve_measured_device(cli: CLIFixture, tmp_path: Path) -> None:
    out, _, rc = cli("evolve", "--out-dir", str(tmp_path))
    assert rc == 0
    max_p2 = float(out.split()[2])
    # limited by dephasing of the 0-2 coherence
    assert max_p2 == pytest.approx(0.593, abs=0.01)


@pytest.mark.slow
def test_check_measured_device(cli: CLIFixture) -> None:
    out, _, rc = cli("check")
    assert rc == 0
    assert out.splitlines()[-1] == "overall: PASS"
