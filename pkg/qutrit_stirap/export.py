"""
CSV and JSON artifacts.

CSVs are comma-separated with a header row and LF line endings; floats are
written with ``repr`` so re-runs are byte-identical. Timestamps only go into
JSON sidecars.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .exceptions import ConfigurationError
from .models import MHZ, NS

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence
    from typing import Any, Final

    from numpy.typing import NDArray

    from .dynamics import Trajectory
    from .experiments.robustness import PiComparisonRow
    from .experiments.sweep import SweepResult
    from .pulses import EnvelopeSample

log = logging.getLogger(__name__)

#: Row-major (i, j) order of the ``re_ij,im_ij`` state columns.
STATE_INDICES: Final = tuple((i, j) for i in range(3) for j in range(3))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Iterable[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    log.info("wrote %s", path)
    return path


def artifact_path(out_dir: Path | str, stem: str, fingerprint: str, suffix: str) -> Path:
    """``<out_dir>/<stem>-<fingerprint><suffix>``."""
    return Path(out_dir) / f"{stem}-{fingerprint}{suffix}"


def write_trajectory_csv(path: Path, trajectory: Trajectory, full_state: bool = False) -> Path:
    """Populations per recorded time; ``full_state`` appends every ``re_ij,im_ij`` of rho."""
    header = ["t_ns", "P0", "P1", "P2"]
    if full_state:
        header += [f"{part}_{i}{j}" for i, j in STATE_INDICES for part in ("re", "im")]

    def rows():
        for t, rho, pops in zip(trajectory.times, trajectory.states, trajectory.populations):
            row = [t / NS, *pops]
            if full_state:
                for i, j in STATE_INDICES:
                    row += [rho[i, j].real, rho[i, j].imag]
            yield row

    return _write_rows(path, header, rows())


def read_state_csv(path: Path | str) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Times (s) and density matrices from a trajectory CSV written with ``full_state``."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        columns = [f"{part}_{i}{j}" for i, j in STATE_INDICES for part in ("re", "im")]
        if reader.fieldnames is None or not set(columns) <= set(reader.fieldnames):
            raise ConfigurationError(f"'{path}' has no full-state columns")
        records = [[float(row["t_ns"]), *(float(row[c]) for c in columns)] for row in reader]
    data = np.asarray(records, dtype=float).reshape(-1, 1 + len(columns))
    states = (data[:, 1::2] + 1j * data[:, 2::2]).reshape(-1, 3, 3)
    return data[:, 0] * NS, states


def write_envelope_csv(path: Path, sample: EnvelopeSample) -> Path:
    rows = zip(
        np.asarray(sample.t) / NS,
        np.asarray(sample.omega_p) / MHZ,
        np.asarray(sample.omega_s) / MHZ,
    )
    return _write_rows(path, ["t_ns", "omega_p_mhz", "omega_s_mhz"], rows)


def write_sweep_csv(path: Path, result: SweepResult) -> Path:
    """Long format: one column per axis (``<name>_<unit>``) then the metric."""
    header = [f"{axis.name}_{axis.unit.lower()}" for axis in result.axes] + [result.metric]
    rows = ([*coordinates, value] for coordinates, value in result.points())
    return _write_rows(path, header, rows)


def write_contours_csv(
    path: Path,
    result: SweepResult,
    contours: Mapping[float, Sequence[NDArray[np.float64]]],
) -> Path:
    """Point lists: level, contour index within the level, then the two axis values."""
    first, second = (f"{axis.name}_{axis.unit.lower()}" for axis in result.axes)

    def rows():
        for level, polylines in contours.items():
            for index, polyline in enumerate(polylines):
                for x, y in polyline:
                    yield [level, index, x, y]

    return _write_rows(path, ["level", "contour", first, second], rows())


def write_comparison_csv(path: Path, rows: Sequence[PiComparisonRow]) -> Path:
    header = [
        "error",
        "width_ns",
        "area_pi",
        "two_level",
        "pi_sequence_P2",
        "pi_sequence_max_P1",
        "stirap_P2",
    ]
    return _write_rows(
        path,
        header,
        (
            [
                row.error,
                row.width / NS,
                row.area,
                row.efficiency_two_level,
                row.efficiency_pi_sequence,
                row.max_P1_pi_sequence,
                row.efficiency_stirap,
            ]
            for row in rows
        ),
    )


def read_tomography_csv(path: Path | str) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Read columns ``pA`` and ``pB`` (other columns are ignored)."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"pA", "pB"} <= set(reader.fieldnames):
                raise ConfigurationError(f"'{path}' must have 'pA' and 'pB' columns")
            records = [(float(row["pA"]), float(row["pB"])) for row in reader]
    except FileNotFoundError:
        raise ConfigurationError(f"Tomography input '{path}' does not exist") from None
    except ValueError as e:
        raise ConfigurationError(f"Unable to parse '{path}': {e}") from e
    data = np.asarray(records, dtype=float).reshape(-1, 2)
    return data[:, 0], data[:, 1]


def write_tomography_csv(
    path: Path,
    p_a: NDArray[np.float64],
    p_b: NDArray[np.float64],
    raw: NDArray[np.float64],
    clamped: NDArray[np.float64],
) -> Path:
    header = ["pA", "pB", "P0", "P1", "P2", "P0_clamped", "P1_clamped", "P2_clamped"]
    rows = ([a, b, *r, *c] for a, b, r, c in zip(p_a, p_b, raw, clamped))
    return _write_rows(path, header, rows)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if hasattr(value, "__dataclass_fields__"):
        return _jsonable(asdict(value))
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    return value


def write_sidecar(path: Path, payload: Mapping[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(dict(payload)), indent=2) + "\n")
    log.info("wrote %s", path)
    return path
