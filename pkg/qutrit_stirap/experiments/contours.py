"""
Transfer-efficiency maps in the Omega_0 x T_d plane and their iso-lines.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from skimage.measure import find_contours, points_in_poly

from ..exceptions import ConfigurationError
from .sweep import run_sweep

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from typing import Final

    from numpy.typing import NDArray

    from .sweep import SweepResult, SweepSpec

log = logging.getLogger(__name__)

CONTOUR_LEVELS: Final = (0.98, 0.99)

#: Single-sample decreases along T_d smaller than this are not flagged.
MONOTONICITY_TOLERANCE: Final = 0.002


@dataclass(frozen=True)
class MonotonicityFlag:
    omega0: float
    td_before: float
    td: float
    drop: float


def _to_axis(index: NDArray[np.float64], values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Map fractional indices of the padded grid back onto axis values."""
    unpadded = np.clip(index - 1, 0, len(values) - 1)
    return np.interp(unpadded, np.arange(len(values)), values)


def extract_contours(
    result: SweepResult,
    levels: Iterable[float] = CONTOUR_LEVELS,
) -> dict[float, list[NDArray[np.float64]]]:
    """
    Iso-lines of a 2-D sweep, as ``(k, 2)`` arrays of (axis1, axis2) values.

    The grid is padded with zeros so regions touching the edge still yield
    closed polygons; their edge segments run along the grid boundary.
    """
    if result.values.ndim != 2:
        raise ValueError("contours need a two-axis sweep")
    padded = np.pad(result.values, 1, constant_values=0.0)
    first, second = result.grid
    contours = {}
    for level in levels:
        polylines = [
            np.column_stack([_to_axis(path[:, 0], first), _to_axis(path[:, 1], second)])
            for path in find_contours(padded, level)
        ]
        log.debug("level %.3f: %d contour(s)", level, len(polylines))
        contours[level] = polylines
    return contours


def contour_contains(polylines: Sequence[NDArray[np.float64]], point: Sequence[float]) -> bool:
    """Whether ``point`` (axis1, axis2) lies inside any of the closed ``polylines``."""
    return any(
        bool(points_in_poly(np.asarray([point], dtype=float), polyline)[0])
        for polyline in polylines
        if len(polyline) >= 3
    )


def monotonicity_flags(
    result: SweepResult,
    tolerance: float = MONOTONICITY_TOLERANCE,
) -> list[MonotonicityFlag]:
    """
    Decreases of P2 along T_d (axis2) before each row's maximum.

    Past the maximum decoherence is expected to win, so only the rising part
    is inspected. Flags are logged and returned, never raised.
    """
    omega0_values, td_values = result.grid
    flags = []
    for row, omega0 in zip(result.values, omega0_values):
        turnover = int(np.argmax(row))
        drops = -np.diff(row[: turnover + 1])
        for j in np.flatnonzero(drops > tolerance):
            flag = MonotonicityFlag(
                omega0=float(omega0),
                td_before=float(td_values[j]),
                td=float(td_values[j + 1]),
                drop=float(drops[j]),
            )
            log.warning(
                "P2 drops by %.4f between T_d = %g and %g ns at Omega_0 = %g MHz",
                flag.drop,
                flag.td_before,
                flag.td,
                flag.omega0,
            )
            flags.append(flag)
    return flags


def contour_efficiency(
    spec: SweepSpec,
    levels: Iterable[float] = CONTOUR_LEVELS,
    workers: int | None = 1,
    progress: bool = False,
) -> tuple[SweepResult, dict[float, list[NDArray[np.float64]]]]:
    """Final-P2 map over (omega0, td) and its contours at ``levels``."""
    names = tuple(axis.name for axis in spec.axes)
    if names != ("omega0", "td"):
        raise ConfigurationError(
            f"An efficiency map needs axes ('omega0', 'td'), got {names}"
        )
    if spec.metric != "final_P2":
        log.info("efficiency maps use final_P2; ignoring metric %s", spec.metric)
        spec = spec.model_copy(update={"metric": "final_P2"})
    result = run_sweep(spec, workers=workers, progress=progress)
    monotonicity_flags(result)
    return result, extract_contours(result, levels)
