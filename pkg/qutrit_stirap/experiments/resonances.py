"""
Resonance spectroscopy: sweep the pump detuning and locate the transfer peaks.

The left peak sits on two-photon resonance (Delta_p = -Delta_s). The right
peak appears when the off-resonant cross couplings line up instead and is
narrower.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.signal import find_peaks

from ..exceptions import ConfigurationError, NoPeakFoundError
from ..models import MHZ
from .sweep import run_sweep

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from .sweep import SweepResult, SweepSpec

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Peak:
    position: float
    value: float
    fwhm: float


@dataclass(frozen=True)
class PeakReport:
    left: Peak
    right: Peak | None
    #: Where the two-photon peak should be (-Delta_s), in axis units.
    expected_left: float | None
    step: float

    @property
    def left_peak_at(self) -> float:
        return self.left.position

    @property
    def left_peak_value(self) -> float:
        return self.left.value

    @property
    def left_fwhm(self) -> float:
        return self.left.fwhm

    @property
    def right_peak_at(self) -> float | None:
        return None if self.right is None else self.right.position

    @property
    def right_peak_value(self) -> float | None:
        return None if self.right is None else self.right.value

    @property
    def right_fwhm(self) -> float | None:
        return None if self.right is None else self.right.fwhm

    @property
    def left_on_resonance(self) -> bool | None:
        if self.expected_left is None:
            return None
        return abs(self.left.position - self.expected_left) <= self.step


def _refine(x: NDArray[np.float64], y: NDArray[np.float64], index: int) -> tuple[float, float]:
    """Vertex of the parabola through the three samples around ``index``."""
    if index == 0 or index == len(y) - 1:
        return float(x[index]), float(y[index])
    y0, y1, y2 = y[index - 1], y[index], y[index + 1]
    curvature = y0 - 2 * y1 + y2
    if curvature >= 0:
        return float(x[index]), float(y1)
    offset = 0.5 * (y0 - y2) / curvature
    step = x[index + 1] - x[index]
    return float(x[index] + offset * step), float(y1 - 0.25 * (y0 - y2) * offset)


def _crossing(x: NDArray[np.float64], y: NDArray[np.float64], i: int, j: int, level: float) -> float:
    """Linear interpolation of ``level`` between samples ``i`` and ``j``."""
    if y[j] == y[i]:
        return float(x[i])
    return float(x[i] + (level - y[i]) * (x[j] - x[i]) / (y[j] - y[i]))


def _half_width(
    x: NDArray[np.float64],
    y: NDArray[np.float64],
    index: int,
    height: float,
    lower: int,
    upper: int,
) -> float:
    half = 0.5 * height
    left = index
    while left > lower and y[left] >= half:
        left -= 1
    left_x = _crossing(x, y, left, left + 1, half) if y[left] < half else float(x[lower])
    right = index
    while right < upper and y[right] >= half:
        right += 1
    right_x = _crossing(x, y, right - 1, right, half) if y[right] < half else float(x[upper])
    return right_x - left_x


def find_peaks_report(
    axis: ArrayLike,
    values: ArrayLike,
    expected_left: float | None = None,
    *,
    axis_name: str = "delta_p",
) -> PeakReport:
    """
    Keep the two most prominent local maxima of ``values`` and describe them.

    Each peak is refined with a three-point parabola; its FWHM uses linear
    interpolation of the half-maximum crossings, searched no further than
    the valley shared with the other peak.
    """
    x = np.asarray(axis, dtype=float)
    y = np.asarray(values, dtype=float)
    step = float(x[1] - x[0]) if len(x) > 1 else 0.0
    candidates, properties = find_peaks(y, prominence=0.0)
    if len(candidates) == 0:
        raise NoPeakFoundError(axis_name)
    strongest = np.argsort(properties["prominences"], kind="stable")[::-1][:2]
    chosen = sorted(int(i) for i in candidates[strongest])

    valleys = []
    if len(chosen) == 2:
        first, second = chosen
        valleys.append(first + int(np.argmin(y[first : second + 1])))
    bounds = [0, *valleys, len(y) - 1]

    peaks = []
    for n, index in enumerate(chosen):
        position, height = _refine(x, y, index)
        fwhm = _half_width(x, y, index, height, bounds[n], bounds[n + 1])
        peaks.append(Peak(position=position, value=height, fwhm=fwhm))

    report = PeakReport(
        left=peaks[0],
        right=peaks[1] if len(peaks) == 2 else None,
        expected_left=expected_left,
        step=step,
    )
    if report.left_on_resonance is False:
        log.warning(
            "left peak at %.3f is more than one step from the two-photon resonance %.3f",
            report.left.position,
            expected_left,
        )
    return report


def sweep_detuning(
    spec: SweepSpec,
    workers: int | None = 1,
    progress: bool = False,
) -> tuple[SweepResult, PeakReport]:
    """Pump-detuning scan (axis1 = delta_p, MHz) at the base Stokes detuning."""
    if spec.axis1.name != "delta_p" or spec.axis2 is not None:
        raise ConfigurationError(
            "A detuning sweep needs a single 'delta_p' axis, got "
            + ", ".join(repr(axis.name) for axis in spec.axes)
        )
    result = run_sweep(spec, workers=workers, progress=progress)
    expected_left = -spec.base.drive.delta_s / MHZ
    report = find_peaks_report(result.grid[0], result.values, expected_left)
    log.info(
        "left peak %.4f at %.2f MHz (FWHM %.2f MHz)",
        report.left.value,
        report.left.position,
        report.left.fwhm,
    )
    if report.right is not None:
        log.info(
            "right peak %.4f at %.2f MHz (FWHM %.2f MHz)",
            report.right.value,
            report.right.position,
            report.right.fwhm,
        )
    return result, report
