"""Figure-level studies built on the dynamics engine."""

from __future__ import annotations

from .contours import contour_contains, contour_efficiency, extract_contours, monotonicity_flags
from .resonances import PeakReport, find_peaks_report, sweep_detuning
from .robustness import PiComparisonRow, compare_pi_pulse
from .sweep import PARAMETERS, SweepAxis, SweepResult, SweepSpec, run_sweep
from .time_domain import TimeDomainResult, TimeDomainSummary, run_time_domain

__all__ = [
    "PARAMETERS",
    "PeakReport",
    "PiComparisonRow",
    "SweepAxis",
    "SweepResult",
    "SweepSpec",
    "TimeDomainResult",
    "TimeDomainSummary",
    "compare_pi_pulse",
    "contour_contains",
    "contour_efficiency",
    "extract_contours",
    "find_peaks_report",
    "monotonicity_flags",
    "run_sweep",
    "run_time_domain",
    "sweep_detuning",
]
