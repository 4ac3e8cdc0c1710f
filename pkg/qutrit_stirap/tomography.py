"""
Level populations from the tunneling probabilities of two measurement pulses.

Each pulse tunnels out of level i with probability p_i, so the measured
probability is the population-weighted sum ``p = P0 p0 + P1 p1 + P2 p2``.
Two pulses plus normalization give a 3x3 linear system solved in closed form
with cyclic cofactors.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from .exceptions import PopulationValidationError, SingularCalibrationError
from .models import TomographyCalibration

if TYPE_CHECKING:
    from typing import Final

    from numpy.typing import ArrayLike, NDArray

#: Calibrations with |D| at or below this are rejected.
SINGULAR_THRESHOLD: Final = 1e-6

#: Populations must sum to one within this tolerance for the forward model.
NORMALIZATION_ATOL: Final = 1e-9

#: (i, j, k) in cyclic order.
CYCLIC: Final = ((0, 1, 2), (1, 2, 0), (2, 0, 1))

#: Demonstration calibration; only p0A ~ 5 %, p0B ~ 0 and p1B ~ 5 % are measured
#: values, the rest is synthetic.
DEFAULT_CALIBRATION: Final = TomographyCalibration(
    pA=(0.05, 0.60, 0.90),
    pB=(0.0, 0.05, 0.70),
    synthetic=True,
)


def forward(
    populations: ArrayLike, calib: TomographyCalibration
) -> tuple[float, float]:
    """Tunneling probabilities (pA, pB) expected for populations (P0, P1, P2)."""
    populations = np.asarray(populations, dtype=float)
    if populations.shape != (3,):
        raise PopulationValidationError(populations, "expected three populations")
    if np.any(populations < 0) or np.any(populations > 1):
        raise PopulationValidationError(populations, "components must lie in [0, 1]")
    if abs(populations.sum() - 1) > NORMALIZATION_ATOL:
        raise PopulationValidationError(populations, "populations must sum to 1")
    return (
        float(np.dot(populations, calib.pA)),
        float(np.dot(populations, calib.pB)),
    )


def determinant(calib: TomographyCalibration) -> float:
    """| 1 1 1 ; p0A p1A p2A ; p0B p1B p2B | by cofactor expansion along the first row."""
    a, b = calib.pA, calib.pB
    return sum(a[j] * b[k] - a[k] * b[j] for _, j, k in CYCLIC)


def invert_batch(
    p_a: ArrayLike, p_b: ArrayLike, calib: TomographyCalibration
) -> NDArray[np.float64]:
    """
    Raw populations for arrays of measured probabilities, shape ``(..., 3)``.

    Noisy inputs may give components slightly outside [0, 1]; they are
    returned as computed (see :func:`clamp_populations`).
    """
    d = determinant(calib)
    if abs(d) <= SINGULAR_THRESHOLD:
        raise SingularCalibrationError(d, SINGULAR_THRESHOLD)
    p_a = np.asarray(p_a, dtype=float)
    p_b = np.asarray(p_b, dtype=float)
    a, b = calib.pA, calib.pB
    numerators = [
        (b[j] - b[k]) * p_a + (a[k] - a[j]) * p_b + a[j] * b[k] - a[k] * b[j]
        for _, j, k in CYCLIC
    ]
    return np.stack(numerators, axis=-1) / d


def invert(p_a: float, p_b: float, calib: TomographyCalibration) -> tuple[float, float, float]:
    populations = invert_batch(p_a, p_b, calib)
    return float(populations[0]), float(populations[1]), float(populations[2])


def clamp_populations(populations: ArrayLike) -> NDArray[np.float64]:
    """Clip to [0, 1] and renormalize to unit sum (explicit post-processing)."""
    clipped = np.clip(np.asarray(populations, dtype=float), 0.0, 1.0)
    total = clipped.sum(axis=-1, keepdims=True)
    return np.divide(clipped, total, out=np.full_like(clipped, 1 / 3), where=total > 0)
