"""
Counterintuitive Stokes/pump envelopes, pulse areas, and resonant pi pulses.

The STIRAP pair is

    Omega_s(t) = Omega_0 F(t) cos(pi f(t) / 2)
    Omega_p(t) = Omega_0 F(t) sin(pi f(t) / 2)

with F(t) = exp(-(t / 2 T_d)^6) and f(t) = 1 / (1 + exp(-4 t / T_d)).
Quantities that only depend on the shape are evaluated once in units of
T_d (``u = t / T_d``) and rescaled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar
from scipy.special import expit

from .models import WINDOW_HALF_WIDTH, PiShape

if TYPE_CHECKING:
    from typing import Final

    from numpy.typing import ArrayLike, NDArray

    from .models import DriveSchedule, PulseOrder

#: Adiabatic following needs an rms pulse area above 10 pi.
AREA_THRESHOLD: Final = 10 * math.pi

#: delta must exceed the peak Rabi frequency by this factor for the cross
#: terms of the full Hamiltonian to average out.
DETUNING_RATIO_THRESHOLD: Final = 3.0

Transition = Literal["01", "12"]
EnvelopeComponent = Literal["stokes", "pump", "rms"]


def shape_envelope(t: ArrayLike, td: float) -> NDArray[np.float64]:
    """Super-Gaussian F(t), even in t."""
    return np.exp(-((np.asarray(t, dtype=float) / (2 * td)) ** 6))


def mixing_fraction(t: ArrayLike, td: float) -> NDArray[np.float64]:
    """Logistic f(t), rising from 0 to 1 across t = 0."""
    return expit(4 * np.asarray(t, dtype=float) / td)


@dataclass(frozen=True)
class EnvelopeSample:
    t: float | NDArray[np.float64]
    omega_p: float | NDArray[np.float64]
    omega_s: float | NDArray[np.float64]

    @property
    def rms(self) -> float | NDArray[np.float64]:
        return np.hypot(self.omega_p, self.omega_s)

    @property
    def mixing_angle(self) -> float | NDArray[np.float64]:
        """Theta with tan(Theta) = Omega_p / Omega_s."""
        return np.arctan2(self.omega_p, self.omega_s)


def envelope(
    t: ArrayLike,
    omega0: float,
    td: float,
    order: PulseOrder = "counterintuitive",
) -> EnvelopeSample:
    """Sample the Stokes/pump pair at ``t`` (scalar or array)."""
    amplitude = omega0 * shape_envelope(t, td)
    angle = 0.5 * math.pi * mixing_fraction(t, td)
    leading = amplitude * np.cos(angle)
    trailing = amplitude * np.sin(angle)
    if order == "counterintuitive":
        omega_s, omega_p = leading, trailing
    elif order == "pump-first":
        omega_p, omega_s = leading, trailing
    else:
        raise ValueError(f"Pulse order {order!r} has no STIRAP envelope pair")
    if np.ndim(t) == 0:
        return EnvelopeSample(float(t), float(omega_p), float(omega_s))
    return EnvelopeSample(np.asarray(t, dtype=float), omega_p, omega_s)


def _unit_component(u: float, which: EnvelopeComponent) -> float:
    sample = envelope(u, 1.0, 1.0)
    if which == "stokes":
        return sample.omega_s
    if which == "pump":
        return sample.omega_p
    return float(sample.rms)


@cache
def _unit_area() -> float:
    area, _ = quad(
        _unit_component,
        -WINDOW_HALF_WIDTH,
        WINDOW_HALF_WIDTH,
        args=("rms",),
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    return area


@cache
def _unit_peak(which: EnvelopeComponent) -> tuple[float, float]:
    """Location and height of the maximum of one component for T_d = Omega_0 = 1."""
    bounds = {
        "stokes": (-WINDOW_HALF_WIDTH, 0.0),
        "pump": (0.0, WINDOW_HALF_WIDTH),
        "rms": (-1.0, 1.0),
    }[which]
    result = minimize_scalar(
        lambda u: -_unit_component(u, which),
        bounds=bounds,
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(result.x), -float(result.fun)


def pulse_area(omega0: float, td: float) -> float:
    """Integral of sqrt(Omega_p^2 + Omega_s^2) over [-3 T_d, 3 T_d] (rad)."""
    return omega0 * td * _unit_area()


def peak_rabi(omega0: float, td: float) -> float:
    """max_t sqrt(Omega_p^2 + Omega_s^2); equals Omega_0 because F(0) = 1."""
    return omega0 * _unit_peak("rms")[1]


def pulse_height(omega0: float, td: float, which: EnvelopeComponent = "stokes") -> float:
    return omega0 * _unit_peak(which)[1]


def pulse_fwhm(omega0: float, td: float, which: EnvelopeComponent = "stokes") -> float:
    """Full width at half maximum of one envelope component (s); independent of ``omega0 > 0``."""
    if omega0 <= 0:
        raise ValueError(f"a pulse with omega0 = {omega0} has no half maximum")
    center, height = _unit_peak(which)

    def excess(u: float) -> float:
        return _unit_component(u, which) - 0.5 * height

    left = brentq(excess, -WINDOW_HALF_WIDTH, center, xtol=1e-12)
    right = brentq(excess, center, WINDOW_HALF_WIDTH, xtol=1e-12)
    return (right - left) * td


@dataclass(frozen=True)
class AdiabaticityReport:
    area: float
    area_ratio: float
    detuning_ratio: float
    detuning_ratio_peak: float
    threshold: float
    area_ok: bool
    detuning_ok: bool

    @property
    def passed(self) -> bool:
        return self.area_ok and self.detuning_ok


def adiabaticity_check(
    omega0: float,
    td: float,
    delta: float,
    threshold: float = DETUNING_RATIO_THRESHOLD,
) -> AdiabaticityReport:
    """
    Evaluate both conditions for adiabatic dark-state following.

    ``detuning_ratio`` divides by the peak of the rms envelope and decides
    ``detuning_ok``; ``detuning_ratio_peak`` divides by the peak of the
    individual pulses and is reported for comparison only.
    """
    area = pulse_area(omega0, td)
    delta = abs(delta)
    rms_peak = peak_rabi(omega0, td)
    single_peak = pulse_height(omega0, td, "stokes")
    detuning_ratio = delta / rms_peak if rms_peak > 0 else math.inf
    detuning_ratio_peak = delta / single_peak if single_peak > 0 else math.inf
    return AdiabaticityReport(
        area=area,
        area_ratio=area / AREA_THRESHOLD,
        detuning_ratio=detuning_ratio,
        detuning_ratio_peak=detuning_ratio_peak,
        threshold=threshold,
        area_ok=area > AREA_THRESHOLD,
        detuning_ok=detuning_ratio > threshold,
    )


@dataclass(frozen=True)
class PiPulse:
    """Single-tone pulse resonant with one ladder transition."""

    omega: float
    width: float
    target: Transition
    start: float = 0.0
    shape: PiShape = "rectangular"

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"pi pulse width must be positive, got {self.width!r}")

    @property
    def end(self) -> float:
        return self.start + self.width

    @property
    def area(self) -> float:
        """Omega x T; the raised cosine peaks at 2 Omega to keep the same area."""
        return self.omega * self.width

    def amplitude(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        inside = (t >= self.start) & (t < self.end)
        if self.shape == "rectangular":
            return np.where(inside, self.omega, 0.0)
        phase = 2 * math.pi * (t - self.start) / self.width
        return np.where(inside, self.omega * (1 - np.cos(phase)), 0.0)

    def coupling(self, t: ArrayLike, lam: float) -> NDArray[np.float64]:
        """Field coupling g(t); the 1-2 matrix element carries an extra lambda."""
        if self.target == "01":
            return 0.5 * self.amplitude(t)
        if lam == 0:
            raise ValueError("a 1-2 pulse cannot be driven when lambda = 0")
        return 0.5 * self.amplitude(t) / lam


def pi_pulse_schedule(
    omega: float,
    width: float,
    target: Transition,
    gap: float = 0.0,
    *,
    start: float = 0.0,
    shape: PiShape = "rectangular",
) -> PiPulse:
    """Pulse on ``target`` beginning ``gap`` after ``start``."""
    return PiPulse(omega=omega, width=width, target=target, start=start + gap, shape=shape)


def pi_pulse_sequence(
    omega: float,
    width: float,
    gap: float = 0.0,
    *,
    shape: PiShape = "rectangular",
    t0: float | None = None,
) -> tuple[PiPulse, PiPulse]:
    """0->1 then 1->2 pulses; centred on t = 0 unless ``t0`` is given."""
    if t0 is None:
        t0 = -width - 0.5 * gap
    first = pi_pulse_schedule(omega, width, "01", start=t0, shape=shape)
    second = pi_pulse_schedule(omega, width, "12", gap, start=first.end, shape=shape)
    return first, second


def pi_pulse_pair(sched: DriveSchedule) -> tuple[PiPulse, PiPulse]:
    """Sequence described by a ``pi-pulse-pair`` schedule (width T_d, Rabi Omega_0)."""
    return pi_pulse_sequence(sched.omega0, sched.td, sched.pi_gap, shape=sched.pi_shape)


def rabi_transfer(area: ArrayLike) -> float | NDArray[np.float64]:
    """Resonant two-level transfer probability sin^2(area / 2)."""
    return np.sin(0.5 * np.asarray(area, dtype=float)) ** 2
