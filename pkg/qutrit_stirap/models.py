"""Domain models. Every quantity is stored in SI units (Hz, rad/s, s, 1/s)."""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from typing import TYPE_CHECKING, Annotated, Any, Literal  # noqa: TCH003

from pydantic import BaseModel, ConfigDict, Field, model_validator

if TYPE_CHECKING:
    from typing import Final

#: Angular frequency of 1 MHz (rad/s); config files quote Omega/2pi in MHz.
MHZ: Final = 2 * math.pi * 1e6

#: Seconds per nanosecond / picosecond / microsecond.
NS: Final = 1e-9
PS: Final = 1e-12
US: Final = 1e-6

#: Default simulation window is [-3 T_d, +3 T_d].
WINDOW_HALF_WIDTH: Final = 3.0

#: Default RK4 step is T_d / 2000; steps coarser than T_d / 500 are rejected
#: at the configuration boundary.
DEFAULT_STEPS_PER_TD: Final = 2000
MIN_STEPS_PER_TD: Final = 500

#: Ladder coupling ratio of the phase qutrit (sqrt 2 in the weakly
#: anharmonic limit).
DEFAULT_LAMBDA: Final = 1.45

PulseOrder = Literal["counterintuitive", "pump-first", "pi-pulse-pair"]
PiShape = Literal["rectangular", "raised-cosine"]
NonNegative = Annotated[float, Field(ge=0)]
Positive = Annotated[float, Field(gt=0)]
Probability = Annotated[float, Field(ge=0, le=1)]


class QutritParams(BaseModel):
    """Level structure and decoherence rates of the ladder qutrit."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    f10: Positive
    f21: Positive
    lam: NonNegative = DEFAULT_LAMBDA
    gamma10: NonNegative = 0.0
    gamma21: NonNegative = 0.0
    gphi10: NonNegative = 0.0
    gphi20: NonNegative = 0.0
    gphi21: NonNegative = 0.0

    @model_validator(mode="before")
    @classmethod
    def derive_dephasing(cls, data: Any) -> Any:
        """Default gphi20 = 2 gphi10 and gphi21 = gphi10 when not given."""
        if isinstance(data, dict):
            data = dict(data)
            gphi10 = data.get("gphi10") or 0.0
            if data.get("gphi20") is None:
                data["gphi20"] = 2 * float(gphi10)
            if data.get("gphi21") is None:
                data["gphi21"] = float(gphi10)
        return data

    @model_validator(mode="after")
    def check_ladder(self) -> QutritParams:
        if not self.f10 > self.f21:
            raise ValueError(
                f"f10 ({self.f10:g} Hz) must exceed f21 ({self.f21:g} Hz) "
                "for a ladder with positive anharmonicity"
            )
        return self

    @classmethod
    def from_coherence_times(
        cls,
        f10: float,
        f21: float,
        *,
        t1_10: float,
        t1_21: float,
        tphi_10: float,
        lam: float = DEFAULT_LAMBDA,
    ) -> QutritParams:
        return cls(
            f10=f10,
            f21=f21,
            lam=lam,
            gamma10=1 / t1_10,
            gamma21=1 / t1_21,
            gphi10=1 / tphi_10,
        )

    # NOTE: properties are excluded from the model_dump() output
    @property
    def omega10(self) -> float:
        return 2 * math.pi * self.f10

    @property
    def omega21(self) -> float:
        return 2 * math.pi * self.f21

    @property
    def bare_delta(self) -> float:
        """omega10 - omega21, the pump/Stokes splitting at zero detuning."""
        return self.omega10 - self.omega21

    @property
    def anharmonicity(self) -> float:
        return (self.f10 - self.f21) / self.f10


class DriveSchedule(BaseModel):
    """Pump/Stokes envelope parameters, detunings, relative phase and window."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega0: NonNegative
    td: Positive
    delta_p: float = 0.0
    delta_s: float = 0.0
    phi: float = 0.0
    #: ``None`` tracks the default window of +/- 3 T_d.
    t_start: float | None = None
    t_end: float | None = None
    order: PulseOrder = "counterintuitive"
    #: Separation of the two pulses when ``order == "pi-pulse-pair"``.
    pi_gap: NonNegative = 0.0
    pi_shape: PiShape = "rectangular"

    @model_validator(mode="after")
    def check_window(self) -> DriveSchedule:
        start, end = self.window
        if not start < 0 < end:
            raise ValueError(
                f"simulation window [{start:g}, {end:g}] s must contain t = 0"
            )
        return self

    @property
    def window(self) -> tuple[float, float]:
        start = -WINDOW_HALF_WIDTH * self.td if self.t_start is None else self.t_start
        end = WINDOW_HALF_WIDTH * self.td if self.t_end is None else self.t_end
        return start, end

    @property
    def duration(self) -> float:
        start, end = self.window
        return end - start

    def with_phase(self, phi: float) -> DriveSchedule:
        return self.model_copy(update={"phi": phi})

    def replace(self, **changes: Any) -> DriveSchedule:
        """Validated copy with ``changes`` applied."""
        return type(self).model_validate({**self.model_dump(), **changes})


class IntegratorConfig(BaseModel):
    """Fixed-step RK4 settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    #: ``None`` means T_d / 2000.
    dt: Positive | None = None
    record_every: Annotated[int, Field(ge=1)] = 10
    phi_samples: Annotated[int, Field(ge=1)] = 36
    renormalize: bool = False

    def nominal_step(self, td: float) -> float:
        return self.dt if self.dt is not None else td / DEFAULT_STEPS_PER_TD

    def step_for(self, duration: float, td: float) -> tuple[float, int]:
        """Return ``(dt, n_steps)`` tiling ``duration`` exactly."""
        nominal = self.nominal_step(td)
        n_steps = max(1, math.ceil(duration / nominal - 1e-9))
        return duration / n_steps, n_steps


class TomographyCalibration(BaseModel):
    """Per-level tunneling probabilities of measurement pulses A and B."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    pA: tuple[Probability, Probability, Probability]
    pB: tuple[Probability, Probability, Probability]
    #: Marks entries that were not measured but chosen for demonstration.
    synthetic: bool = False

    @model_validator(mode="after")
    def warn_non_monotone(self) -> TomographyCalibration:
        for label, row in (("A", self.pA), ("B", self.pB)):
            if not row[0] <= row[1] <= row[2]:
                warnings.warn(
                    f"Tunneling probabilities of pulse {label} {row} are not "
                    "monotone in the level index; check the calibration."
                )
        return self


class Scenario(BaseModel):
    """A complete, self-describing simulation setup."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    qutrit: QutritParams
    drive: DriveSchedule
    integrator: Annotated[IntegratorConfig, Field(default_factory=IntegratorConfig)]
    calibration: TomographyCalibration | None = None
    labels: Annotated[dict[str, str], Field(default_factory=dict)]

    def fingerprint(self) -> str:
        """Short, stable digest of every parameter (labels included)."""
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()[:12]

    def replace(self, **changes: Any) -> Scenario:
        return self.model_copy(update=changes)
