"""Exception hierarchy; ``return_code`` is the CLI exit status for each family."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable
    from pathlib import Path

    from pydantic import ValidationError


def dashlist(items: Iterable[object], indent: int = 2) -> str:
    """Render ``items`` as an indented bullet list, one per line."""
    return "".join(f"\n{' ' * indent}- {item}" for item in items)


class QutritStirapError(Exception):
    return_code: int = 1

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class ConfigurationError(QutritStirapError):
    return_code = 2


class UnknownPresetError(ConfigurationError):
    def __init__(self, name: str, available: Iterable[str]):
        message = f"Unknown preset {name!r}. Available presets:{dashlist(available)}"
        super().__init__(message)


class UnknownAxisError(ConfigurationError):
    def __init__(self, name: str, available: Iterable[str]):
        message = (
            f"Unknown sweep parameter {name!r}. Available parameters:"
            f"{dashlist(available)}"
        )
        super().__init__(message)


class ScenarioValidationError(ConfigurationError):
    """Exception raised when pydantic validation of a scenario fails."""

    def __init__(self, e: ValidationError, file_path: Path | str):
        """
        Format Pydantic validation errors into user-friendly messages.

        :param e: ValidationError from pydantic
        :param file_path: Path (or preset name) of the scenario being validated
        """

        def format_location(loc: tuple) -> str:
            """Convert Pydantic location tuple to readable field path."""
            return ".".join(str(item) for item in loc)

        error_messages = []
        for error in e.errors():
            loc = error.get("loc", ())
            msg = error.get("msg", "validation failed")
            error_type = error.get("type", "")

            if loc:
                field_path = format_location(loc)
                if error_type == "missing":
                    description = f"missing required field '{field_path}'"
                elif error_type == "extra_forbidden":
                    description = f"unknown field '{field_path}'"
                elif "value_error" in error_type or "assertion_error" in error_type:
                    # custom validator errors carry their own wording
                    description = msg
                else:
                    description = f"field '{field_path}': {msg}"
            else:
                description = msg

            error_messages.append(description)

        if len(error_messages) == 1:
            message = error_messages[0]
        else:
            message = (
                f"Scenario {file_path} has validation errors:{dashlist(error_messages)}"
            )

        super().__init__(message)


class ScenarioParserError(ConfigurationError):
    """
    Exception raised when a scenario file cannot be parsed.

    Wraps ``ruamel.yaml`` errors so they surface as a ``ConfigurationError``.
    """

    def __init__(self, e: Exception, path: Path | str):
        message = f"Unable to parse the content at '{path}': {e}"
        super().__init__(message)


class IntegratorInstabilityError(QutritStirapError):
    """A population left [-1e-6, 1 + 1e-6]; the time step is too large."""

    return_code = 3

    def __init__(self, time: float, dt: float, phi: float | None = None):
        self.time = time
        self.dt = dt
        self.phi = phi
        where = f" (phi = {phi:.6g} rad)" if phi is not None else ""
        message = (
            f"Integration became unstable at t = {time * 1e9:.3f} ns{where}; "
            f"step dt = {dt * 1e12:.3f} ps is too large."
        )
        super().__init__(message)


class NoPeakFoundError(QutritStirapError):
    return_code = 3

    def __init__(self, axis: str):
        message = (
            f"No local maximum found along {axis!r}; the curve is monotone, "
            "check the sweep range and base detunings."
        )
        super().__init__(message)


class SingularCalibrationError(QutritStirapError, ValueError):
    return_code = 4

    def __init__(self, determinant: float, threshold: float):
        self.determinant = determinant
        message = (
            f"Tomography calibration is singular (|D| = {abs(determinant):.3g} "
            f"<= {threshold:g}); measurement pulses A and B are not "
            "sufficiently distinct."
        )
        super().__init__(message)


class DegenerateDriveError(QutritStirapError, ValueError):
    def __init__(self):
        super().__init__(
            "The dark state is undefined when both Rabi frequencies vanish."
        )


class PopulationValidationError(QutritStirapError, ValueError):
    def __init__(self, populations: object, reason: str):
        super().__init__(f"Invalid level populations {populations}: {reason}")
