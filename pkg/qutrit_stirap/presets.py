"""
Compiled-in scenarios quoting the published device and drive parameters.

Measured device (phase qutrit): f10 = 5.555 GHz, f21 = 5.393 GHz (2.9 %
anharmonicity), relaxation rates Gamma10 = 2.83e6 /s, Gamma21 = 5.10e6 /s,
dephasing gphi10 = 8.06e6 /s with gphi20 = 2 gphi10 and gphi21 = gphi10.

Improved device: T1(1->0) = 35.3 us, T1(2->1) = 19.6 us, Tphi = 12.4 us and
8 % anharmonicity at the same f10, i.e. f21 = 5.1106 GHz.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from .config import DriveSection, QutritSection, ScenarioFile, SweepSection
from .exceptions import UnknownPresetError
from .experiments.sweep import SweepAxis
from .models import US
from .tomography import DEFAULT_CALIBRATION

if TYPE_CHECKING:
    from typing import Final

MEASURED_QUTRIT: Final = QutritSection(
    f10_mhz=5555.0,
    f21_mhz=5393.0,
    lam=1.45,
    gamma10=2.83e6,
    gamma21=5.10e6,
    gphi10=8.06e6,
)

IMPROVED_QUTRIT: Final = QutritSection(
    f10_mhz=5555.0,
    f21_mhz=5555.0 * (1 - 0.08),
    lam=1.45,
    gamma10=1 / (35.3 * US),
    gamma21=1 / (19.6 * US),
    gphi10=1 / (12.4 * US),
)

#: Resonant STIRAP on the measured device: 42.8 MHz peak Rabi, 100 ns pulses.
PAPER_FIG2: Final = ScenarioFile(
    qutrit=MEASURED_QUTRIT,
    drive=DriveSection(omega0_mhz=42.8, td_ns=100.0),
    calibration=DEFAULT_CALIBRATION,
    labels={"preset": "paper-fig2", "device": "measured"},
)

#: Pump-detuning spectroscopy at Delta_s = 20 MHz.
PAPER_FIG3: Final = ScenarioFile(
    qutrit=MEASURED_QUTRIT,
    drive=DriveSection(omega0_mhz=42.8, td_ns=100.0, delta_s_mhz=20.0),
    calibration=DEFAULT_CALIBRATION,
    sweep=SweepSection(
        axis1=SweepAxis(name="delta_p", start=-60.0, stop=120.0, step=1.0),
        metric="max_P2",
    ),
    labels={"preset": "paper-fig3", "device": "measured"},
)

#: Efficiency map over Omega_0 and T_d on the improved device.
PAPER_FIG4A: Final = ScenarioFile(
    qutrit=IMPROVED_QUTRIT,
    drive=DriveSection(omega0_mhz=100.0, td_ns=50.0),
    calibration=DEFAULT_CALIBRATION,
    sweep=SweepSection(
        axis1=SweepAxis(name="omega0", start=20.0, stop=400.0, step=10.0),
        axis2=SweepAxis(name="td", start=10.0, stop=200.0, step=5.0),
        metric="final_P2",
    ),
    labels={"preset": "paper-fig4a", "device": "improved"},
)

#: Near-complete transfer on the improved device at 100 MHz, 50 ns.
PAPER_FIG4B: Final = ScenarioFile(
    qutrit=IMPROVED_QUTRIT,
    drive=DriveSection(omega0_mhz=100.0, td_ns=50.0),
    calibration=DEFAULT_CALIBRATION,
    labels={"preset": "paper-fig4b", "device": "improved"},
)

#: Canonical preset names.
PRESETS: Final = {
    "paper-fig2": PAPER_FIG2,
    "paper-fig3": PAPER_FIG3,
    "paper-fig4a": PAPER_FIG4A,
    "paper-fig4b": PAPER_FIG4B,
}

#: Alternative names mapped to their canonical preset.
ALIASES: Final = {"paper-fig4": "paper-fig4b"}


def resolve_preset(name: str) -> ScenarioFile:
    canonical = ALIASES.get(name, name)
    try:
        return PRESETS[canonical]
    except KeyError:
        raise UnknownPresetError(name, [*PRESETS, *ALIASES]) from None
