"""
Command-line interface: ``qutrit-stirap <subcommand> [options]``.

Exit codes: 0 success, 1 failed check, 2 configuration error, 3 numerical
error, 4 singular tomography calibration.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from . import APP_NAME, APP_VERSION
from .config import (
    apply_overrides,
    read_scenario_file,
    scenario_from_file,
    sweep_spec_from_file,
)
from .core import basis_state, two_photon_delta
from .dynamics import convergence_check
from .exceptions import ConfigurationError, QutritStirapError
from .experiments import (
    compare_pi_pulse,
    contour_contains,
    contour_efficiency,
    run_sweep,
    run_time_domain,
    sweep_detuning,
)
from .export import (
    artifact_path,
    read_tomography_csv,
    write_comparison_csv,
    write_contours_csv,
    write_envelope_csv,
    write_sidecar,
    write_sweep_csv,
    write_tomography_csv,
    write_trajectory_csv,
)
from .models import MHZ, NS
from .presets import ALIASES, PRESETS, resolve_preset
from .pulses import (
    AREA_THRESHOLD,
    EnvelopeSample,
    adiabaticity_check,
    envelope,
    pi_pulse_pair,
    pulse_area,
    pulse_fwhm,
    pulse_height,
)
from .tomography import DEFAULT_CALIBRATION, clamp_populations, invert_batch

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence
    from typing import Final

    from .config import ScenarioFile

log = logging.getLogger(__name__)

#: Sweep step multiplier applied by ``--coarse``.
COARSE_FACTOR: Final = 4

#: Scenario flags and the config keys they override.
OVERRIDES: Final = {
    "omega0_mhz": "drive.omega0_mhz",
    "td_ns": "drive.td_ns",
    "delta_p_mhz": "drive.delta_p_mhz",
    "delta_s_mhz": "drive.delta_s_mhz",
    "order": "drive.order",
    "phi_samples": "integrator.phi_samples",
    "dt_ps": "integrator.dt_ps",
}


@dataclass(frozen=True)
class Subcommand:
    name: str
    description: str
    handler: Callable[[argparse.Namespace], int]
    default_preset: str = "paper-fig2"
    configure: Callable[[argparse.ArgumentParser], None] | None = None


def load_scenario_file(args: argparse.Namespace) -> ScenarioFile:
    """Preset or config file with command-line overrides applied."""
    if args.config is not None:
        file, source = read_scenario_file(args.config), args.config
    else:
        file, source = resolve_preset(args.preset), args.preset
    overrides = {key: getattr(args, flag) for flag, key in OVERRIDES.items()}
    overrides.update(getattr(args, "extra_overrides", {}))
    if any(value is not None for value in overrides.values()):
        file = apply_overrides(file, overrides, source)
    return file


def _report(line: str) -> None:
    print(line)


def execute_evolve(args: argparse.Namespace) -> int:
    file = load_scenario_file(args)
    scenario = scenario_from_file(file)
    fingerprint = scenario.fingerprint()
    result = run_time_domain(scenario)
    summary = result.summary

    write_trajectory_csv(
        artifact_path(args.out_dir, "trajectory", fingerprint, ".csv"),
        result.trajectory,
        full_state=args.full_state,
    )
    write_sidecar(
        artifact_path(args.out_dir, "evolve", fingerprint, ".json"),
        {
            "fingerprint": fingerprint,
            "version": APP_VERSION,
            "created": _timestamp(),
            "scenario": file,
            "summary": summary,
        },
    )
    _report(f"max_P2 = {summary.max_P2:.4f} at t = {summary.t_at_max / NS:.2f} ns")
    _report(f"max_P1 (t > -T_d/2) = {summary.max_P1_after:.4f}")
    _report(
        f"final P0 = {summary.final_P0:.4f}, P1 = {summary.final_P1:.4f}, "
        f"P2 = {summary.final_P2:.4f}"
    )
    return 0


def execute_sweep(args: argparse.Namespace) -> int:
    file = load_scenario_file(args)
    spec = sweep_spec_from_file(file, args.config or args.preset)
    stem = "sweep"
    if args.coarse:
        spec = spec.coarsen(COARSE_FACTOR)
        stem = "sweep-coarse"
    fingerprint = spec.base.fingerprint()
    names = tuple(axis.name for axis in spec.axes)
    sidecar = {
        "fingerprint": fingerprint,
        "version": APP_VERSION,
        "scenario": file,
        "axes": spec.axes,
        "coarse": args.coarse,
    }

    if names == ("delta_p",):
        result, peaks = sweep_detuning(spec, workers=args.workers, progress=args.progress)
        sidecar["peaks"] = peaks
        _report(
            f"left peak {peaks.left.value:.4f} at delta_p = {peaks.left.position:.2f} MHz "
            f"(FWHM {peaks.left.fwhm:.2f} MHz)"
        )
        if peaks.right is not None:
            _report(
                f"right peak {peaks.right.value:.4f} at delta_p = "
                f"{peaks.right.position:.2f} MHz (FWHM {peaks.right.fwhm:.2f} MHz)"
            )
    elif names == ("omega0", "td"):
        result, contours = contour_efficiency(
            spec, workers=args.workers, progress=args.progress
        )
        write_contours_csv(
            artifact_path(args.out_dir, f"{stem}-contours", fingerprint, ".csv"),
            result,
            contours,
        )
        point = (file.drive.omega0_mhz, file.drive.td_ns)
        for level, polylines in contours.items():
            inside = contour_contains(polylines, point)
            sidecar.setdefault("base_point_inside", {})[str(level)] = inside
            _report(
                f"({point[0]:g} MHz, {point[1]:g} ns) "
                f"{'inside' if inside else 'outside'} the {level:g} contour"
            )
    else:
        result = run_sweep(spec, workers=args.workers, progress=args.progress)

    sidecar.update(result.meta)
    write_sweep_csv(artifact_path(args.out_dir, stem, fingerprint, ".csv"), result)
    write_sidecar(artifact_path(args.out_dir, stem, fingerprint, ".json"), sidecar)
    _report(f"{result.values.size} point(s), max {result.metric} = {np.max(result.values):.4f}")
    return 0


def execute_tomography(args: argparse.Namespace) -> int:
    args.extra_overrides = {"calibration.pA": args.pa, "calibration.pB": args.pb}
    if args.pa is not None and args.pb is not None:
        args.extra_overrides["calibration.synthetic"] = False
    file = load_scenario_file(args)
    calibration = file.calibration
    if calibration is None:
        log.warning("no calibration configured; using the synthetic demonstration values")
        calibration = DEFAULT_CALIBRATION
    elif calibration.synthetic:
        log.warning("calibration is marked synthetic; populations are illustrative only")
    fingerprint = scenario_from_file(file).fingerprint()

    for path in args.inputs:
        p_a, p_b = read_tomography_csv(path)
        raw = invert_batch(p_a, p_b, calibration)
        clamped = clamp_populations(raw)
        write_tomography_csv(
            artifact_path(args.out_dir, f"tomography-{Path(path).stem}", fingerprint, ".csv"),
            p_a,
            p_b,
            raw,
            clamped,
        )
        _report(f"{path}: {len(raw)} row(s) inverted")
    return 0


def execute_check(args: argparse.Namespace) -> int:
    file = load_scenario_file(args)
    scenario = scenario_from_file(file)
    params, drive = scenario.qutrit, scenario.drive
    report = adiabaticity_check(drive.omega0, drive.td, two_photon_delta(params, drive))
    convergence = convergence_check(basis_state(0), params, drive, scenario.integrator)

    def verdict(ok: bool) -> str:
        return "PASS" if ok else "FAIL"

    _report(
        f"pulse area: {report.area / math.pi:.2f} pi "
        f"(threshold {AREA_THRESHOLD / math.pi:g} pi) {verdict(report.area_ok)}"
    )
    _report(
        f"detuning ratio: delta / max Omega = {report.detuning_ratio:.3f} "
        f"(single pulse {report.detuning_ratio_peak:.3f}, threshold {report.threshold:g}) "
        f"{verdict(report.detuning_ok)}"
    )
    _report(
        f"step halving: max trace distance {convergence.dt_halved_distance:.3g} "
        f"at dt = {convergence.dt / 1e-12:.3g} ps "
        f"(tolerance {convergence.tolerance:g}) {verdict(convergence.ok)}"
    )
    passed = report.passed and convergence.ok
    _report(f"overall: {verdict(passed)}")
    return 0 if passed else 1


def execute_pulses(args: argparse.Namespace) -> int:
    file = load_scenario_file(args)
    scenario = scenario_from_file(file)
    drive = scenario.drive
    start, end = drive.window
    times = np.linspace(start, end, args.samples)
    if drive.order == "pi-pulse-pair":
        first, second = pi_pulse_pair(drive)
        sample = EnvelopeSample(times, first.amplitude(times), second.amplitude(times))
    else:
        sample = envelope(times, drive.omega0, drive.td, drive.order)
        _report(f"pulse area: {pulse_area(drive.omega0, drive.td) / math.pi:.3f} pi")
        if drive.omega0 > 0:
            _report(
                f"single-pulse height: {pulse_height(drive.omega0, drive.td) / MHZ:.3f} MHz, "
                f"FWHM {pulse_fwhm(drive.omega0, drive.td) / NS:.2f} ns"
            )
    write_envelope_csv(
        artifact_path(args.out_dir, "envelope", scenario.fingerprint(), ".csv"), sample
    )
    return 0


def execute_robustness(args: argparse.Namespace) -> int:
    file = load_scenario_file(args)
    scenario = scenario_from_file(file)
    omega = scenario.drive.omega0 if args.pi_omega_mhz is None else args.pi_omega_mhz * MHZ
    if omega <= 0:
        raise ConfigurationError("The pi-pulse Rabi frequency must be positive")
    rows = compare_pi_pulse(
        omega,
        None,
        scenario,
        omega0_errors=args.errors,
        gap=args.pi_gap_ns * NS,
        workers=args.workers,
        progress=args.progress,
    )
    write_comparison_csv(
        artifact_path(args.out_dir, "robustness", scenario.fingerprint(), ".csv"), rows
    )
    for row in rows:
        _report(
            f"error {row.error:+.2f}: two-level {row.efficiency_two_level:.4f}, "
            f"pi sequence {row.efficiency_pi_sequence:.4f}, STIRAP {row.efficiency_stirap:.4f}"
        )
    return 0


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _configure_sweep(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--coarse",
        action="store_true",
        help=f"Multiply every sweep step by {COARSE_FACTOR}.",
    )


def _configure_tomography(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("inputs", nargs="+", help="CSV files with 'pA' and 'pB' columns.")
    parser.add_argument("--pa", nargs=3, type=float, metavar="P", help="p0A p1A p2A.")
    parser.add_argument("--pb", nargs=3, type=float, metavar="P", help="p0B p1B p2B.")


def _configure_pulses(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, default=601, help="Number of time samples.")


def _configure_robustness(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--pi-omega-mhz",
        type=float,
        help="Rabi frequency of the pi pulses (default: the scenario's Omega_0).",
    )
    parser.add_argument("--pi-gap-ns", type=float, default=0.0)
    parser.add_argument(
        "--errors",
        nargs="+",
        type=float,
        default=[-0.2, -0.1, 0.0, 0.1, 0.2],
        help="Fractional pulse-area / Omega_0 errors.",
    )


def subcommands() -> Iterable[Subcommand]:
    yield Subcommand(
        name="evolve",
        description="Phase-averaged time-domain STIRAP run",
        handler=execute_evolve,
    )
    yield Subcommand(
        name="sweep",
        description="Detuning resonances, efficiency maps or generic parameter sweeps",
        handler=execute_sweep,
        default_preset="paper-fig3",
        configure=_configure_sweep,
    )
    yield Subcommand(
        name="tomography",
        description="Populations from measured tunneling probabilities",
        handler=execute_tomography,
        configure=_configure_tomography,
    )
    yield Subcommand(
        name="check",
        description="Adiabaticity conditions and step-halving convergence",
        handler=execute_check,
    )
    yield Subcommand(
        name="pulses",
        description="Dump the Stokes/pump envelopes",
        handler=execute_pulses,
        configure=_configure_pulses,
    )
    yield Subcommand(
        name="robustness",
        description="Pi-pulse sequence versus STIRAP under amplitude errors",
        handler=execute_robustness,
        default_preset="paper-fig4b",
        configure=_configure_robustness,
    )


def _common_arguments() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--preset",
        help=f"Built-in scenario: {', '.join([*PRESETS, *ALIASES])}.",
    )
    source.add_argument("--config", type=Path, help="Scenario JSON file.")
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Worker processes for sweeps (0 uses every core).",
    )
    parser.add_argument("--progress", action="store_true", help="Show progress bars.")
    parser.add_argument("--full-state", action="store_true", help="Write coherences too.")
    parser.add_argument("--phi-samples", type=int)
    parser.add_argument("--dt-ps", type=float)
    parser.add_argument("--omega0-mhz", type=float)
    parser.add_argument("--td-ns", type=float)
    parser.add_argument("--delta-p-mhz", type=float)
    parser.add_argument("--delta-s-mhz", type=float)
    parser.add_argument(
        "--order", choices=("counterintuitive", "pump-first", "pi-pulse-pair")
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="STIRAP population transfer in ladder-type superconducting qutrits.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_arguments()
    for command in subcommands():
        sub = commands.add_parser(
            command.name,
            parents=[common],
            help=command.description,
            description=command.description,
        )
        if command.configure is not None:
            command.configure(sub)
        sub.set_defaults(handler=command.handler, default_preset=command.default_preset)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.preset is None and args.config is None:
        args.preset = args.default_preset
    if args.workers == 0:
        args.workers = None

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__package__).setLevel(level)
    logging.captureWarnings(True)

    try:
        return args.handler(args)
    except QutritStirapError as e:
        log.debug("command failed", exc_info=True)
        print(f"{APP_NAME}: error: {e.message}", file=sys.stderr)
        return e.return_code
