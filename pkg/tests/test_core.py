from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
import pytest

from qutrit_stirap.core import (
    basis_state,
    build_hamiltonian,
    build_pi_hamiltonian,
    build_raman_hamiltonian,
    dark_state,
    dark_state_population,
    dissipator,
    populations,
    trace_distance,
    two_photon_delta,
    validate_density_matrix,
)
from qutrit_stirap.exceptions import DegenerateDriveError
from qutrit_stirap.models import MHZ, NS
from qutrit_stirap.pulses import envelope, pi_pulse_sequence

if TYPE_CHECKING:
    from qutrit_stirap.models import DriveSchedule, QutritParams


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_basis_state() -> None:
    rho = basis_state(2)
    assert populations(rho).tolist() == [0.0, 0.0, 1.0]
    validate_density_matrix(rho)


@pytest.mark.parametrize(
    "rho,match",
    [
        pytest.param(np.diag([0.5, 0.5, 0.1]), "trace", id="trace"),
        pytest.param(np.array([[1, 0.1, 0], [0, 0, 0], [0, 0, 0]]), "Hermitian", id="hermitian"),
        pytest.param(np.diag([1.2, -0.2, 0.0]), "negative eigenvalue", id="positivity"),
        pytest.param(np.eye(2) / 2, "expected", id="shape"),
    ],
)
def test_validate_density_matrix(rho: np.ndarray, match: str) -> None:
    with pytest.raises(ValueError, match=match):
        validate_density_matrix(rho)


def test_trace_distance() -> None:
    assert trace_distance(basis_state(0), basis_state(1)) == pytest.approx(1.0)
    assert trace_distance(basis_state(0), basis_state(0)) == 0.0
    mixed = np.eye(3) / 3
    assert trace_distance(basis_state(0), mixed) == pytest.approx(2 / 3)


def test_two_photon_delta(measured_qutrit: QutritParams, reference_drive: DriveSchedule) -> None:
    assert two_photon_delta(measured_qutrit, reference_drive) == pytest.approx(162 * MHZ)
    shifted = reference_drive.replace(delta_p=-20 * MHZ, delta_s=20 * MHZ)
    assert two_photon_delta(measured_qutrit, shifted) == pytest.approx(202 * MHZ)


def test_hamiltonian_is_hermitian_and_broadcasts(
    measured_qutrit: QutritParams, reference_drive: DriveSchedule
) -> None:
    times = np.linspace(-300, 300, 7)[:, None] * NS
    phases = np.array([0.0, 1.0, 2.0, 3.0])[None, :]
    hamiltonian = build_hamiltonian(times, measured_qutrit, reference_drive, phases)
    assert hamiltonian.shape == (7, 4, 3, 3)
    np.testing.assert_allclose(hamiltonian, np.conj(np.swapaxes(hamiltonian, -1, -2)))
    # no direct 0-2 coupling in a ladder
    assert np.all(hamiltonian[..., 0, 2] == 0)


def test_hamiltonian_is_periodic_in_phase(
    measured_qutrit: QutritParams, reference_drive: DriveSchedule
) -> None:
    t = 12.3 * NS
    np.testing.assert_allclose(
        build_hamiltonian(t, measured_qutrit, reference_drive, 0.4),
        build_hamiltonian(t, measured_qutrit, reference_drive, 0.4 + 2 * math.pi),
        atol=1e-6,
    )


@pytest.mark.parametrize("t_ns", [-150.0, -20.0, 0.0, 35.0])
def test_hamiltonian_without_cross_terms_is_raman(
    measured_qutrit: QutritParams, reference_drive: DriveSchedule, t_ns: float
) -> None:
    drive = reference_drive.replace(delta_p=-20 * MHZ, delta_s=20 * MHZ)
    sample = envelope(t_ns * NS, drive.omega0, drive.td)
    expected = build_raman_hamiltonian(sample.omega_p, sample.omega_s, drive.delta_p, drive.delta_s)
    actual = build_hamiltonian(t_ns * NS, measured_qutrit, drive, cross_terms=False)
    np.testing.assert_allclose(actual, expected, rtol=1e-12, atol=1e-6)


def test_cross_terms_rotate_at_delta(
    measured_qutrit: QutritParams, reference_drive: DriveSchedule
) -> None:
    t = 10 * NS
    sample = envelope(t, reference_drive.omega0, reference_drive.td)
    full = build_hamiltonian(t, measured_qutrit, reference_drive, 0.0)
    lam = measured_qutrit.lam
    delta = two_photon_delta(measured_qutrit, reference_drive)
    cross01 = full[0, 1] - 0.5 * sample.omega_p
    assert cross01 == pytest.approx(0.5 * sample.omega_s / lam * np.exp(-1j * delta * t))


def test_pi_hamiltonian_resonant_element(measured_qutrit: QutritParams) -> None:
    omega = 2 * math.pi * 100e6
    first, second = pi_pulse_sequence(omega, 5 * NS)
    inside_first = 0.5 * (first.start + first.end)
    hamiltonian = build_pi_hamiltonian(inside_first, measured_qutrit, (first, second))
    assert hamiltonian[0, 1] == pytest.approx(0.5 * omega)
    # the 0-1 tone also drives 1-2, detuned by omega10 - omega21
    assert abs(hamiltonian[1, 2]) == pytest.approx(measured_qutrit.lam * 0.5 * omega)
    inside_second = 0.5 * (second.start + second.end)
    hamiltonian = build_pi_hamiltonian(inside_second, measured_qutrit, (first, second))
    assert hamiltonian[1, 2] == pytest.approx(0.5 * omega)
    outside = build_pi_hamiltonian(second.end + 1 * NS, measured_qutrit, (first, second))
    assert np.all(outside == 0)


def test_pi_pulse_pair_order_dispatch(
    measured_qutrit: QutritParams, reference_drive: DriveSchedule
) -> None:
    drive = reference_drive.replace(order="pi-pulse-pair", omega0=2 * math.pi * 100e6, td=5 * NS)
    hamiltonian = build_hamiltonian(np.array([-2.5 * NS, 2.5 * NS]), measured_qutrit, drive)
    assert hamiltonian.shape == (2, 3, 3)
    assert hamiltonian[0, 0, 1] == pytest.approx(0.5 * drive.omega0)


def test_dissipator_preserves_trace_and_hermiticity(measured_qutrit: QutritParams) -> None:
    rng = np.random.default_rng(7)
    rho = np.stack([random_density_matrix(rng) for _ in range(20)])
    out = dissipator(rho, measured_qutrit)
    np.testing.assert_allclose(np.trace(out, axis1=-2, axis2=-1), 0, atol=1e-3)
    np.testing.assert_allclose(out, np.conj(np.swapaxes(out, -1, -2)))


def test_dissipator_relaxation_cascade(measured_qutrit: QutritParams) -> None:
    out = dissipator(basis_state(2), measured_qutrit)
    assert np.real(np.diag(out)).tolist() == pytest.approx(
        [0.0, measured_qutrit.gamma21, -measured_qutrit.gamma21]
    )
    coherence = np.zeros((3, 3), dtype=complex)
    coherence[0, 1] = coherence[1, 0] = 1.0
    rate = 0.5 * (measured_qutrit.gamma10 + measured_qutrit.gphi10)
    assert dissipator(coherence, measured_qutrit)[0, 1] == pytest.approx(-rate)


def test_dark_state_is_null_eigenvector() -> None:
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        omega_p, omega_s = rng.uniform(0, 2 * math.pi * 200e6, size=2)
        delta_p = rng.uniform(-2 * math.pi * 50e6, 2 * math.pi * 50e6)
        info = dark_state(omega_p, omega_s, delta_p)
        scale = max(omega_p, omega_s)
        assert info.residual <= 1e-9 * scale
        assert np.min(np.abs(info.eigenvalues)) <= 1e-9 * scale
        assert info.amplitudes[1] == 0
        assert np.linalg.norm(info.amplitudes) == pytest.approx(1.0)


def test_dark_state_limits() -> None:
    assert dark_state(0.0, 1.0).theta == 0.0
    assert dark_state(1.0, 0.0).theta == pytest.approx(math.pi / 2)
    with pytest.raises(DegenerateDriveError):
        dark_state(0.0, 0.0)


def test_dark_state_population() -> None:
    assert dark_state_population(basis_state(0), 0.0, 1.0) == pytest.approx(1.0)
    assert dark_state_population(basis_state(2), 1.0, 0.0) == pytest.approx(1.0)
    assert dark_state_population(basis_state(1), 1.0, 1.0) == pytest.approx(0.0)
    many = dark_state_population(np.stack([basis_state(0)] * 3), np.zeros(3), np.ones(3))
    assert many.shape == (3,)
