import math

import numpy as np
import pytest

from spinshift.resonance import (
    DriveField,
    LevelSystem,
    UnitarityError,
    default_timestep,
    dipole_from_ladder,
    integrate_amplitudes,
    resonance_scan,
    transfer_probability,
)
from spinshift.shift import jastrow_family, vacuum_family

FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])


def two_level(omega0: float) -> LevelSystem:
    return LevelSystem(energies=np.array([0.0, omega0]), dipole=FLIP)


def rabi_amplitudes(v: float, t: float) -> np.ndarray:
    """Closed-form resonant solution of dC/dt = iV (sigma_x) C from (1, 0)."""
    return np.array([math.cos(v * t), 1j * math.sin(v * t)])


def test_resonant_rabi_matches_closed_form():
    omega0, v = 2.0, 0.04
    system = two_level(omega0)
    drive = DriveField(v, omega0)
    dt = default_timestep(system, [drive], rwa=True, steps_per_period=256)
    t_end = math.pi / (2 * v)
    traj = integrate_amplitudes(system, [drive], t_end, dt, rwa=True)
    endpoint = np.linalg.norm(traj.amplitudes[-1] - rabi_amplitudes(v, traj.times[-1]))
    assert endpoint <= 1e-6
    assert traj.max_unitarity_drift <= 1e-8
    # full population transfer at t = pi / (2 V)
    assert transfer_probability(traj) >= 0.999999


def test_zero_drive_and_zero_dipole_stay_constant():
    system = two_level(1.0)
    traj = integrate_amplitudes(system, [], 5.0, 0.05, rwa=True)
    np.testing.assert_allclose(traj.amplitudes[-1], [1.0, 0.0], atol=1e-15)
    dead = LevelSystem(energies=np.array([0.0, 1.0]), dipole=np.zeros((2, 2)))
    traj = integrate_amplitudes(dead, [DriveField(0.3, 1.0)], 5.0, 0.05)
    np.testing.assert_allclose(traj.amplitudes[-1], [1.0, 0.0], atol=1e-15)


def test_detuned_peak_follows_rabi_formula():
    omega0, v, delta = 1.0, 0.05, 0.15
    system = two_level(omega0)
    drive = DriveField(v, omega0 + delta)
    dt = default_timestep(system, [drive], rwa=True)
    general = math.sqrt(v**2 + (delta / 2.0) ** 2)
    traj = integrate_amplitudes(
        system, [drive], math.pi / general, dt, rwa=True
    )
    expected = v**2 / (v**2 + (delta / 2.0) ** 2)
    assert transfer_probability(traj) == pytest.approx(expected, abs=1e-5)


def test_rk4_error_falls_fourth_order():
    omega0, v = 1.0, 0.2
    system = two_level(omega0)
    drive = DriveField(v, omega0)
    t_end = math.pi / (2 * v)
    coarse = 2 * math.pi / (2 * omega0 * 20)  # validator's coarsest step
    errors = []
    for dt in (coarse, coarse / 2):
        traj = integrate_amplitudes(system, [drive], t_end, dt, rwa=True)
        errors.append(
            np.linalg.norm(traj.amplitudes[-1] - rabi_amplitudes(v, traj.times[-1]))
        )
    assert errors[0] / errors[1] >= 12.0


def test_full_equations_agree_with_rwa_for_weak_drive():
    omega0, v = 1.0, 0.01
    system = two_level(omega0)
    drive = DriveField(v, omega0)
    t_end = math.pi / (2 * v)
    dt = default_timestep(system, [drive], rwa=False, steps_per_period=64)
    full = integrate_amplitudes(system, [drive], t_end, dt, rwa=False)
    rwa = integrate_amplitudes(system, [drive], t_end, dt, rwa=True)
    assert transfer_probability(full) == pytest.approx(
        transfer_probability(rwa), abs=0.05
    )


def test_under_resolved_step_rejected():
    system = two_level(1.0)
    drive = DriveField(0.05, 1.0)
    with pytest.raises(ValueError):
        integrate_amplitudes(system, [drive], 10.0, 1.0, rwa=True)


def test_unitarity_watchdog_trips():
    # marginally resolved counter-rotating terms accumulate norm error
    system = two_level(1.0)
    drive = DriveField(0.3, 1.0)
    dt = 2 * math.pi / (2.0 * 20)
    with pytest.raises(UnitarityError):
        integrate_amplitudes(system, [drive], 400.0, dt, rwa=False)


def test_dipole_from_ladder_two_level():
    families = [vacuum_family(4), jastrow_family(4, 1)]
    dipole = dipole_from_ladder({(1, 0): 1.0}, families)
    np.testing.assert_allclose(dipole, FLIP, atol=1e-12)
    zero = dipole_from_ladder({(1, 0): 0.0}, families)
    assert np.all(zero == 0)


def test_dipole_from_ladder_three_level_tridiagonal():
    families = [jastrow_family(6, r) for r in (0, 1, 2)]
    dipole = dipole_from_ladder({(1, 0): 1.0, (2, 1): 0.5}, families)
    expected = np.array(
        [[0.0, 1.0, 0.0], [1.0, 0.0, 0.5], [0.0, 0.5, 0.0]]
    )
    np.testing.assert_allclose(dipole, expected, atol=1e-12)


def test_dipole_from_ladder_rejects_asymmetric_weights():
    families = [vacuum_family(4), jastrow_family(4, 1)]
    with pytest.raises(ValueError):
        dipole_from_ladder({(1, 0): 1.0, (0, 1): 2.0}, families)
    with pytest.raises(ValueError):
        dipole_from_ladder({(1, 1): 1.0}, families)


def test_scan_peaks_at_bohr_frequency():
    omega0, v = 2.0, 0.1
    system = two_level(omega0)
    omegas = np.linspace(0.5 * omega0, 1.5 * omega0, 21)
    scan = resonance_scan(system, v, omegas, steps_per_period=64)
    grid_step = omegas[1] - omegas[0]
    assert abs(scan.best_omega - omega0) <= grid_step
    assert scan.best_transfer >= 0.999


def test_scan_on_chain_levels_peaks_at_first_gap():
    # levels (0, -2J) from the nearest-neighbour ring at N=4: the drive
    # resonates at the magnitude of the Bohr frequency, 2J
    import spinshift.shift as shift

    system = LevelSystem(
        energies=np.array([0.0, -2.0]),
        dipole=dipole_from_ladder(
            {(1, 0): 1.0},
            [vacuum_family(4), shift.plane_wave_family(4, math.pi)],
        ),
    )
    omegas = np.linspace(1.0, 3.0, 21)
    scan = resonance_scan(system, 0.05, omegas, steps_per_period=64)
    assert abs(scan.best_omega - 2.0) <= omegas[1] - omegas[0]


def test_scan_input_validation():
    system = two_level(1.0)
    with pytest.raises(ValueError):
        resonance_scan(system, 0.1, np.array([]))
    with pytest.raises(ValueError):
        resonance_scan(system, 0.1, np.array([-1.0, 1.0]))
    dead = LevelSystem(energies=np.array([0.0, 1.0]), dipole=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        resonance_scan(dead, 0.1, np.array([1.0]))


def test_level_system_validation():
    with pytest.raises(ValueError):
        LevelSystem(energies=np.array([0.0, 1.0]),
                    dipole=np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(ValueError):
        DriveField(1.0, -2.0)


def test_initial_state_options():
    system = two_level(1.0)
    drive = DriveField(0.05, 1.0)
    dt = default_timestep(system, [drive])
    traj = integrate_amplitudes(system, [drive], 1.0, dt, initial=1)
    assert abs(traj.amplitudes[0, 1]) == 1.0
    with pytest.raises(ValueError):
        integrate_amplitudes(system, [drive], 1.0, dt, c0=np.array([1.0, 1.0]))
