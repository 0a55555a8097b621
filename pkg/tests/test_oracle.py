"""Unit tests for the brute-force oracles."""

import numpy as np
import pytest

from berrydec.bath import BathSpec
from berrydec.coefficients import TimeGrid, compute_coefficients
from berrydec.frames import DriveParams, initial_state, to_tilted_frame
from berrydec.oracle import (FewModeBath, discretize_ohmic, few_mode_exact,
                             rotating_hamiltonian, tcl2_nonsecular,
                             thermal_bath_state, trace_distance)


def test_trace_distance_basics():
    a = np.diag([1.0, 0.0]).astype(complex)
    b = np.diag([0.0, 1.0]).astype(complex)
    assert trace_distance(a, a) == 0.0
    assert trace_distance(a, b) == pytest.approx(1.0, rel=1e-14)
    assert trace_distance(a, np.diag([0.75, 0.25])) == pytest.approx(0.25, rel=1e-12)


def test_nonsecular_trace_and_hermiticity():
    drive = DriveParams(20.0, np.pi / 4, 1.0)
    bath = BathSpec.from_power(0.5, 2.0)
    grid = TimeGrid.for_params(drive.field, bath.cutoff, 2.0)
    rho0 = to_tilted_frame(initial_state(drive), drive, 0.0)
    traj = tcl2_nonsecular(drive, bath, rho0, grid)
    assert traj.shape == (grid.samples, 2, 2)
    tr = np.trace(traj, axis1=1, axis2=2)
    assert np.max(np.abs(tr - 1.0)) < 1e-8
    assert np.max(np.abs(traj - traj.conj().transpose(0, 2, 1))) < 1e-10


def test_nonsecular_pure_dephasing_limit():
    # theta = 0: alpha = 0, the coupling commutes with the Hamiltonian and
    # the non-secular coherence must follow exp(-l) from the secular solver
    drive = DriveParams(20.0, 0.0, 1.0)
    bath = BathSpec.from_power(0.5, 2.0)
    grid = TimeGrid.for_params(drive.field, bath.cutoff, drive.period)
    rho0 = to_tilted_frame(initial_state(drive), drive, 0.0)
    traj = tcl2_nonsecular(drive, bath, rho0, grid)
    coeffs = compute_coefficients(drive, bath, grid)
    coh = np.abs(traj[:, 0, 1])
    assert np.max(np.abs(coh - np.abs(rho0[0, 1]) * np.exp(-coeffs.l))) < 1e-7


def test_few_mode_bath_validation():
    with pytest.raises(ValueError):
        FewModeBath((1.0, 2.0), (0.1,), 2)
    with pytest.raises(ValueError):
        FewModeBath((0.0,), (0.1,), 2)
    with pytest.raises(ValueError):
        FewModeBath((1.0,), (0.1,), 0)
    with pytest.raises(ValueError):
        FewModeBath(tuple(range(1, 13)), (0.1,) * 12, 2)  # dim 2*3^12 too big
    fm = FewModeBath((1.0, 2.0), (0.1, 0.2), 2)
    assert fm.modes == 2 and fm.dimension == 18
    assert fm.total_weight == pytest.approx(0.05, rel=1e-12)


def test_discretize_ohmic_weights_and_centroids():
    bath = BathSpec.from_power(0.5, 2.0)
    fm = discretize_ohmic(bath, modes=4, n_max=2)
    assert fm.modes == 4
    # captured weight approximates the full integrated spectrum
    assert abs(fm.total_weight - bath.power) < 0.05 * bath.power
    # equal-weight bins, increasing centroid frequencies inside [0, 5*cutoff]
    g2 = np.array(fm.couplings) ** 2
    assert np.allclose(g2, g2[0], rtol=1e-9)
    freqs = np.array(fm.frequencies)
    assert np.all(np.diff(freqs) > 0)
    assert freqs[0] > 0 and freqs[-1] < 5.0 * bath.cutoff


def test_rotating_hamiltonian_hermitian():
    drive = DriveParams(20.0, np.pi / 4, 1.0)
    fm = discretize_ohmic(BathSpec.from_power(0.05, 2.0), modes=3, n_max=2)
    h = rotating_hamiltonian(drive, fm)
    assert h.shape == (fm.dimension, fm.dimension)
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


def test_thermal_bath_state():
    fm = FewModeBath((1.0,), (0.1,), 2, temperature=0.0)
    rho = thermal_bath_state(fm)
    assert rho[0, 0] == 1.0 and np.trace(rho) == pytest.approx(1.0)
    warm = FewModeBath((1.0,), (0.1,), 2, temperature=1.0)
    rho_w = thermal_bath_state(warm)
    assert np.trace(rho_w) == pytest.approx(1.0, rel=1e-12)
    assert rho_w[1, 1] / rho_w[0, 0] == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_few_mode_vacuum_rabi():
    """Single resonant mode at theta = pi/2 is the Jaynes-Cummings limit:
    the upper-state population first vanishes near t = pi/(2 g)."""
    g = 0.05
    drive = DriveParams(1.0, np.pi / 2, 1e-9)
    fm = FewModeBath((1.0,), (g,), n_max=2)
    e = np.array([1.0, 1.0]) / np.sqrt(2.0)  # upper eigenstate at theta = pi/2
    rho0 = np.outer(e, e)
    times = np.linspace(28.0, 35.0, 141)
    traj = few_mode_exact(drive, fm, rho0, times)
    p_e = np.array([float((e.conj() @ r @ e).real) for r in traj])
    i_min = int(np.argmin(p_e))
    # counter-rotating terms leave a residual ~ (g / 2 omega)^2
    assert p_e[i_min] < 5e-3
    assert times[i_min] == pytest.approx(np.pi / (2.0 * g), rel=0.02)


def test_few_mode_truncation_converged():
    drive = DriveParams(20.0, np.pi / 4, 1.0)
    bath = BathSpec.from_power(0.05, 2.0)
    times = np.linspace(0.0, drive.period, 9)
    rho0 = initial_state(drive)
    lo = few_mode_exact(drive, discretize_ohmic(bath, 4, n_max=2), rho0, times)
    hi = few_mode_exact(drive, discretize_ohmic(bath, 4, n_max=3), rho0, times)
    assert np.max(np.abs(lo - hi)) < 1e-4
