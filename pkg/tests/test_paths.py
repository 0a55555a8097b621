"""Unit tests for field loops and the geometric phase."""

import numpy as np
import pytest

from berrydec.paths import (InvalidPathError, PathSpec, PoleCrossingError,
                            TiltedCircle, berry_phase, reversed_path,
                            tilted_circle_path, uniform_circle)


def test_uniform_circle_berry_phase():
    for theta in (0.3, np.pi / 4, 1.2):
        path = uniform_circle(theta, 2.0)
        path.check_closed()
        assert berry_phase(path) == pytest.approx(np.pi * (1.0 - np.cos(theta)), rel=1e-10)


def test_reversed_path_flips_phase():
    path = uniform_circle(0.8, 2.0)
    rev = reversed_path(path)
    assert berry_phase(rev) == pytest.approx(-berry_phase(path), rel=1e-10)
    assert rev.phi_dot(0.3) == pytest.approx(-path.phi_dot(path.period - 0.3), rel=1e-12)


def test_open_path_rejected():
    bad = PathSpec(theta=lambda t: 0.5 + 0.1 * np.asarray(t),
                   phi=lambda t: 2.0 * np.asarray(t),
                   phi_dot=lambda t: 2.0 * np.ones_like(np.asarray(t, dtype=float)),
                   period=np.pi)
    with pytest.raises(InvalidPathError):
        bad.check_closed()
    with pytest.raises(InvalidPathError):
        PathSpec(theta=lambda t: 0.5, phi=lambda t: t, phi_dot=lambda t: 1.0,
                 period=-1.0)


def test_tilted_circle_validation():
    with pytest.raises(ValueError):
        TiltedCircle(0.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        TiltedCircle(0.5, -0.1, 1.0)
    with pytest.raises(PoleCrossingError):
        tilted_circle_path(TiltedCircle(0.5, 0.5, 1.0))
    with pytest.raises(PoleCrossingError):
        tilted_circle_path(TiltedCircle(1.0, np.pi - 1.0, 1.0))


def test_tilted_circle_gamma_zero_matches_uniform():
    tc = tilted_circle_path(TiltedCircle(np.pi / 4, 0.0, 2.0))
    ts = np.linspace(0.0, tc.period, 31)
    assert np.allclose(tc.theta(ts), np.pi / 4, atol=1e-12)
    assert np.allclose(tc.phi_dot(ts), 2.0, atol=1e-12)


def test_tilted_circle_phi_dot_consistent():
    tc = tilted_circle_path(TiltedCircle(np.pi / 4, 0.9, 2.0))
    tc.check_closed()
    ts = np.linspace(0.1, tc.period - 0.1, 17)
    h = 1e-6
    fd = (tc.phi(ts + h) - tc.phi(ts - h)) / (2.0 * h)
    assert np.allclose(fd, tc.phi_dot(ts), rtol=1e-6, atol=1e-6)


def test_tilted_circle_solid_angle_invariance():
    # rotating the loop rigidly cannot change the enclosed solid angle
    expect = np.pi * (1.0 - np.cos(np.pi / 3))
    for gamma in (0.0, 0.4, 0.9, 1.4):
        path = tilted_circle_path(TiltedCircle(np.pi / 3, gamma, 1.0))
        assert berry_phase(path) == pytest.approx(expect, abs=1e-10)


def test_berry_phase_convergence_guard():
    path = tilted_circle_path(TiltedCircle(np.pi / 3, 0.9, 1.0))
    with pytest.raises(InvalidPathError):
        berry_phase(path, samples=64, rel_tol=1e-30)
