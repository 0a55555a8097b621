"""Unit tests for the Ohmic bath primitives."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berrydec.bath import (BathSpec, QuadratureError, bose_occupation,
                           correlation, correlation_quadrature,
                           spectral_density)


def test_spec_validation():
    with pytest.raises(ValueError):
        BathSpec(-1.0, 2.0)
    with pytest.raises(ValueError):
        BathSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        BathSpec(1.0, 2.0, -0.5)


def test_power_roundtrip():
    spec = BathSpec.from_power(2.0, 4.0, 1.0)
    assert spec.power == pytest.approx(2.0, rel=1e-15)
    assert spec.coupling == pytest.approx(0.25, rel=1e-15)
    assert spec.correlation_time == pytest.approx(0.25, rel=1e-15)


def test_spectral_density_shape():
    spec = BathSpec(1.0, 2.0)
    # maximum lambda*cutoff/(2e) at omega = cutoff
    assert spectral_density(spec, 2.0) == pytest.approx(1.0 / np.e, rel=1e-15)
    assert spectral_density(spec, 0.0) == 0.0
    with pytest.raises(ValueError):
        spectral_density(spec, -1.0)


def test_bose_occupation():
    cold = BathSpec(1.0, 2.0, 0.0)
    warm = BathSpec(1.0, 2.0, 1.0)
    assert bose_occupation(cold, 3.0) == 0.0
    assert bose_occupation(warm, 1.0) == pytest.approx(1.0 / (np.e - 1.0), rel=1e-12)
    with pytest.raises(ValueError):
        bose_occupation(warm, 0.0)


def test_correlation_closed_form_values():
    spec = BathSpec(1.0, 2.0)
    assert correlation(spec, 0.0) == pytest.approx(spec.power, rel=1e-15)
    # kappa(s) = power / (1 + i cutoff s)^2
    s = 0.7
    expect = spec.power / (1.0 + 1j * spec.cutoff * s) ** 2
    assert correlation(spec, s) == pytest.approx(expect, rel=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-20.0, max_value=20.0))
def test_correlation_conjugate_symmetry(s):
    spec = BathSpec(0.5, 3.0)
    assert correlation(spec, -s) == pytest.approx(np.conj(correlation(spec, s)), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1e-3, max_value=10.0),
       st.floats(min_value=0.0, max_value=5.0))
def test_correlation_linear_in_coupling(lam, s):
    base = np.asarray(correlation(BathSpec(1.0, 2.0), s))
    scaled = np.asarray(correlation(BathSpec(lam, 2.0), s))
    assert scaled == pytest.approx(lam * base, rel=1e-12, abs=1e-15)


def test_thermal_correlation_cross_check():
    spec = BathSpec(1.0, 2.0, 1.0)
    s = np.linspace(0.0, 5.0, 21)
    closed = np.asarray(correlation(spec, s))
    quad = correlation_quadrature(spec, s)
    assert np.max(np.abs(quad - closed)) < 1e-6 * spec.power
    # kappa(0) = int J (2N + 1) > vacuum value
    assert closed[0].real > spec.power


def test_quadrature_error_carries_estimate():
    spec = BathSpec(1.0, 2.0)
    with pytest.raises(QuadratureError) as exc:
        correlation_quadrature(spec, 3.0, rel_tol=1e-18)
    assert exc.value.estimate > 0.0


def test_correlation_scalar_vs_array():
    spec = BathSpec(1.0, 2.0)
    arr = correlation(spec, np.array([0.3, 0.6]))
    assert arr.shape == (2,)
    assert isinstance(correlation(spec, 0.3), complex)
    assert arr[0] == pytest.approx(correlation(spec, 0.3), rel=1e-15)
