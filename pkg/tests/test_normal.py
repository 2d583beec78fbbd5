"""Normal CDF/quantile against an arbitrary-precision oracle."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilotwave.errors import DomainError
from pilotwave.normal import normal_cdf, normal_pdf, normal_quantile

mp.mp.dps = 40


def _mp_cdf(x):
    return float(0.5 * mp.erfc(-mp.mpf(x) / mp.sqrt(2)))


def test_cdf_against_mpmath_grid():
    for x in np.linspace(-8.0, 8.0, 81):
        assert normal_cdf(float(x)) == pytest.approx(_mp_cdf(x), abs=1e-15)


def test_cdf_frozen_values():
    # Oracle values computed with 40-digit erfc.
    assert normal_cdf(3.0) - normal_cdf(-3.0) == pytest.approx(
        0.9973002039367398, abs=1e-15)
    assert normal_cdf(0.0) == 0.5


def test_quantile_frozen_value():
    assert normal_quantile(0.25) == pytest.approx(-0.6744897501960817,
                                                  abs=1e-12)


def test_quantile_against_mpmath():
    for p in (1e-10, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1 - 1e-6, 1 - 1e-10):
        oracle = float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))
        assert normal_quantile(p) == pytest.approx(oracle, abs=1e-9)


def test_quantile_domain():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(DomainError):
            normal_quantile(bad)
    with pytest.raises(DomainError):
        normal_quantile(np.array([0.5, 1.0]))


def test_vectorized_matches_scalar():
    p = np.array([0.1, 0.5, 0.9])
    out = normal_quantile(p)
    assert out.shape == (3,)
    for pi, oi in zip(p, out):
        assert normal_quantile(float(pi)) == oi


def test_pdf_is_cdf_derivative():
    h = 1e-6
    for x in (-2.0, 0.0, 1.5):
        fd = (normal_cdf(x + h) - normal_cdf(x - h)) / (2 * h)
        assert normal_pdf(x) == pytest.approx(fd, rel=1e-8)


@given(st.floats(min_value=1e-12, max_value=1 - 1e-12))
@settings(max_examples=200, deadline=None)
def test_quantile_cdf_roundtrip(p):
    assert normal_cdf(normal_quantile(p)) == pytest.approx(p, abs=1e-12)


@given(st.floats(min_value=-8.0, max_value=8.0))
@settings(max_examples=200, deadline=None)
def test_cdf_monotone_and_symmetric(x):
    assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-14)
    assert normal_cdf(x + 0.1) > normal_cdf(x)
