"""Closed-form Gaussian evolution against independent quadrature oracles."""
import math

import numpy as np
import pytest

from pilotwave.constants import DEFAULT_CONSTANTS
from pilotwave.errors import DegenerateTimeError
from pilotwave.gaussian import ComplexGaussian1D, GaussianPacket, free_kernel
from pilotwave.quadrature import QuadratureSpec, integrate_complex

HBAR = DEFAULT_CONSTANTS.hbar
MASS = DEFAULT_CONSTANTS.electron_mass


def test_free_kernel_modulus():
    # |K|^2 = m / (2 pi hbar dt), independent of positions.
    dt = 1e-9
    val = free_kernel(2.5e-6, dt, -1e-6, 0.0, MASS, HBAR)
    assert abs(val) ** 2 == pytest.approx(MASS / (2 * math.pi * HBAR * dt),
                                          rel=1e-12)


def test_free_kernel_degenerate_time():
    with pytest.raises(DegenerateTimeError):
        free_kernel(0.0, 1.0, 0.0, 1.0, MASS, HBAR)
    with pytest.raises(DegenerateTimeError):
        free_kernel(0.0, 0.0, 0.0, 1.0, MASS, HBAR)


def test_packet_is_normalized():
    pk = GaussianPacket(center=1e-6, sigma=3e-6, drift_velocity=100.0,
                        mass=MASS)
    assert pk.coefficients(HBAR).norm_squared() == pytest.approx(1.0,
                                                                 rel=1e-12)


def test_free_evolve_against_kernel_quadrature():
    # psi(y, t) = integral K(y, t; y0, 0) psi0(y0) dy0, evaluated by
    # adaptive Simpson, must match the closed-form coefficient update.
    pk = GaussianPacket(center=0.0, sigma=3e-6, drift_velocity=0.0, mass=MASS)
    g0 = pk.coefficients(HBAR)
    t = 1.9444e-9
    gt = g0.free_evolve(t, MASS, HBAR)
    # The integrand magnitude is ~1e8, so roundoff floors the achievable
    # absolute accuracy near 1e-7; the result itself is O(1e2).
    spec = QuadratureSpec(panels=512, abs_tol=1e-7)
    for y in (0.0, 2e-6, -5e-6):
        def integrand(y0):
            return free_kernel(y, t, y0, 0.0, MASS, HBAR) * g0(y0)
        oracle = integrate_complex(integrand, -30e-6, 30e-6, spec)
        assert complex(gt(y)) == pytest.approx(oracle, rel=1e-6)


def test_norm_preserved_under_evolution():
    pk = GaussianPacket(center=0.0, sigma=1e-4, mass=DEFAULT_CONSTANTS.silver_mass)
    gt = pk.coefficients(HBAR).free_evolve(1e-3, pk.mass, HBAR)
    assert gt.norm_squared() == pytest.approx(1.0, rel=1e-12)


def test_evolved_width_matches_sigma_at():
    pk = GaussianPacket(center=0.0, sigma=3e-6, mass=MASS)
    t = 5e-9
    gt = pk.evolved(t, HBAR)
    width = math.sqrt(-1.0 / (4.0 * gt.a.real))
    assert width == pytest.approx(pk.sigma_at(t, HBAR), rel=1e-12)


def test_spread_negligible_when_tau_tiny():
    # hbar t / (2 m sigma) of order 4e-11 m against sigma = 1e-4 m leaves
    # sigma_t / sigma - 1 far below 1e-12.
    pk = GaussianPacket(center=0.0, sigma=1e-4,
                        mass=DEFAULT_CONSTANTS.silver_mass)
    t = 2e-5
    assert pk.sigma_at(t, HBAR) / pk.sigma - 1.0 < 1e-12


def test_free_evolve_identity_and_domain():
    g = GaussianPacket(center=0.0, sigma=1e-6, mass=MASS).coefficients(HBAR)
    assert g.free_evolve(0.0, MASS, HBAR) is g
    with pytest.raises(DegenerateTimeError):
        g.free_evolve(-1e-9, MASS, HBAR)


def test_bohmian_position_stretch_law():
    pk = GaussianPacket(center=1e-6, sigma=3e-6, drift_velocity=50.0,
                        mass=MASS)
    t = 4e-9
    x0 = 2.5e-6
    stretch = pk.sigma_at(t, HBAR) / pk.sigma
    expected = pk.center + pk.drift_velocity * t + (x0 - pk.center) * stretch
    assert pk.bohmian_position(x0, t, HBAR) == pytest.approx(expected,
                                                             rel=1e-14)
    assert pk.bohmian_position(x0, 0.0, HBAR) == x0


def test_product_integral_against_quadrature():
    g1 = GaussianPacket(center=0.0, sigma=2e-6, drift_velocity=30.0,
                        mass=MASS).coefficients(HBAR)
    g2 = GaussianPacket(center=1e-6, sigma=3e-6, drift_velocity=-10.0,
                        mass=MASS).coefficients(HBAR)
    oracle = integrate_complex(lambda x: g1(x) * np.conj(g2(x)),
                               -30e-6, 30e-6,
                               QuadratureSpec(panels=256, abs_tol=1e-14))
    assert g1.product_integral(g2) == pytest.approx(oracle, rel=1e-10)


def test_norm_squared_requires_decay():
    with pytest.raises(ValueError):
        ComplexGaussian1D(a=0.0 + 1j, b=0.0, c=0.0).norm_squared()


def test_derivative_matches_finite_difference():
    g = GaussianPacket(center=0.0, sigma=2e-6, drift_velocity=100.0,
                       mass=MASS).coefficients(HBAR)
    h = 1e-12
    for x in (0.0, 1.5e-6):
        fd = (g(x + h) - g(x - h)) / (2 * h)
        assert complex(g.derivative(x)) == pytest.approx(complex(fd), rel=1e-6)


def test_packet_validation():
    with pytest.raises(ValueError):
        GaussianPacket(center=0.0, sigma=0.0)
    with pytest.raises(ValueError):
        GaussianPacket(center=0.0, sigma=1.0, mass=-1.0)
