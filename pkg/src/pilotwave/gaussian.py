"""Complex Gaussian wave forms and the free-particle propagator.

Everything here is closed-form: a wave of the form exp(a x^2 + b x + c)
stays in that family under free Schroedinger evolution, so propagation is
just an update of the three complex coefficients.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTimeError


def free_kernel(y, t, y0, t0, mass, hbar):
    """Free Schroedinger propagator K(y,t; y0,t0).

    K = sqrt(m / (2 pi i hbar dt)) * exp(i m (y-y0)^2 / (2 hbar dt)),
    so |K|^2 = m / (2 pi hbar dt) independent of positions.
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    dt = t - t0
    if dt <= 0:
        raise DegenerateTimeError(f"free_kernel needs t > t0, got dt={dt}")
    pref = cmath.sqrt(mass / (2j * math.pi * hbar * dt))
    return pref * np.exp(1j * mass * (np.asarray(y) - y0) ** 2 / (2.0 * hbar * dt))


@dataclass(frozen=True)
class ComplexGaussian1D:
    """Wave psi(x) = exp(a x^2 + b x + c) with complex coefficients."""

    a: complex
    b: complex
    c: complex

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(self.a * x * x + self.b * x + self.c)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return (2.0 * self.a * x + self.b) * self(x)

    def log_value(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * x * x + self.b * x + self.c

    def free_evolve(self, dt, mass, hbar) -> "ComplexGaussian1D":
        """Exact kernel propagation over a time dt > 0 (identity at dt=0)."""
        if dt == 0:
            return self
        if dt < 0:
            raise DegenerateTimeError("free_evolve needs dt >= 0")
        alpha = mass / (2.0 * hbar * dt)
        big_a = self.a + 1j * alpha
        a1 = 1j * alpha * self.a / big_a
        b1 = 1j * alpha * self.b / big_a
        c1 = (
            self.c
            - self.b * self.b / (4.0 * big_a)
            + 0.5 * cmath.log(mass / (2j * math.pi * hbar * dt))
            + 0.5 * cmath.log(math.pi / (-big_a))
        )
        return ComplexGaussian1D(a1, b1, c1)

    def norm_squared(self) -> float:
        """Integral of |psi|^2 over the real line."""
        ar, br, cr = self.a.real, self.b.real, self.c.real
        if ar >= 0:
            raise ValueError("non-normalizable Gaussian (Re a >= 0)")
        return math.sqrt(math.pi / (-2.0 * ar)) * math.exp(2.0 * cr - br * br / (2.0 * ar))

    def product_integral(self, other: "ComplexGaussian1D") -> complex:
        """Integral of self * conj(other) over the real line (closed form)."""
        a = self.a + other.a.conjugate()
        b = self.b + other.b.conjugate()
        c = self.c + other.c.conjugate()
        if a.real >= 0:
            raise ValueError("divergent product integral")
        return cmath.sqrt(math.pi / (-a)) * cmath.exp(c - b * b / (4.0 * a))


@dataclass(frozen=True)
class GaussianPacket:
    """Normalized 1-D Gaussian packet with drift; generates its own wave.

    psi0(x) = (2 pi sigma^2)^(-1/4) exp(-(x-center)^2/(4 sigma^2)
              + i m v (x-center)/hbar + i phase0)
    """

    center: float
    sigma: float
    drift_velocity: float = 0.0
    phase0: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")

    def coefficients(self, hbar) -> ComplexGaussian1D:
        inv4s2 = 1.0 / (4.0 * self.sigma**2)
        k = self.mass * self.drift_velocity / hbar
        a = complex(-inv4s2, 0.0)
        b = complex(2.0 * inv4s2 * self.center, k)
        c = complex(
            -inv4s2 * self.center**2 - 0.25 * math.log(2.0 * math.pi * self.sigma**2),
            self.phase0 - k * self.center,
        )
        return ComplexGaussian1D(a, b, c)

    def evolved(self, t, hbar) -> ComplexGaussian1D:
        """Free evolution of the packet wave to time t >= 0."""
        return self.coefficients(hbar).free_evolve(t, self.mass, hbar)

    def sigma_at(self, t, hbar) -> float:
        """Spread width: sigma_t^2 = sigma0^2 + (hbar t / 2 m sigma0)^2."""
        tau = hbar * t / (2.0 * self.mass * self.sigma**2)
        return self.sigma * math.sqrt(1.0 + tau * tau)

    def bohmian_position(self, x0, t, hbar) -> float:
        """Closed-form pilot-wave trajectory of the free packet."""
        stretch = self.sigma_at(t, hbar) / self.sigma
        return self.center + self.drift_velocity * t + (x0 - self.center) * stretch
