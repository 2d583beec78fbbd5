"""Spin-1/2 beam splitting in an inhomogeneous magnet, solved in closed form.

The spinor is evolved analytically: inside the magnet each component is a
rigid Gaussian (the spreading correction is negligible at these parameters)
picking up a linear-in-z phase; after the magnet the two packets drift apart
with opposite velocities +-u. Trajectories, the deterministic threshold law,
the spin density matrix and the measurement demonstration all derive from
this one closed form.

Sign conventions: the spinor reduces exactly to
(cos(theta0/2) e^{-i phi0/2}, sin(theta0/2) e^{+i phi0/2}) at t = 0, and the
up component accumulates the Larmor phase e^{-i mu_B B0 t / hbar}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import (
    AmbiguousRegionError,
    DomainError,
    NonSeparatingError,
)
from .gaussian import ComplexGaussian1D, GaussianPacket
from .guidance import (
    SpinOrientation,
    StepControl,
    integrate_ensemble,
    spin_orientation,
)
from .normal import normal_quantile
from .quadrature import QuadratureSpec, integrate_complex
from .rng import seeded_stream

COMPONENT_RATIO = 1e-4          # dominance threshold for outcome assignment
SUPPORT_SIGMAS = 5.0            # a packet's support for measurement purposes
SPIN_ARROW_SAMPLES = 40         # output times per trajectory


@dataclass(frozen=True)
class MagnetSpec:
    """Magnet and beamline geometry (SI units).

    ``b0``: uniform field (T); ``gradient``: |dB/dz| (T/m); ``length``: magnet
    extent along the beam (m); ``drift``: magnet-to-screen distance (m);
    ``speed``: beam velocity (m/s). The transit time is derived, never set.
    """

    b0: float = 5.0
    gradient: float = 1.0e3
    length: float = 0.01
    drift: float = 0.2
    speed: float = 500.0
    transit_time: float = field(init=False)

    def __post_init__(self):
        for name in ("b0", "gradient", "length", "drift", "speed"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        object.__setattr__(self, "transit_time", self.length / self.speed)

    @property
    def screen_delay(self) -> float:
        """Free-flight time from magnet exit to the screen."""
        return self.drift / self.speed

    @property
    def screen_time(self) -> float:
        """Total time from magnet entry to the screen."""
        return self.transit_time + self.screen_delay


@dataclass(frozen=True)
class SternGerlachDerived:
    """Quantities fixed by the magnet and the atom.

    ``z_delta``: packet displacement at magnet exit; ``u``: packet speed
    after exit; ``phi_plus``/``phi_minus``: accumulated z-independent phases
    of the two components at exit (excluding the initial +-phi0/2).
    """

    z_delta: float
    u: float
    phi_plus: float
    phi_minus: float


def derived_quantities(magnet: MagnetSpec, packet: GaussianPacket,
                       constants: PhysicalConstants = DEFAULT_CONSTANTS
                       ) -> SternGerlachDerived:
    mu, m, hbar = constants.bohr_magneton, packet.mass, constants.hbar
    dt = magnet.transit_time
    accel = mu * magnet.gradient / m
    z_delta = 0.5 * accel * dt * dt
    u = accel * dt
    cubic = (mu * magnet.gradient) ** 2 * dt**3 / (6.0 * m * hbar)
    larmor = mu * magnet.b0 * dt / hbar
    return SternGerlachDerived(
        z_delta=z_delta, u=u,
        phi_plus=-larmor - cubic,
        phi_minus=+larmor - cubic,
    )


@dataclass
class SpinorSample:
    """Spinor components and z-derivatives on a grid of points."""

    psi_plus: np.ndarray
    psi_minus: np.ndarray
    dpsi_plus: np.ndarray
    dpsi_minus: np.ndarray

    @property
    def density(self):
        return np.abs(self.psi_plus) ** 2 + np.abs(self.psi_minus) ** 2


class SternGerlachModel:
    """All closed-form machinery for one magnet/packet configuration."""

    def __init__(self, magnet: MagnetSpec = MagnetSpec(),
                 packet: Optional[GaussianPacket] = None,
                 constants: PhysicalConstants = DEFAULT_CONSTANTS):
        if packet is None:
            packet = GaussianPacket(center=0.0, sigma=1e-4,
                                    mass=constants.silver_mass)
        self.magnet = magnet
        self.packet = packet
        self.constants = constants
        self.derived = derived_quantities(magnet, packet, constants)

    # -- kinematics of the two packets -----------------------------------

    def packet_center(self, t: float) -> float:
        """Center of the up packet at total time t (down is the mirror)."""
        dt = self.magnet.transit_time
        mu, m = self.constants.bohr_magneton, self.packet.mass
        accel = mu * self.magnet.gradient / m
        if t <= dt:
            return 0.5 * accel * t * t
        return self.derived.z_delta + self.derived.u * (t - dt)

    def packet_speed(self, t: float) -> float:
        """Speed of the up packet at total time t."""
        dt = self.magnet.transit_time
        mu, m = self.constants.bohr_magneton, self.packet.mass
        if t <= dt:
            return mu * self.magnet.gradient * t / m
        return self.derived.u

    def phase_slope(self, t: float) -> float:
        """d(phase)/dz of the up component: m * packet_speed / hbar."""
        return self.packet.mass * self.packet_speed(t) / self.constants.hbar

    def phase_constant(self, t: float) -> float:
        """z-independent phase of the up component at total time t
        (excluding -phi0/2); the down component carries its negative minus
        twice the cubic gradient term folded in below."""
        mu, m, hbar = (self.constants.bohr_magneton, self.packet.mass,
                       self.constants.hbar)
        dt = self.magnet.transit_time
        if t <= dt:
            cubic = (mu * self.magnet.gradient) ** 2 * t**3 / (6.0 * m * hbar)
            return -mu * self.magnet.b0 * t / hbar - cubic
        tau = t - dt
        u = self.derived.u
        return self.derived.phi_plus - 0.5 * m * u * u * tau / hbar

    def _phase_constant_minus(self, t: float) -> float:
        mu, m, hbar = (self.constants.bohr_magneton, self.packet.mass,
                       self.constants.hbar)
        dt = self.magnet.transit_time
        if t <= dt:
            cubic = (mu * self.magnet.gradient) ** 2 * t**3 / (6.0 * m * hbar)
            return +mu * self.magnet.b0 * t / hbar - cubic
        tau = t - dt
        u = self.derived.u
        return self.derived.phi_minus - 0.5 * m * u * u * tau / hbar

    # -- closed-form spinor ----------------------------------------------

    def spinor_total(self, theta0: float, phi0: float, z, t: float
                     ) -> SpinorSample:
        """Spinor and z-derivatives at total time t in [0, screen_time]."""
        if t < 0:
            raise DomainError(f"need t >= 0, got {t}")
        z = np.asarray(z, dtype=float)
        sigma = self.packet.sigma
        c = self.packet_center(t)
        k = self.phase_slope(t)
        wp, wm = math.cos(0.5 * theta0), math.sin(0.5 * theta0)
        norm = (2.0 * math.pi * sigma * sigma) ** -0.25
        env_p = np.exp(-((z - c) ** 2) / (4.0 * sigma * sigma))
        env_m = np.exp(-((z + c) ** 2) / (4.0 * sigma * sigma))
        ph_p = np.exp(1j * (k * z + self.phase_constant(t) - 0.5 * phi0))
        ph_m = np.exp(1j * (-k * z + self._phase_constant_minus(t) + 0.5 * phi0))
        psi_p = wp * norm * env_p * ph_p
        psi_m = wm * norm * env_m * ph_m
        dpsi_p = psi_p * (-(z - c) / (2.0 * sigma * sigma) + 1j * k)
        dpsi_m = psi_m * (-(z + c) / (2.0 * sigma * sigma) - 1j * k)
        return SpinorSample(psi_p, psi_m, dpsi_p, dpsi_m)

    def spinor_in_field(self, theta0: float, phi0: float, z, t: float
                        ) -> SpinorSample:
        """Spinor inside the magnet, t in [0, transit_time]."""
        if not 0.0 <= t <= self.magnet.transit_time:
            raise DomainError(
                f"in-field time must lie in [0, {self.magnet.transit_time}], got {t}"
            )
        return self.spinor_total(theta0, phi0, z, t)

    def spinor_after_field(self, theta0: float, phi0: float, z, t: float
                           ) -> SpinorSample:
        """Spinor after the magnet; t is measured from the field exit."""
        if t < 0:
            raise DomainError(f"after-field time must be >= 0, got {t}")
        return self.spinor_total(theta0, phi0, z, self.magnet.transit_time + t)

    def density(self, theta0: float, z, t: float):
        """|psi|^2 after the magnet: the weighted two-Gaussian profile.

        t is measured from the field exit. Equal pointwise to the squared
        modulus of spinor_after_field.
        """
        z = np.asarray(z, dtype=float)
        sigma = self.packet.sigma
        c = self.derived.z_delta + self.derived.u * t
        g = (2.0 * math.pi * sigma * sigma) ** -0.5
        wp2 = math.cos(0.5 * theta0) ** 2
        wm2 = math.sin(0.5 * theta0) ** 2
        return g * (
            wp2 * np.exp(-((z - c) ** 2) / (2.0 * sigma * sigma))
            + wm2 * np.exp(-((z + c) ** 2) / (2.0 * sigma * sigma))
        )

    def component_gaussians(self, theta0: float, phi0: float, t: float):
        """The two components as ComplexGaussian1D (None for zero weight).

        Total-time convention; weights and phases folded into the constant
        coefficient so that closed-form integrals are exact.
        """
        sigma = self.packet.sigma
        inv4 = 1.0 / (4.0 * sigma * sigma)
        c = self.packet_center(t)
        k = self.phase_slope(t)
        lognorm = -0.25 * math.log(2.0 * math.pi * sigma * sigma)
        wp, wm = math.cos(0.5 * theta0), math.sin(0.5 * theta0)

        def build(weight, center, slope, const_phase):
            if weight == 0.0:
                return None
            a = complex(-inv4, 0.0)
            b = complex(2.0 * inv4 * center, slope)
            cc = complex(-inv4 * center * center + lognorm + math.log(weight),
                         const_phase)
            return ComplexGaussian1D(a, b, cc)

        up = build(wp, +c, +k, self.phase_constant(t) - 0.5 * phi0)
        down = build(wm, -c, -k, self._phase_constant_minus(t) + 0.5 * phi0)
        return up, down

    # -- derived scalars --------------------------------------------------

    def decoherence_time(self) -> float:
        """Time after field exit when the spots are 3 sigma apart each way."""
        u = self.derived.u
        if u <= 0:
            raise NonSeparatingError("packets never separate (u <= 0)")
        return (3.0 * self.packet.sigma - self.derived.z_delta) / u

    def overlap_integral(self, t: float,
                         spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-12)
                         ) -> float:
        """Integral of |psi_+||psi_-| dz at time t after exit, for equal
        weights (the weight product factors out)."""
        sigma = self.packet.sigma
        c = self.derived.z_delta + self.derived.u * t
        g = (2.0 * math.pi * sigma * sigma) ** -0.5

        def f(z):
            return g * np.exp(-((z - c) ** 2 + (z + c) ** 2)
                              / (4.0 * sigma * sigma))

        half = c + 10.0 * sigma
        return float(integrate_complex(f, -half, half, spec).real)

    def decoherence_time_from_overlap(self) -> float:
        """Time after exit when the packet-overlap integral crosses e^{-9/2}.

        Independent of the 3-sigma geometric definition: located by root
        finding on the quadrature-evaluated overlap.
        """
        target = math.exp(-4.5)
        hi = 2.0 * self.decoherence_time()
        return float(brentq(lambda t: self.overlap_integral(t) - target,
                            0.0, hi, xtol=1e-12))

    def spin_density_matrix(self, theta0: float, phi0: float, t: float
                            ) -> np.ndarray:
        """Reduced 2x2 spin density matrix at total time t.

        Diagonal entries by Simpson quadrature of the component densities;
        off-diagonals by the exact complex-Gaussian product integral (the
        integrand oscillates ~1e6 times across the support once the packets
        carry opposite momenta, which no sane quadrature resolves).
        """
        up, down = self.component_gaussians(theta0, phi0, t)
        rho = np.zeros((2, 2), dtype=complex)
        sigma = self.packet.sigma
        c = self.packet_center(t)
        spec = QuadratureSpec(panels=256, abs_tol=1e-12)
        for idx, comp, center in ((0, up, +c), (1, down, -c)):
            if comp is None:
                continue
            lo, hi = center - 10.0 * sigma, center + 10.0 * sigma
            val = integrate_complex(lambda z: np.abs(comp(z)) ** 2, lo, hi, spec)
            rho[idx, idx] = val.real
        if up is not None and down is not None:
            rho[0, 1] = up.product_integral(down)
            rho[1, 0] = np.conj(rho[0, 1])
        return rho

    # -- measurement ------------------------------------------------------

    def measurement_demo(self, theta0: float, phi0: float, z_impact: float,
                         t: float):
        """Outcome and post-measurement spinor read off one impact.

        t is measured from the field exit and must be at least the
        decoherence time. Returns (eigenvalue +-hbar/2, unit spinor 2-vector)
        after eliminating the locally negligible component.
        """
        t_d = self.decoherence_time()
        if t < t_d:
            raise DomainError(f"measurement requires t >= t_D = {t_d:.3e}")
        sigma = self.packet.sigma
        c = self.derived.z_delta + self.derived.u * t
        if min(abs(z_impact - c), abs(z_impact + c)) > SUPPORT_SIGMAS * sigma:
            raise DomainError(
                f"impact {z_impact:.3e} outside both packets' "
                f"{SUPPORT_SIGMAS:.0f}-sigma supports"
            )
        s = self.spinor_total(theta0, phi0, np.array(z_impact),
                              self.magnet.transit_time + t)
        ap, am = abs(complex(s.psi_plus)), abs(complex(s.psi_minus))
        hbar = self.constants.hbar
        if ap > 0 and am / ap < COMPONENT_RATIO:
            kept = complex(s.psi_plus) / ap
            return +0.5 * hbar, np.array([kept, 0.0], dtype=complex)
        if am > 0 and ap / am < COMPONENT_RATIO:
            kept = complex(s.psi_minus) / am
            return -0.5 * hbar, np.array([0.0, kept], dtype=complex)
        raise AmbiguousRegionError(
            f"neither component dominates at z={z_impact:.3e}, t={t:.3e} "
            f"(|psi_+|={ap:.3e}, |psi_-|={am:.3e})"
        )

    def threshold_position(self, theta0: float) -> float:
        """Initial-position cutoff deciding the outcome deterministically.

        Trajectories starting above it end in the up beam, below it in the
        down beam. Pure eigenstates get -+inf sentinels (single outcome).
        """
        if not 0.0 <= theta0 <= math.pi:
            raise DomainError(f"theta0 must lie in [0, pi], got {theta0}")
        p = math.sin(0.5 * theta0) ** 2
        if p == 0.0:
            return -math.inf
        if p == 1.0:
            return math.inf
        return self.packet.sigma * normal_quantile(p)

    # -- trajectories -----------------------------------------------------

    def velocity_field(self, log_weight_ratio):
        """Guidance velocity v(z, t) over the full timeline.

        ``log_weight_ratio`` = ln(w_+/w_-), scalar or per-particle array
        (+-inf for eigenstates). Evaluated by the tanh kernel: the velocity
        is the density-weighted mean of the two packet velocities.
        """
        model = self

        class _Field:
            def __call__(self, z, t):
                return _kernels.sg_velocity(
                    z, log_weight_ratio, model.packet_center(t),
                    model.packet.sigma, model.packet_speed(t),
                )

        return _Field()

    def spin_angles(self, theta0: float, phi0: float, z, t):
        """Spin orientation (theta, phi) fields along the beam.

        theta from the log-ratio of envelope magnitudes (stable in the far
        tails); phi is the relative phase of the components.
        """
        z = np.asarray(z, dtype=float)
        sigma = self.packet.sigma
        c = self.packet_center(t)
        k = self.phase_slope(t)
        wp, wm = math.cos(0.5 * theta0), math.sin(0.5 * theta0)
        if wp == 0.0:
            theta = np.full(z.shape, math.pi)
        elif wm == 0.0:
            theta = np.zeros(z.shape)
        else:
            log_ratio = math.log(wm / wp) - z * c / (sigma * sigma)
            theta = 2.0 * np.arctan(np.exp(log_ratio))
        dphi = (self._phase_constant_minus(t) - self.phase_constant(t)
                + phi0 - 2.0 * k * z)
        return theta, np.mod(dphi, 2.0 * math.pi)

    def run_ensemble(self, mode: str, n: int, seed: int,
                     theta0: float = math.pi / 3, phi0: float = 0.0,
                     n_times: int = SPIN_ARROW_SAMPLES) -> "SGEnsembleResult":
        """Trajectories, spin histories and screen impacts for n atoms.

        mode "pure": every atom starts with the given (theta0, phi0);
        mode "mixture": theta0 ~ U[0, pi], phi0 ~ U[0, 2 pi) per atom.
        Initial positions are equilibrium draws from the source Gaussian.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        if mode not in ("pure", "mixture"):
            raise ValueError(f"mode must be 'pure' or 'mixture', got {mode!r}")
        pos_rng = seeded_stream(seed, 0)
        z0 = self.packet.center + self.packet.sigma * pos_rng.standard_normal(n)
        if mode == "mixture":
            ang_rng = seeded_stream(seed, 1)
            thetas = ang_rng.uniform(0.0, math.pi, n)
            phis = ang_rng.uniform(0.0, 2.0 * math.pi, n)
        else:
            thetas = np.full(n, float(theta0))
            phis = np.full(n, float(phi0))
        with np.errstate(divide="ignore"):
            log_ratio = np.log(np.cos(0.5 * thetas)) - np.log(np.sin(0.5 * thetas))
        times = np.linspace(0.0, self.magnet.screen_time, n_times)
        # The velocity has a kink at the field exit; pin it to the grid so
        # the step-doubling always straddles smooth pieces.
        times = np.unique(np.concatenate((times, [self.magnet.transit_time])))
        field = self.velocity_field(log_ratio)
        positions = integrate_ensemble(
            field, z0, times, StepControl(pos_tol=1e-10, initial_refinement=2)
        )
        sigma2 = self.packet.sigma ** 2
        theta_hist = np.empty_like(positions)
        phi_hist = np.empty_like(positions)
        for i, t in enumerate(times):
            c = self.packet_center(t)
            k = self.phase_slope(t)
            with np.errstate(over="ignore"):
                theta_hist[i] = 2.0 * np.arctan(
                    np.exp(-log_ratio - positions[i] * c / sigma2)
                )
            phi_hist[i] = np.mod(
                self._phase_constant_minus(t) - self.phase_constant(t)
                + phis - 2.0 * k * positions[i], 2.0 * math.pi,
            )
        impacts = positions[-1]
        outcomes = np.where(impacts >= 0.0, 1, -1)
        return SGEnsembleResult(
            times=times, positions=positions, initial_positions=z0,
            thetas0=thetas, phis0=phis, theta_history=theta_hist,
            phi_history=phi_hist, impacts=impacts, outcomes=outcomes,
        )


@dataclass
class SGEnsembleResult:
    times: np.ndarray
    positions: np.ndarray          # (n_times, n)
    initial_positions: np.ndarray
    thetas0: np.ndarray
    phis0: np.ndarray
    theta_history: np.ndarray      # (n_times, n)
    phi_history: np.ndarray
    impacts: np.ndarray
    outcomes: np.ndarray

    @property
    def up_fraction(self) -> float:
        return float(np.mean(self.outcomes == 1))


def run_sg_ensemble(mode: str, n: int, seed: int,
                    theta0: float = math.pi / 3, phi0: float = 0.0,
                    magnet: MagnetSpec = MagnetSpec(),
                    packet: Optional[GaussianPacket] = None,
                    constants: PhysicalConstants = DEFAULT_CONSTANTS
                    ) -> SGEnsembleResult:
    """Module-level convenience wrapper around SternGerlachModel.run_ensemble."""
    model = SternGerlachModel(magnet, packet, constants)
    return model.run_ensemble(mode, n, seed, theta0=theta0, phi0=phi0)
