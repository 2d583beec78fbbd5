"""Electron interference behind two slits, transverse coordinate only.

The beam axis is classical (x = v t); everything interesting happens in y.
The source Gaussian evolves freely to the slit plane, is truncated by the
hard two-slit indicator, and the post-slit wave is the free propagator
applied to the truncated wave. That integral has an exact per-slit erf
antiderivative (the integrand is kernel x Gaussian), used for trajectories;
composite Simpson over the slit supports provides the independent
quadrature route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import DegenerateTimeError, DomainError, QuadratureConvergenceError
from .gaussian import ComplexGaussian1D, GaussianPacket
from .guidance import (
    StepControl,
    Trajectory,
    VelocityField,
    integrate_ensemble,
)
from .normal import normal_cdf, normal_quantile
from .quadrature import MAX_DOUBLINGS, QuadratureSpec, integrate_complex, \
    simpson_nodes_weights
from .rng import seeded_stream

POINTS_PER_OSCILLATION = 8
CROSS_SECTION_POINTS = 2001


@dataclass(frozen=True)
class SlitGeometry:
    """Two symmetric slits on the plane a distance d1 from the gun.

    ``half_width``: slit half-opening (m); ``separation``: center-to-center
    distance (m); ``d1``/``d2``: gun-to-slits and slits-to-screen distances
    (m); ``beam_speed``: longitudinal velocity (m/s).
    """

    half_width: float = 1.0e-7
    separation: float = 1.0e-6
    d1: float = 0.35
    d2: float = 0.35
    beam_speed: float = 1.8e8

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.separation <= 2.0 * self.half_width:
            raise ValueError("slits overlap: separation must exceed 2*half_width")
        if self.d1 <= 0 or self.d2 <= 0 or self.beam_speed <= 0:
            raise ValueError("d1, d2 and beam_speed must be positive")

    @property
    def t1(self) -> float:
        """Arrival time at the slit plane."""
        return self.d1 / self.beam_speed

    @property
    def screen_dt(self) -> float:
        """Flight time from slit plane to screen."""
        return self.d2 / self.beam_speed

    @property
    def screen_time(self) -> float:
        return self.t1 + self.screen_dt

    def edges(self) -> np.ndarray:
        """(2, 2) array of slit supports, lower slit first."""
        h, s = self.half_width, 0.5 * self.separation
        return np.array([[-s - h, -s + h], [s - h, s + h]])

    def time_at(self, distance: float) -> float:
        """Absolute time when the beam reaches ``distance`` past the slits."""
        if not 0.0 < distance <= self.d2:
            raise DomainError(f"distance must lie in (0, {self.d2}], got {distance}")
        return self.t1 + distance / self.beam_speed


@dataclass
class ScreenRecord:
    """Impact positions collected at the detection plane."""

    impacts: np.ndarray
    arrival_time: float

    def __post_init__(self):
        self.impacts = np.asarray(self.impacts, dtype=float)
        if not np.all(np.isfinite(self.impacts)):
            raise ValueError("impacts must be finite")


@dataclass(frozen=True)
class SlitPlaneWave:
    """Source wave at the slit plane, truncated by the slit indicator."""

    gaussian: ComplexGaussian1D
    geometry: SlitGeometry

    def indicator(self, y):
        y = np.asarray(y, dtype=float)
        mask = np.zeros(y.shape, dtype=bool)
        for l1, l2 in self.geometry.edges():
            mask |= (y >= l1) & (y <= l2)
        return mask.astype(float)

    def __call__(self, y):
        return self.gaussian(y) * self.indicator(y)

    def open_value(self, y):
        """Untruncated slit-plane wave (for evaluating on slit supports)."""
        return self.gaussian(y)

    def sigma(self) -> float:
        """Spread of the slit-plane envelope."""
        return math.sqrt(-1.0 / (4.0 * self.gaussian.a.real))

    def flux(self) -> float:
        """Probability mass passing the slits."""
        s = self.sigma()
        # The envelope is centered where Re(b)/( -2 Re(a)) says it is.
        center = self.gaussian.b.real / (-2.0 * self.gaussian.a.real)
        total = self.gaussian.norm_squared()
        mass = 0.0
        for l1, l2 in self.geometry.edges():
            mass += normal_cdf((l2 - center) / s) - normal_cdf((l1 - center) / s)
        return total * mass


def wave_at_slits(source: GaussianPacket, geometry: SlitGeometry,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS
                  ) -> SlitPlaneWave:
    """Free-evolve the gun-exit packet to the slit plane and truncate it."""
    evolved = source.coefficients(constants.hbar).free_evolve(
        geometry.t1, source.mass, constants.hbar
    )
    return SlitPlaneWave(gaussian=evolved, geometry=geometry)


class TwoSlitField:
    """Post-slit wave Psi_A + Psi_B and its y-derivative.

    The default evaluation path is the exact erf antiderivative of the
    propagator applied to the truncated Gaussian; ``quadrature_value`` is
    the adaptive-Simpson route used for cross-validation, and
    ``simpson_batch`` the fixed-node batched route for dense grids.
    """

    def __init__(self, slit_wave: SlitPlaneWave, mass: float,
                 constants: PhysicalConstants = DEFAULT_CONSTANTS):
        self.slit_wave = slit_wave
        self.geometry = slit_wave.geometry
        self.mass = mass
        self.hbar = constants.hbar

    def _alpha_logpref(self, t: float):
        dt = t - self.geometry.t1
        if dt <= 0:
            raise DegenerateTimeError(
                f"post-slit field needs t > t1 = {self.geometry.t1:.6e}"
            )
        alpha = self.mass / (2.0 * self.hbar * dt)
        log_pref = 0.5 * np.log(self.mass / (2j * math.pi * self.hbar * dt))
        return alpha, log_pref

    def _slit_edges(self, slits: str) -> np.ndarray:
        edges = self.geometry.edges()
        if slits == "both":
            return edges
        if slits == "lower":
            return edges[:1]
        if slits == "upper":
            return edges[1:]
        raise ValueError(f"slits must be 'both', 'lower' or 'upper', got {slits!r}")

    def value_and_derivative(self, y, t: float, slits: str = "both"):
        """Closed-form (psi, dpsi/dy) at absolute time t > t1."""
        alpha, log_pref = self._alpha_logpref(t)
        g = self.slit_wave.gaussian
        return _kernels.two_slit_field(
            np.asarray(y, dtype=float), alpha, complex(log_pref),
            g.a, g.b, g.c, self._slit_edges(slits),
        )

    def density(self, y, t: float, slits: str = "both"):
        psi, _ = self.value_and_derivative(y, t, slits)
        return np.abs(psi) ** 2

    def quadrature_value(self, y, t: float, slits: str = "both",
                         spec: Optional[QuadratureSpec] = None):
        """(psi, dpsi) by adaptive composite Simpson over each slit support.

        Point by point; use this for spot checks, not dense grids.
        """
        alpha, log_pref = self._alpha_logpref(t)
        pref = np.exp(log_pref)
        g = self.slit_wave.gaussian
        y_arr = np.atleast_1d(np.asarray(y, dtype=float))
        psi = np.zeros(y_arr.shape, dtype=complex)
        dpsi = np.zeros(y_arr.shape, dtype=complex)
        for l1, l2 in self._slit_edges(slits):
            # Tolerance scaled to the natural size of the slit integral;
            # the derivative integrand is 2 alpha |y - y'| times larger.
            scale = float(np.abs(g((l1 + l2) / 2.0))) * (l2 - l1)
            panels = self._panel_estimate(float(np.max(np.abs(y_arr))), t)
            base = spec or QuadratureSpec(panels=panels, abs_tol=1e-9 * scale)
            for i, yi in enumerate(y_arr):
                def integrand(yp):
                    return np.exp(1j * alpha * (yi - yp) ** 2) * g(yp)

                def d_integrand(yp):
                    return 2j * alpha * (yi - yp) * integrand(yp)

                d_mag = 2.0 * alpha * (abs(yi) + max(abs(l1), abs(l2)))
                d_spec = QuadratureSpec(panels=base.panels,
                                        abs_tol=base.abs_tol * max(d_mag, 1.0))
                psi[i] += pref * integrate_complex(integrand, l1, l2, base)
                dpsi[i] += pref * integrate_complex(d_integrand, l1, l2, d_spec)
        if np.isscalar(y) or np.asarray(y).ndim == 0:
            return psi[0], dpsi[0]
        return psi.reshape(np.shape(y)), dpsi.reshape(np.shape(y))

    def _panel_estimate(self, y_max: float, t: float) -> int:
        """Even panel count resolving the kernel oscillation over a slit."""
        alpha, _ = self._alpha_logpref(t)
        h, s = self.geometry.half_width, 0.5 * self.geometry.separation
        span = 2.0 * h
        phase_range = alpha * span * 2.0 * (abs(y_max) + s + h)
        oscillations = phase_range / (2.0 * math.pi)
        panels = max(64, int(math.ceil(POINTS_PER_OSCILLATION * oscillations)))
        return panels + panels % 2

    def simpson_batch(self, y, t: float, slits: str = "both",
                      rel_tol: float = 1e-8):
        """(psi, dpsi) on a dense grid by fixed-node composite Simpson.

        The panel count comes from the oscillation estimate and is verified
        by a doubled-panel comparison on a subsample of the grid.
        """
        alpha, log_pref = self._alpha_logpref(t)
        g = self.slit_wave.gaussian
        y = np.asarray(y, dtype=float)
        panels = self._panel_estimate(float(np.max(np.abs(y))), t)
        probe = y.ravel()[:: max(1, y.size // 16)]

        def evaluate(pts, n_panels):
            nodes_all, vals_all = [], []
            for l1, l2 in self._slit_edges(slits):
                nodes, weights = simpson_nodes_weights(l1, l2, n_panels)
                nodes_all.append(nodes)
                vals_all.append(weights * g(nodes))
            return _kernels.two_slit_simpson(
                pts, alpha, complex(log_pref),
                np.concatenate(nodes_all), np.concatenate(vals_all),
            )

        for _ in range(MAX_DOUBLINGS):
            coarse, _d = evaluate(probe, panels)
            fine, _d = evaluate(probe, 2 * panels)
            scale = float(np.max(np.abs(fine)))
            if np.max(np.abs(fine - coarse)) <= rel_tol * scale:
                return evaluate(y, 2 * panels)
            panels *= 2
        raise QuadratureConvergenceError(
            f"slit quadrature not converged at {panels} panels (t={t:.3e})"
        )

    def velocity_field(self, check_floor: bool = True) -> VelocityField:
        """Guidance field in the closed-form post-slit wave."""
        return VelocityField(
            lambda y, t: self.value_and_derivative(y, t),
            self.mass, self.hbar, check_floor=check_floor,
        )


def wave_after_slits(field: TwoSlitField, y, t: float,
                     spec: Optional[QuadratureSpec] = None):
    """Quadrature evaluation of the post-slit wave (contract form)."""
    return field.quadrature_value(y, t, spec=spec)


@dataclass
class CrossSection:
    """Density profiles at one distance past the slits."""

    distance: float
    y: np.ndarray
    interference: np.ndarray    # |Psi_A + Psi_B|^2
    summed: np.ndarray          # |Psi_A|^2 + |Psi_B|^2

    @property
    def visibility(self) -> float:
        """Fringe visibility over the central quarter of the grid."""
        n = self.y.size
        sl = slice(3 * n // 8, 5 * n // 8)
        seg = self.interference[sl]
        return float((seg.max() - seg.min()) / (seg.max() + seg.min()))


def fringe_spacing(geometry: SlitGeometry, distance: float, mass: float,
                   constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Two-source fringe spacing lambda*L/separation at ``distance``."""
    wavelength = constants.h / (mass * geometry.beam_speed)
    return wavelength * distance / geometry.separation


def grid_extent(field: TwoSlitField, distance: float) -> float:
    """Half-width of the cross-section grid: near-field floor or 12 fringes."""
    return max(30e-6, 12.0 * fringe_spacing(
        field.geometry, distance, field.mass,
        PhysicalConstants(hbar=field.hbar),
    ))


def density_cross_sections(field: TwoSlitField, distances: Sequence[float],
                           n_points: int = CROSS_SECTION_POINTS):
    """Interference vs. summed-single-slit densities on a uniform grid."""
    out = []
    for dist in distances:
        t = field.geometry.time_at(dist)
        half = grid_extent(field, dist)
        y = np.linspace(-half, half, n_points)
        psi_a, _ = field.simpson_batch(y, t, slits="lower")
        psi_b, _ = field.simpson_batch(y, t, slits="upper")
        out.append(CrossSection(
            distance=dist, y=y,
            interference=np.abs(psi_a + psi_b) ** 2,
            summed=np.abs(psi_a) ** 2 + np.abs(psi_b) ** 2,
        ))
    return out


def sample_slit_positions(field: TwoSlitField, n: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Equilibrium draws from the slit-plane density conditioned on passage.

    Pick the slit by relative transmitted mass, then the position inside it
    by the truncated-normal inverse CDF.
    """
    wave = field.slit_wave
    s = wave.sigma()
    center = wave.gaussian.b.real / (-2.0 * wave.gaussian.a.real)
    edges = field.geometry.edges()
    cdf_lo = np.array([normal_cdf((l1 - center) / s) for l1, _ in edges])
    cdf_hi = np.array([normal_cdf((l2 - center) / s) for _, l2 in edges])
    mass = cdf_hi - cdf_lo
    prob = mass / mass.sum()
    which = rng.random(n) < prob[0]          # True -> lower slit
    u = rng.random(n)
    lo = np.where(which, cdf_lo[0], cdf_lo[1])
    width = np.where(which, mass[0], mass[1])
    return center + s * normal_quantile(lo + u * width)


def _post_slit_times(geometry: SlitGeometry, n_times: int = 600,
                     settle: float = 1e-18) -> np.ndarray:
    """Output grid hugging the slit plane: geometric early, up to the screen.

    The first entry is t1 itself (positions held there); integration starts
    a ``settle`` interval later. ``settle`` must be tiny: a particle a
    distance d from a slit edge feels the edge wave at t - t1 ~ m d^2 / hbar,
    so starting later than that silently skips the velocity kick that
    carries the far diffraction tails. 1e-18 s resolves the kick for every
    particle farther than ~0.1 nm from an edge.
    """
    t1 = geometry.t1
    rel = np.geomspace(settle, geometry.screen_dt, n_times)
    return np.concatenate(([t1], t1 + rel))


@dataclass
class TrajectoryBundle:
    times: np.ndarray
    positions: np.ndarray        # (n_times, n)
    initial_positions: np.ndarray
    screen: ScreenRecord

    def trajectories(self):
        return [
            Trajectory(times=self.times, positions=self.positions[:, j],
                       initial_position=float(self.initial_positions[j]),
                       stream_id=j)
            for j in range(self.positions.shape[1])
        ]


# Integration tolerances for the Fresnel transient, where the velocity field
# carries oscillatory jitter whose inter-step amplitude grows like the local
# diffraction scale sqrt(hbar t / m): the acceptance tolerance follows that
# growth (JIGGLE_FRACTION of the scale, floored at TRANSIENT_TOL) so the bulk
# settles at coarse refinement, while the relative term keeps every strongly
# kicked particle resolved to a fixed fraction of its own interval motion.
TRANSIENT_TOL = 1e-12
TRANSIENT_REL = 1e-3
JIGGLE_FRACTION = 1e-2
# Ceiling on the jitter-tracking tolerance: per-interval slips the size of
# the unchecked schedule (~1e-10 near the transient end) accumulate into a
# coherent drift toward fringe peaks across the whole ensemble.
JIGGLE_CAP = 2e-11
CRUISE_TOL = 1e-10
# The transient lasts until the diffraction scale sqrt(hbar t / m) clears
# the fine structure; its duration is (m / hbar) * TRANSIENT_AREA, which is
# 1e-11 s for an electron at full hbar and scales up when hbar is divided.
TRANSIENT_AREA = 1.16e-15     # m^2, about (slit half-width / 3)^2


def _integrate_bundle(field: TwoSlitField, y0: np.ndarray,
                      times: np.ndarray) -> np.ndarray:
    """Ensemble integration with a tolerance schedule over the flight.

    The transient is split into per-decade chunks whose absolute tolerance
    tracks the diffraction scale at the chunk end; after the transient a
    single cruise tolerance applies. The density-floor check stays off
    because Runge-Kutta probe points legitimately cross deep interference
    nulls mid-interval.
    """
    v = field.velocity_field(check_floor=False)
    t1 = field.geometry.t1
    diffusivity = field.hbar / field.mass           # m^2 / s
    window = min(t1 + TRANSIENT_AREA / diffusivity, times[-1])

    def transient_ctrl(t_hi_rel: float) -> StepControl:
        scale = math.sqrt(diffusivity * t_hi_rel)
        return StepControl(
            pos_tol=max(TRANSIENT_TOL, min(JIGGLE_FRACTION * scale, JIGGLE_CAP)),
            initial_refinement=1, max_refinements=20,
            rel_tol=TRANSIENT_REL,
        )

    cruise = StepControl(pos_tol=CRUISE_TOL, initial_refinement=1,
                         max_refinements=20)
    # Build (last_index, control) segments: decades through the transient,
    # then the cruise.
    segments = []
    lo = 0
    first_rel = times[0] - t1
    t_hi = 10.0 ** math.ceil(math.log10(max(first_rel, 1e-300)) + 0.5)
    while t1 + t_hi < window:
        hi = int(np.searchsorted(times, t1 + t_hi))
        if hi - lo >= 2:
            segments.append((hi, transient_ctrl(t_hi)))
            lo = hi - 1
        t_hi *= 10.0
    hi = int(np.searchsorted(times, window))
    if hi - lo >= 2:
        segments.append((hi, transient_ctrl(window - t1)))
        lo = hi - 1
    if times.size - lo >= 2:
        segments.append((times.size, cruise))

    if not segments:
        return integrate_ensemble(v, y0, times, cruise)
    out = [np.asarray(y0, dtype=float)[None, :]]
    x = np.asarray(y0, dtype=float)
    lo = 0
    for hi, ctrl in segments:
        seg_times = times[lo:hi] if lo == 0 else times[lo - 1:hi]
        chunk = integrate_ensemble(v, x, seg_times, ctrl)
        out.append(chunk[1:])
        x = chunk[-1]
        lo = hi
    res = np.vstack(out)
    if res.shape[0] != times.size:
        raise AssertionError("tolerance schedule did not cover the grid")
    return res


def run_trajectory_bundle(field: TwoSlitField, n: int, seed: int,
                          n_times: int = 600) -> TrajectoryBundle:
    """Integrate n pilot-wave trajectories from the slit plane to the screen."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seeded_stream(seed, 0)
    y0 = sample_slit_positions(field, n, rng)
    times = _post_slit_times(field.geometry, n_times)
    positions = _integrate_bundle(field, y0, times[1:])
    positions = np.vstack((y0[None, :], positions))
    return TrajectoryBundle(
        times=times, positions=positions, initial_positions=y0,
        screen=ScreenRecord(impacts=positions[-1],
                            arrival_time=field.geometry.screen_time),
    )


@dataclass
class ScalingResult:
    divisor: float
    times: np.ndarray
    positions: np.ndarray
    deviation: float


def hbar_scaling_study(geometry: SlitGeometry, source: GaussianPacket,
                       divisors: Sequence[float], n: int, seed: int,
                       constants: PhysicalConstants = DEFAULT_CONSTANTS,
                       n_times: int = 600):
    """Classical-limit study: shrink hbar, reuse the initial positions.

    The classical reference path from the slit exit is the straight line
    y = y0 (the transverse velocity picked up before the slits is
    negligible); the deviation metric for a divisor is the largest
    |y(t) - y0| over all trajectories and times.
    """
    if any(d < 1 for d in divisors):
        raise ValueError("divisors must be >= 1")
    base_field = TwoSlitField(wave_at_slits(source, geometry, constants),
                              source.mass, constants)
    rng = seeded_stream(seed, 0)
    y0 = sample_slit_positions(base_field, n, rng)
    times = _post_slit_times(geometry, n_times)
    results = []
    for div in divisors:
        consts = constants.with_hbar_divisor(div)
        fld = TwoSlitField(wave_at_slits(source, geometry, consts),
                           source.mass, consts)
        positions = _integrate_bundle(fld, y0, times[1:])
        positions = np.vstack((y0[None, :], positions))
        deviation = float(np.max(np.abs(positions - y0[None, :])))
        results.append(ScalingResult(divisor=float(div), times=times,
                                     positions=positions, deviation=deviation))
    return results
