"""The pilot-wave layer: guidance velocities, trajectories, equilibrium
sampling and the equivariance test.

Velocity fields are built from analytic wave derivatives (never finite
differences of the field: the phases oscillate at the hbar scale).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats
from scipy.integrate import cumulative_simpson

from .errors import (
    DensityFloorError,
    InsufficientSampleError,
    NullSpinorError,
    StepUnderflowError,
)

DENSITY_FLOOR_RATIO = 1e-12


@dataclass(frozen=True)
class SpinOrientation:
    """Polar angles of the spin direction: theta in [0, pi], phi in [0, 2 pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")


@dataclass
class Trajectory:
    """Sampled hidden-variable history of one particle."""

    times: np.ndarray
    positions: np.ndarray
    initial_position: float
    stream_id: int = 0
    spin_theta: Optional[np.ndarray] = None
    spin_phi: Optional[np.ndarray] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float)
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        if self.times.shape != self.positions.shape:
            raise ValueError("times and positions must have equal length")


class VelocityField:
    """Guidance velocity v(x, t) with a relative density floor.

    ``value_and_derivative(x, t) -> (psi, dpsi)`` supplies the wave;
    v = hbar * Im(conj(psi) dpsi) / (m |psi|^2). Points where |psi|^2 drops
    below DENSITY_FLOOR_RATIO times the local peak raise DensityFloorError
    (pilot-wave velocities diverge at nodes).
    """

    def __init__(self, value_and_derivative, mass, hbar,
                 peak_density: Optional[Callable[[float], float]] = None,
                 check_floor: bool = True):
        self._wave = value_and_derivative
        self.mass = mass
        self.hbar = hbar
        self._peak_density = peak_density
        self.check_floor = check_floor

    def density(self, x, t):
        psi, _ = self._wave(np.asarray(x, dtype=float), t)
        return np.abs(psi) ** 2

    def evaluate(self, x, t):
        x = np.asarray(x, dtype=float)
        psi, dpsi = self._wave(x, t)
        rho = np.abs(psi) ** 2
        if self.check_floor:
            peak = self._peak_density(t) if self._peak_density is not None \
                else float(np.max(rho))
            if np.any(rho < DENSITY_FLOOR_RATIO * peak):
                bad = np.asarray(rho < DENSITY_FLOOR_RATIO * peak).nonzero()
                raise DensityFloorError(
                    f"density below floor at t={t}, x={np.atleast_1d(x)[bad[0][:3]]}"
                )
        with np.errstate(invalid="ignore", divide="ignore"):
            v = self.hbar * np.imag(np.conj(psi) * dpsi) / (self.mass * rho)
        return v

    __call__ = evaluate


def velocity_from_scalar_wave(wave, mass, hbar, **kw) -> VelocityField:
    """Guidance field of a scalar wave given (psi, dpsi) analytically."""
    return VelocityField(wave, mass, hbar, **kw)


def velocity_from_spinor(spinor, mass, hbar, **kw) -> VelocityField:
    """Convective Pauli-current guidance field of a two-component spinor.

    ``spinor(z, t)`` returns (psi_p, psi_m, dpsi_p, dpsi_m);
    v = hbar Im(psi_p* dpsi_p + psi_m* dpsi_m) / (m (|psi_p|^2 + |psi_m|^2)).
    The spin-magnetization curl term is deliberately omitted.
    """

    def combined(z, t):
        pp, pm, dpp, dpm = spinor(z, t)
        # Same algebra as the scalar case once current and density are summed;
        # encode via an effective (psi, dpsi) pair with matching Im/|.|^2.
        rho = np.abs(pp) ** 2 + np.abs(pm) ** 2
        cur = np.imag(np.conj(pp) * dpp + np.conj(pm) * dpm)
        psi = np.sqrt(rho).astype(complex)
        with np.errstate(invalid="ignore", divide="ignore"):
            dpsi = 1j * np.where(rho > 0, cur / np.sqrt(rho), 0.0)
        return psi, dpsi

    return VelocityField(combined, mass, hbar, **kw)


def spin_orientation(psi_plus, psi_minus) -> SpinOrientation:
    """Polar angles read back from spinor components.

    theta = 2 atan2(|psi_minus|, |psi_plus|); phi is the relative phase
    arg(psi_minus) - arg(psi_plus) wrapped to [0, 2 pi).
    """
    ap, am = abs(psi_plus), abs(psi_minus)
    if ap == 0.0 and am == 0.0:
        raise NullSpinorError("spin orientation undefined for the null spinor")
    theta = 2.0 * math.atan2(am, ap)
    if ap == 0.0 or am == 0.0:
        phi = 0.0
    else:
        phi = (np.angle(psi_minus) - np.angle(psi_plus)) % (2.0 * math.pi)
    return SpinOrientation(theta=theta, phi=phi)


@dataclass(frozen=True)
class StepControl:
    """Fixed-scheme RK4 with per-interval step halving until convergence.

    A halving is accepted when the interval-end position moves by less than
    ``pos_tol + rel_tol * |displacement over the interval|``. The relative
    term lets particles that barely move (sub-tolerance oscillatory jitter)
    settle at coarse refinement while particles sweeping large distances are
    still resolved to a fixed fraction of their own motion.
    """

    pos_tol: float = 1e-9
    initial_refinement: int = 1
    max_refinements: int = 12
    rel_tol: float = 0.0


def _rk4_interval(v: VelocityField, x: np.ndarray, t0: float, t1: float,
                  refine: int) -> np.ndarray:
    """Advance the ensemble from t0 to t1 with ``refine`` RK4 substeps."""
    sub = np.linspace(t0, t1, refine + 1)
    for j in range(refine):
        t, h = sub[j], sub[j + 1] - sub[j]
        k1 = v(x, t)
        k2 = v(x + 0.5 * h * k1, t + 0.5 * h)
        k3 = v(x + 0.5 * h * k2, t + 0.5 * h)
        k4 = v(x + h * k3, t + h)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def _rk4_sweep(v: VelocityField, x0: np.ndarray, grid: np.ndarray, refine: int):
    """Single fixed-refinement RK4 pass along ``grid`` (no error control)."""
    x = np.array(x0, dtype=float)
    out = np.empty((grid.size, x.size))
    out[0] = x
    for i in range(grid.size - 1):
        x = _rk4_interval(v, x, grid[i], grid[i + 1], refine)
        out[i + 1] = x
    return out


def integrate_ensemble(v: VelocityField, x0, output_times,
                       step_ctrl: StepControl = StepControl()) -> np.ndarray:
    """Integrate dx/dt = v(x, t) for a whole ensemble on a shared grid.

    Each grid interval is crossed with RK4 whose substep count is doubled
    until one further halving moves the interval-end positions by less than
    pos_tol; the accepted value is the Richardson extrapolation of the final
    halving pair. The refinement level carries over to the next interval
    (dropping one level on entry) so effort concentrates where the field is
    violent.
    Deterministic: no embedded error estimators, only halving comparisons.
    Returns positions with shape (len(output_times), len(x0)).
    """
    x = np.atleast_1d(np.asarray(x0, dtype=float))
    grid = np.asarray(output_times, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("output_times must be strictly increasing")
    out = np.empty((grid.size, x.size))
    out[0] = x
    carry = step_ctrl.initial_refinement
    try:
        for i in range(grid.size - 1):
            t0, t1 = grid[i], grid[i + 1]
            refine = max(step_ctrl.initial_refinement, carry // 2)
            x_next = np.empty_like(x)
            active = np.arange(x.size)
            prev = _rk4_interval(v, x, t0, t1, refine)
            done_level = np.zeros(x.size, dtype=int)
            for _ in range(step_ctrl.max_refinements):
                refine *= 2
                cur = _rk4_interval(v, x[active], t0, t1, refine)
                allowed = step_ctrl.pos_tol \
                    + step_ctrl.rel_tol * np.abs(cur - x[active])
                settled = np.abs(cur - prev) < allowed
                idx = active[settled]
                # Richardson extrapolation of the halving pair: RK4's global
                # order-4 error makes cur + (cur - prev)/15 an order-5
                # estimate, suppressing the curvature-correlated residual
                # that would otherwise bias whole ensembles coherently.
                x_next[idx] = cur[settled] + (cur[settled] - prev[settled]) / 15.0
                done_level[idx] = refine
                active = active[~settled]
                prev = cur[~settled]
                if active.size == 0:
                    break
            else:
                raise StepUnderflowError(
                    f"RK4 not converged to pos_tol={step_ctrl.pos_tol} over "
                    f"[{t0:.6e}, {t1:.6e}] after {step_ctrl.max_refinements} "
                    f"halvings ({active.size} trajectories left)",
                    last_state=out[: i + 1],
                )
            # Typical particle's converged level seeds the next interval.
            carry = int(np.median(done_level))
            x = x_next
            out[i + 1] = x
    except DensityFloorError as exc:
        raise StepUnderflowError(
            f"integration aborted at the density floor: {exc}",
            last_state=None,
        ) from exc
    return out


def integrate_trajectory(v: VelocityField, x0: float, t0: float, t1: float,
                         step_ctrl: StepControl = StepControl(),
                         output_times=None, stream_id: int = 0) -> Trajectory:
    """Single-trajectory convenience wrapper around integrate_ensemble."""
    if not t1 > t0:
        raise ValueError("need t1 > t0")
    if output_times is None:
        output_times = np.linspace(t0, t1, 101)
    pos = integrate_ensemble(v, [x0], output_times, step_ctrl)[:, 0]
    return Trajectory(times=np.asarray(output_times, float), positions=pos,
                      initial_position=x0, stream_id=stream_id)


def sample_initial_positions(density, n: int, rng: np.random.Generator,
                             support=None) -> np.ndarray:
    """Quantum-equilibrium draws of initial positions.

    ``density`` is either a GaussianPacket-like object with .center/.sigma
    (sampled exactly with normal variates) or a callable probability density;
    callables are sampled by inverse CDF on a fine grid over ``support``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return np.empty(0)
    if hasattr(density, "center") and hasattr(density, "sigma"):
        return density.center + density.sigma * rng.standard_normal(n)
    if support is None:
        raise ValueError("callable densities need an explicit support interval")
    lo, hi = support
    grid = np.linspace(lo, hi, 20001)
    pdf = np.asarray(density(grid), dtype=float)
    cdf = cumulative_simpson(pdf, x=grid, initial=0.0)
    cdf /= cdf[-1]
    # Make the CDF strictly increasing for interpolation.
    cdf = np.maximum.accumulate(cdf)
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    return np.interp(rng.random(n), cdf[keep], grid[keep])


@dataclass(frozen=True)
class EquivarianceReport:
    statistic: float
    threshold: float
    dof: int
    bins: int
    passed: bool


def equivariance_check(positions, density, support, bins: int = 50,
                       confidence: float = 0.99) -> EquivarianceReport:
    """Chi-square test of sampled positions against a target density.

    Bin edges are placed at equal probability mass of ``density`` (computed
    by cumulative Simpson on a fine grid over ``support``), so every bin has
    expected count N/bins. Passes when the statistic is below the
    ``confidence`` quantile of chi-square with bins-1 degrees of freedom.
    """
    positions = np.asarray(positions, dtype=float)
    n = positions.size
    expected = n / bins
    if expected < 5.0:
        raise InsufficientSampleError(
            f"expected bin count {expected:.2f} < 5 (n={n}, bins={bins})"
        )
    lo, hi = support
    grid = np.linspace(lo, hi, 40001)
    pdf = np.asarray(density(grid), dtype=float)
    cdf = cumulative_simpson(pdf, x=grid, initial=0.0)
    cdf /= cdf[-1]
    cdf = np.maximum.accumulate(cdf)
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    edges = np.interp(np.linspace(0.0, 1.0, bins + 1)[1:-1], cdf[keep], grid[keep])
    edges = np.concatenate(([-np.inf], edges, [np.inf]))
    counts, _ = np.histogram(positions, bins=edges)
    statistic = float(np.sum((counts - expected) ** 2) / expected)
    dof = bins - 1
    threshold = float(stats.chi2.ppf(confidence, dof))
    return EquivarianceReport(statistic=statistic, threshold=threshold,
                              dof=dof, bins=bins, passed=statistic < threshold)


def ordering_preserved(positions: np.ndarray) -> bool:
    """1-D no-crossing check for ensemble positions of shape (times, n)."""
    order0 = np.argsort(positions[0], kind="stable")
    sorted0 = positions[:, order0]
    return bool(np.all(np.diff(sorted0, axis=1) >= 0))
