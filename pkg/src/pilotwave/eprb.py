"""Two-particle spin correlations measured one analyzer at a time.

Particle A undergoes an ordinary beam-splitting measurement while B flies
free; B's spin orientation stays rigidly opposite to A's along the way.
Once A's packets have decohered, B is left in the opposite eigenstate and
is measured by its own analyzer rotated by delta, with its hidden position
projected onto the rotated axis. Outcomes on both sides follow the
deterministic threshold law, which reproduces E(delta) = -cos(delta) in
distribution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import DomainError
from .gaussian import GaussianPacket
from .guidance import SpinOrientation, StepControl, integrate_ensemble
from .rng import seeded_stream
from .stern_gerlach import MagnetSpec, SternGerlachModel

SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
# Basis order for 4-component spin vectors: |++>, |+->, |-+>, |-->.


def pair_spinor(theta: float, phi: float) -> np.ndarray:
    """Single-particle spinor (cos(t/2) e^{-i phi/2}, sin(t/2) e^{+i phi/2})."""
    return np.array([
        math.cos(0.5 * theta) * np.exp(-0.5j * phi),
        math.sin(0.5 * theta) * np.exp(+0.5j * phi),
    ])


@dataclass(frozen=True)
class SingletState:
    """Spatially extended singlet: Gaussian envelopes, antisymmetric spin."""

    packet_A: GaussianPacket
    packet_B: GaussianPacket

    @property
    def spin_part(self) -> np.ndarray:
        return SINGLET.copy()

    def envelope(self, which: str, x, z):
        """2-D Gaussian envelope f(r) for particle 'A' or 'B'."""
        pk = self.packet_A if which == "A" else self.packet_B
        s2 = pk.sigma * pk.sigma
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        return (2.0 * math.pi * s2) ** -0.5 * np.exp(
            -((x - pk.center) ** 2 + (z - pk.center) ** 2) / (4.0 * s2)
        )


@dataclass(frozen=True)
class PairState:
    """Hidden variables of one pair: positions and opposite initial spins."""

    x0_A: float
    z0_A: float
    x0_B: float
    z0_B: float
    spin_A: SpinOrientation
    spin_B: SpinOrientation

    def __post_init__(self):
        if abs(self.spin_A.theta + self.spin_B.theta - math.pi) > 1e-12:
            raise ValueError("pair spins must satisfy theta_B = pi - theta_A")
        dphi = (self.spin_A.phi - self.spin_B.phi) % (2.0 * math.pi)
        if abs(dphi - math.pi) > 1e-12:
            raise ValueError("pair spins must satisfy phi_B = phi_A - pi")

    @classmethod
    def from_A(cls, x0_A, z0_A, x0_B, z0_B, theta_A, phi_A) -> "PairState":
        return cls(
            x0_A=x0_A, z0_A=z0_A, x0_B=x0_B, z0_B=z0_B,
            spin_A=SpinOrientation(theta_A, phi_A % (2.0 * math.pi)),
            spin_B=SpinOrientation(math.pi - theta_A,
                                   (phi_A - math.pi) % (2.0 * math.pi)),
        )


@dataclass(frozen=True)
class MeasurementRecord:
    outcome_A: int
    outcome_B: int
    delta: float
    t0: float
    transit_time: float
    decoherence_time: float

    def __post_init__(self):
        if self.outcome_A not in (-1, 1) or self.outcome_B not in (-1, 1):
            raise ValueError("outcomes must be +-1")


class EPRBModel:
    """Both analyzers share one magnet/packet configuration."""

    def __init__(self, magnet: MagnetSpec = MagnetSpec(),
                 packet: Optional[GaussianPacket] = None,
                 constants: PhysicalConstants = DEFAULT_CONSTANTS):
        self.sg = SternGerlachModel(magnet, packet, constants)
        self.packet = self.sg.packet
        self.constants = constants

    @property
    def step_duration(self) -> float:
        """Duration of one measurement step: transit plus decoherence."""
        return self.sg.magnet.transit_time + self.sg.decoherence_time()

    def singlet(self) -> SingletState:
        return SingletState(packet_A=self.packet, packet_B=self.packet)

    # -- step-1 wave machinery -------------------------------------------

    def _envelopes(self, z, t: float):
        """Unit-weight displaced envelopes f+-(z, t) of A's components."""
        s = self.sg.spinor_total(math.pi / 2.0, 0.0, z, t)
        root2 = math.sqrt(2.0)
        return root2 * s.psi_plus, root2 * s.psi_minus

    def step1_wavefunction(self, t: float):
        """Evaluator (z_A, z_B) -> 4-component spin amplitudes at total t.

        Psi = f(z_B) (f+(z_A)|+-> - f-(z_A)|-+>)/sqrt(2); x factors are
        spectators and omitted.
        """
        if t < 0:
            raise DomainError("step-1 time must be >= 0")
        sigma = self.packet.sigma

        def evaluate(z_a, z_b):
            fp, fm = self._envelopes(z_a, t)
            fb = (2.0 * math.pi * sigma * sigma) ** -0.25 * np.exp(
                -np.asarray(z_b, dtype=float) ** 2 / (4.0 * sigma * sigma)
            )
            inv_root2 = 1.0 / math.sqrt(2.0)
            zero = np.zeros(np.broadcast(np.asarray(z_a),
                                         np.asarray(z_b)).shape, dtype=complex)
            return np.stack([
                zero,
                inv_root2 * fb * fp,
                -inv_root2 * fb * fm,
                zero,
            ])

        return evaluate

    def joint_density(self, t: float):
        """(z_A, z_B) -> probability density during step 1 (product form)."""
        sigma = self.packet.sigma
        model = self.sg

        def rho(z_a, z_b):
            c = model.packet_center(t)
            g = (2.0 * math.pi * sigma * sigma) ** -0.5
            z_a = np.asarray(z_a, dtype=float)
            z_b = np.asarray(z_b, dtype=float)
            rho_a = 0.5 * g * (
                np.exp(-((z_a - c) ** 2) / (2.0 * sigma * sigma))
                + np.exp(-((z_a + c) ** 2) / (2.0 * sigma * sigma))
            )
            rho_b = g * np.exp(-(z_b ** 2) / (2.0 * sigma * sigma))
            return rho_a * rho_b

        return rho

    def b_marginal_density(self, z, t: float):
        """B's position density during step 1: the unchanged source Gaussian."""
        sigma = self.packet.sigma
        z = np.asarray(z, dtype=float)
        return (2.0 * math.pi * sigma * sigma) ** -0.5 * np.exp(
            -(z ** 2) / (2.0 * sigma * sigma)
        )

    def conditional_B_state(self, outcome_A: int):
        """B's spinor after A's result is registered: the opposite eigenstate."""
        if outcome_A == 1:
            return SpinOrientation(theta=math.pi), np.array([0.0, 1.0], complex)
        if outcome_A == -1:
            return SpinOrientation(theta=0.0), np.array([1.0, 0.0], complex)
        raise ValueError("outcome_A must be +-1")

    # -- outcomes ---------------------------------------------------------

    def step2_polarization(self, outcome_A: int, delta: float) -> float:
        """B's polar angle relative to the rotated analyzer axis."""
        if not 0.0 <= delta <= math.pi:
            raise DomainError(f"delta must lie in [0, pi], got {delta}")
        return (math.pi - delta) if outcome_A == 1 else delta

    def outcome_A(self, pair: PairState) -> int:
        z_th = self.sg.threshold_position(pair.spin_A.theta)
        return 1 if pair.z0_A > z_th else -1

    def outcome_B(self, pair: PairState, outcome_a: int, delta: float) -> int:
        theta_prime = self.step2_polarization(outcome_a, delta)
        z_th = self.sg.threshold_position(theta_prime)
        z_rot = pair.z0_B * math.cos(delta) - pair.x0_B * math.sin(delta)
        return 1 if z_rot > z_th else -1

    # -- full single-pair dynamics ---------------------------------------

    def causal_pair_run(self, pair: PairState, delta: float,
                        n_times: int = 40) -> "PairRun":
        """Step-1 trajectories and spin histories plus both outcomes.

        A's position follows the single-particle guidance field; B stands
        still while its spin mirrors A's: theta_B = pi - theta_A(z_A(t), t)
        and phi_B = phi_A(z_A(t), t) - pi at every instant.
        """
        theta_a0, phi_a0 = pair.spin_A.theta, pair.spin_A.phi
        wp, wm = math.cos(0.5 * theta_a0), math.sin(0.5 * theta_a0)
        with np.errstate(divide="ignore"):
            log_ratio = np.log(wp) - np.log(wm)
        times = np.linspace(0.0, self.step_duration, n_times)
        times = np.unique(np.concatenate((times,
                                          [self.sg.magnet.transit_time])))
        field = self.sg.velocity_field(float(log_ratio))
        z_a = integrate_ensemble(
            field, [pair.z0_A], times,
            StepControl(pos_tol=1e-10, initial_refinement=2),
        )[:, 0]
        theta_a = np.empty_like(z_a)
        phi_a = np.empty_like(z_a)
        for i, t in enumerate(times):
            th, ph = self.sg.spin_angles(theta_a0, phi_a0,
                                         np.array(z_a[i]), t)
            theta_a[i] = float(th)
            phi_a[i] = float(ph)
        theta_b = math.pi - theta_a
        phi_b = np.mod(phi_a - math.pi, 2.0 * math.pi)
        out_a = 1 if z_a[-1] >= 0.0 else -1
        out_b = self.outcome_B(pair, out_a, delta)
        record = MeasurementRecord(
            outcome_A=out_a, outcome_B=out_b, delta=delta, t0=0.0,
            transit_time=self.sg.magnet.transit_time,
            decoherence_time=self.sg.decoherence_time(),
        )
        return PairRun(record=record, times=times, z_A=z_a,
                       z_B=np.full_like(z_a, pair.z0_B),
                       theta_A=theta_a, phi_A=phi_a,
                       theta_B=theta_b, phi_B=phi_b, pair=pair)

    # -- ensemble statistics ----------------------------------------------

    def sample_pairs(self, n: int, seed: int):
        """Hidden-variable draws for n pairs.

        Stream 0 holds the three Gaussian positions (z0_A, z0_B, x0_B);
        stream 1 the pair orientation: theta0_A ~ U[0, pi], phi0_A ~ U[0, 2 pi).
        """
        pos = seeded_stream(seed, 0).standard_normal((n, 3)) * self.packet.sigma
        ang = seeded_stream(seed, 1)
        thetas = ang.uniform(0.0, math.pi, n)
        phis = ang.uniform(0.0, 2.0 * math.pi, n)
        return pos, thetas, phis

    def outcome_table(self, deltas: Sequence[float], n: int, seed: int
                      ) -> "OutcomeTable":
        """Per-pair deterministic outcomes for every analyzer angle."""
        if n < 1:
            raise ValueError("n must be >= 1")
        pos, thetas, phis = self.sample_pairs(n, seed)
        z_th_a = np.array([self.sg.threshold_position(t) for t in thetas])
        out_a = np.where(pos[:, 0] > z_th_a, 1, -1)
        out_b = {}
        for delta in deltas:
            theta_prime = np.where(out_a == 1, math.pi - delta, delta)
            z_th_b = np.array([self.sg.threshold_position(t)
                               for t in theta_prime])
            z_rot = pos[:, 1] * math.cos(delta) - pos[:, 2] * math.sin(delta)
            out_b[float(delta)] = np.where(z_rot > z_th_b, 1, -1)
        return OutcomeTable(positions=pos, thetas_A=thetas, phis_A=phis,
                            outcomes_A=out_a, outcomes_B=out_b)

    def correlation_study(self, deltas: Sequence[float], n: int, seed: int):
        """Empirical E(delta) and joint outcome frequencies over n pairs."""
        table = self.outcome_table(deltas, n, seed)
        out_a = table.outcomes_A
        rows = []
        for delta in deltas:
            out_b = table.outcomes_B[float(delta)]
            rows.append(CorrelationRow(
                delta=float(delta),
                correlation=float(np.mean(out_a * out_b)),
                p_pp=float(np.mean((out_a == 1) & (out_b == 1))),
                p_pm=float(np.mean((out_a == 1) & (out_b == -1))),
                p_mp=float(np.mean((out_a == -1) & (out_b == 1))),
                p_mm=float(np.mean((out_a == -1) & (out_b == -1))),
                n=n,
            ))
        return rows


@dataclass
class PairRun:
    record: MeasurementRecord
    times: np.ndarray
    z_A: np.ndarray
    z_B: np.ndarray
    theta_A: np.ndarray
    phi_A: np.ndarray
    theta_B: np.ndarray
    phi_B: np.ndarray
    pair: PairState


@dataclass
class OutcomeTable:
    """Hidden variables and outcomes for a pair ensemble.

    ``positions`` columns: z0_A, z0_B, x0_B. ``outcomes_B`` maps each
    analyzer angle to the per-pair B outcomes.
    """

    positions: np.ndarray
    thetas_A: np.ndarray
    phis_A: np.ndarray
    outcomes_A: np.ndarray
    outcomes_B: dict


@dataclass(frozen=True)
class CorrelationRow:
    delta: float
    correlation: float
    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float
    n: int


def singlet_from_product(theta_A: float, phi_A: float) -> np.ndarray:
    """Antisymmetrized product of opposite-spin states, normalized.

    For any (theta_A, phi_A) the result is the singlet up to a global phase;
    returned in the |++>, |+->, |-+>, |--> basis.
    """
    a = pair_spinor(theta_A, phi_A)
    b = pair_spinor(math.pi - theta_A, phi_A - math.pi)
    tensor = np.kron(a, b) - np.kron(b, a)
    norm = np.linalg.norm(tensor)
    if norm == 0.0:
        raise ValueError("degenerate pair: spins are parallel")
    return tensor / norm


def singlet_fidelity(state: np.ndarray) -> float:
    """|<singlet|state>|^2 for a normalized 4-component spin vector."""
    return float(abs(np.vdot(SINGLET, state)) ** 2)
