"""Entangled-pair measurement: singlet algebra, causal runs, correlations."""
import math

import numpy as np
import pytest

from pilotwave.constants import DEFAULT_CONSTANTS
from pilotwave.errors import DomainError
from pilotwave.eprb import (
    SINGLET,
    EPRBModel,
    PairState,
    pair_spinor,
    singlet_fidelity,
    singlet_from_product,
)
from pilotwave.guidance import SpinOrientation
from pilotwave.quadrature import QuadratureSpec, integrate_complex


@pytest.fixture(scope="module")
def model():
    return EPRBModel()


def test_singlet_is_normalized_and_antisymmetric():
    assert np.vdot(SINGLET, SINGLET).real == pytest.approx(1.0)
    # swap of the two particles flips the sign: components |+-> and |-+>
    swapped = SINGLET[[0, 2, 1, 3]]
    assert np.allclose(swapped, -SINGLET)


@pytest.mark.parametrize("theta,phi", [(0.0, 0.0), (1.1, 2.2),
                                       (math.pi / 2, 4.0), (2.9, 0.3)])
def test_antisymmetrized_product_is_singlet(theta, phi):
    state = singlet_from_product(theta, phi)
    assert singlet_fidelity(state) == pytest.approx(1.0, abs=1e-12)


def test_pair_spinor_normalization():
    s = pair_spinor(1.3, 0.8)
    assert np.vdot(s, s).real == pytest.approx(1.0)


def test_pair_state_constraints():
    p = PairState.from_A(0.0, 1e-5, 0.0, -2e-5, theta_A=1.0, phi_A=0.5)
    assert p.spin_B.theta == pytest.approx(math.pi - 1.0)
    with pytest.raises(ValueError):
        PairState(0, 0, 0, 0,
                  spin_A=SpinOrientation(1.0, 0.0),
                  spin_B=SpinOrientation(1.0, 0.0))


def test_step1_wave_reduces_to_singlet_spin(model):
    # At t=0 the 4-vector at symmetric points is proportional to the singlet.
    ev = model.step1_wavefunction(0.0)
    vec = ev(0.0, 0.0)[:, ]
    vec = vec / np.linalg.norm(vec)
    assert singlet_fidelity(vec) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        model.step1_wavefunction(-1.0)


def test_step1_wave_matches_joint_density(model):
    t = 0.5 * model.step_duration
    ev = model.step1_wavefunction(t)
    rho = model.joint_density(t)
    z_a = np.linspace(-4e-4, 4e-4, 7)
    z_b = np.linspace(-3e-4, 3e-4, 7)
    vec = ev(z_a, z_b)
    assert np.allclose(np.sum(np.abs(vec) ** 2, axis=0), rho(z_a, z_b),
                       rtol=1e-10)


def test_b_marginal_is_stationary_source_gaussian(model):
    # While A is being measured, B's position density never changes.
    sigma = model.packet.sigma
    z = np.linspace(-5 * sigma, 5 * sigma, 11)
    rho0 = model.b_marginal_density(z, 0.0)
    rho1 = model.b_marginal_density(z, model.step_duration)
    assert np.array_equal(rho0, rho1)
    total = integrate_complex(lambda s: model.b_marginal_density(s, 0.0),
                              -8 * sigma, 8 * sigma,
                              QuadratureSpec(panels=128, abs_tol=1e-12)).real
    assert total == pytest.approx(1.0, abs=1e-10)


def test_conditional_B_state(model):
    ori, chi = model.conditional_B_state(1)
    assert ori.theta == pytest.approx(math.pi)
    assert np.allclose(chi, [0.0, 1.0])
    ori, chi = model.conditional_B_state(-1)
    assert ori.theta == 0.0
    assert np.allclose(chi, [1.0, 0.0])
    with pytest.raises(ValueError):
        model.conditional_B_state(0)


def test_step2_polarization(model):
    delta = 0.8
    assert model.step2_polarization(1, delta) == pytest.approx(math.pi - delta)
    assert model.step2_polarization(-1, delta) == pytest.approx(delta)
    with pytest.raises(DomainError):
        model.step2_polarization(1, -0.1)
    with pytest.raises(DomainError):
        model.step2_polarization(1, 3.3)


def test_perfect_anticorrelation_aligned(model):
    # delta = 0: B's threshold is at -+inf given A's outcome, so the results
    # are opposite for every pair regardless of positions.
    rows = model.correlation_study([0.0], 500, seed=6)
    assert rows[0].correlation == -1.0
    assert rows[0].p_pp == 0.0 and rows[0].p_mm == 0.0


def test_perfect_correlation_antialigned(model):
    rows = model.correlation_study([math.pi], 500, seed=6)
    assert rows[0].correlation == +1.0
    assert rows[0].p_pm == 0.0 and rows[0].p_mp == 0.0


def test_correlation_tracks_minus_cosine(model):
    # Statistical check at moderate n; the acceptance run uses 10^4 pairs.
    deltas = [math.pi / 4, math.pi / 2, 3 * math.pi / 4]
    rows = model.correlation_study(deltas, 4000, seed=2)
    for row in rows:
        se = 3.0 / math.sqrt(row.n)
        assert abs(row.correlation + math.cos(row.delta)) < se
        total = row.p_pp + row.p_pm + row.p_mp + row.p_mm
        assert total == pytest.approx(1.0, abs=1e-12)


def test_outcome_table_structure_and_determinism(model):
    t1 = model.outcome_table([0.3], 50, seed=9)
    t2 = model.outcome_table([0.3], 50, seed=9)
    assert np.array_equal(t1.positions, t2.positions)
    assert np.array_equal(t1.outcomes_B[0.3], t2.outcomes_B[0.3])
    assert t1.positions.shape == (50, 3)
    assert set(np.unique(t1.outcomes_A)) <= {-1, 1}
    with pytest.raises(ValueError):
        model.outcome_table([0.3], 0, seed=0)


def test_causal_pair_run_histories(model):
    pair = PairState.from_A(0.0, 0.7 * model.packet.sigma,
                            0.0, -0.2 * model.packet.sigma,
                            theta_A=math.pi / 3, phi_A=0.4)
    run = model.causal_pair_run(pair, delta=math.pi / 2)
    # B's spin mirrors A's at every recorded instant.
    assert np.allclose(run.theta_B, math.pi - run.theta_A)
    assert np.allclose(np.mod(run.phi_A - run.phi_B, 2 * math.pi), math.pi)
    # B never moves during A's measurement.
    assert np.all(run.z_B == pair.z0_B)
    # A's outcome obeys the threshold law for its initial position.
    assert run.record.outcome_A == model.outcome_A(pair)
    # The recorded outcome pair matches the deterministic functions.
    assert run.record.outcome_B == model.outcome_B(
        pair, run.record.outcome_A, math.pi / 2)
    # A ends firmly in one beam: polarization fully collapsed.
    final = run.theta_A[-1]
    assert final < 0.1 or final > math.pi - 0.1


def test_outcome_B_uses_rotated_position(model):
    # At delta = pi/2 with theta' = pi/2 the threshold is 0 and the decision
    # depends only on -x0_B.
    pair_pos = PairState.from_A(0.0, 1e-4, -2e-4, 5e-6,
                                theta_A=math.pi / 2, phi_A=0.0)
    out_a = model.outcome_A(pair_pos)
    out_b = model.outcome_B(pair_pos, out_a, math.pi / 2)
    assert out_b == (1 if -pair_pos.x0_B > 0 else -1)
