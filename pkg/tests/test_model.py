"""Tests for the bivector model: observables, averages and locality conditions."""

from cliffbell.algebra import ONE, ZERO, Direction, bivector, cross, dot, max_abs, norm, pseudoscalar, reverse
from cliffbell.model import (
    ORIENTATIONS,
    DegeneratePairError,
    EnsembleMeasure,
    Orientation,
    SignTriple,
    bivector_identity_residual,
    commutator_relation_residual,
    ensemble_average,
    event_level_correlation,
    event_readout,
    factorizability_check,
    joint_expectation,
    normalized_axis,
    observable,
    oriented_commutator,
    oriented_product,
    outcome_independence_check,
    parameter_independence_check,
    reflection_residual,
    sign_rule_bivector,
    signed_observable,
)

from .constants import EPS

import numpy as np
import pytest
from numpy.testing import assert_allclose


def test_orientation_trivector():
    assert Orientation.RIGHT.trivector == pseudoscalar(1.0)
    assert Orientation.LEFT.trivector == pseudoscalar(-1.0)
    assert [mu.sign for mu in ORIENTATIONS] == [1, -1]


@pytest.mark.parametrize('mu', ORIENTATIONS)
def test_observable_is_unit_bivector(random_directions, mu):
    for (n,) in random_directions(1):
        A = observable(n, mu)
        assert norm(A) == pytest.approx(1.0, abs=EPS)
        assert max_abs(oriented_product(A, A, mu) + ONE) <= EPS
        assert max_abs(A + reverse(A)) == 0.0


@pytest.mark.parametrize('mu', ORIENTATIONS)
def test_bivector_identity(random_directions, mu):
    for a, b in random_directions(2):
        assert max_abs(bivector_identity_residual(a, b, mu)) <= EPS


def test_single_expectation_is_exact_zero(random_directions, measure):
    for (n,) in random_directions(1):
        assert ensemble_average(lambda mu, n=n: observable(n, mu), measure) == ZERO


def test_joint_expectation(random_directions, measure):
    for a, b in random_directions(2):
        joint = joint_expectation(a, b, measure)
        assert joint.scalar == pytest.approx(-dot(a, b), abs=EPS)
        assert_allclose(joint.coeffs[1:], 0.0, atol=1e-15)


def test_joint_expectation_perfect_correlation(random_directions):
    for (a,) in random_directions(1, 20):
        assert joint_expectation(a, a).scalar == pytest.approx(-1.0, abs=1e-15)
    x = Direction(1, 0, 0)
    assert joint_expectation(x, x).scalar == -1.0


def test_joint_expectation_with_biased_measure_keeps_bivector_part():
    a, b = Direction(1, 0, 0), Direction(0, 1, 0)
    joint = joint_expectation(a, b, EnsembleMeasure(weights={1: 1.0, -1: 0.0}))
    assert joint.scalar == 0.0
    assert max_abs(joint) == pytest.approx(1.0)


@pytest.mark.parametrize('mu', ORIENTATIONS)
@pytest.mark.parametrize('normalized', [False, True])
def test_commutator_relation(random_directions, mu, normalized):
    for a, b in random_directions(2):
        assert max_abs(commutator_relation_residual(a, b, mu, normalized=normalized)) <= EPS


def test_commutator_relation_parallel_inputs():
    a = Direction(0, 0, 1)
    assert commutator_relation_residual(a, a, Orientation.RIGHT) == ZERO
    with pytest.raises(DegeneratePairError):
        commutator_relation_residual(a, a, Orientation.RIGHT, normalized=True)
    with pytest.raises(DegeneratePairError):
        commutator_relation_residual(a, -a, Orientation.LEFT, normalized=True)


def test_oriented_commutator_differs_in_sign_between_orientations():
    a, b = observable(Direction(1, 0, 0), 1), observable(Direction(0, 1, 0), 1)
    assert oriented_commutator(a, b, Orientation.RIGHT) == -oriented_commutator(a, b, Orientation.LEFT)


def test_normalized_axis():
    z, sin_theta = normalized_axis(Direction(1, 0, 0), Direction.from_angle(np.pi / 6))
    assert_allclose(z.array, [0.0, 0.0, 1.0])
    assert sin_theta == pytest.approx(0.5)


@pytest.mark.parametrize('mu', ORIENTATIONS)
def test_parameter_independence(random_directions, mu):
    for a, b, b_prime in random_directions(3):
        verdict = parameter_independence_check(a, b, b_prime, mu, EPS)
        assert verdict.passed, verdict.residuals
        assert len(verdict.residuals) == 4


def test_reflection_identity(random_directions):
    for a, b in random_directions(2):
        assert max_abs(reflection_residual(a, b)) <= EPS


def test_outcome_independence(random_directions):
    for a, b in random_directions(2):
        verdict = outcome_independence_check(a, b, EPS)
        assert verdict.passed, verdict.residuals
        assert len(verdict.residuals) == 4


def test_outcome_independence_rejects_parallel_pair():
    a = Direction(0, 1, 0)
    with pytest.raises(DegeneratePairError):
        outcome_independence_check(a, a)


@pytest.mark.parametrize('sA', [1, -1])
@pytest.mark.parametrize('sB', [1, -1])
def test_sign_rule(sA, sB):
    a, b = Direction(1, 0, 0), Direction(0, 1, 0)
    assert sign_rule_bivector(a, b, sA, sB) == signed_observable(Direction(0, 0, 1), sA * sB)
    assert SignTriple.from_senses(sA, sB).sC == sA * sB


def test_sign_triple_rejects_invalid_sense():
    with pytest.raises(ValueError):
        SignTriple.from_senses(0, 1)


@pytest.mark.parametrize('mu', ORIENTATIONS)
def test_factorizability(random_directions, mu):
    for a, b in random_directions(2):
        assert factorizability_check(a, b, mu, EPS).passed


@pytest.mark.parametrize('mu', ORIENTATIONS)
def test_event_readout(mu):
    assert event_readout(Direction(0, 0, 1), mu) == int(mu)
    assert event_readout(Direction.from_angle(2.0), mu) == int(mu)


def test_event_level_correlation_differs_from_algebra():
    a = Direction(1, 0, 0)
    assert event_level_correlation(a, a) == 1.0
    assert joint_expectation(a, a).scalar == -1.0


def test_ensemble_measure_defaults_to_uniform():
    measure = EnsembleMeasure()
    assert measure.is_uniform()
    assert measure.weights == {1: 0.5, -1: 0.5}
    assert [w for _, w in measure.items()] == [0.5, 0.5]


def test_ensemble_measure_accepts_orientation_keys():
    measure = EnsembleMeasure(weights={Orientation.RIGHT: 0.25, Orientation.LEFT: 0.75})
    assert measure.weight(Orientation.LEFT) == 0.75
    assert not measure.is_uniform()


@pytest.mark.parametrize('weights', [{1: 0.6, -1: 0.6}, {1: -0.5, -1: 1.5}, {1: np.nan, -1: 0.5}])
def test_ensemble_measure_rejects(weights):
    with pytest.raises(ValueError):
        EnsembleMeasure(weights=weights)


def test_ensemble_measure_rejects_unknown_orientation():
    with pytest.raises(ValueError):
        EnsembleMeasure(weights={2: 1.0})


def test_bivector_identity_literal_example():
    a, b = Direction(1, 0, 0), Direction(0, 1, 0)
    for mu in ORIENTATIONS:
        expected = -bivector(cross(a, b)) * float(mu)
        assert oriented_product(observable(a, mu), observable(b, mu), mu) == expected
