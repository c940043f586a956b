"""Tests for the vectorized kernels against the scalar API."""

from cliffbell import batch
from cliffbell.algebra import BLADES, Direction, Multivector, NonInvertibleError, blade, geometric_product
from cliffbell.chsh import ChshConfig, chsh_average, cosine_combination, cross_dot_model, cross_dot_quantum, model_bound, seevinck_average
from cliffbell.malus import Preparation, malus_expectation
from cliffbell.model import EnsembleMeasure, event_readout, joint_expectation
from cliffbell.quantum import NonHermitianError, bell_expectation, polarized_expectation, spin_correlation

from .constants import EPS, EXTREMAL_ANGLES_DEG, NCONFIGS, TSIRELSON

import numpy as np
import pytest
from numpy.random import default_rng
from numpy.testing import assert_allclose, assert_array_equal
from scipy.spatial.transform import Rotation

BIASED = EnsembleMeasure(weights={1: 0.25, -1: 0.75})


@pytest.fixture
def settings(rng):
    """Random CHSH settings of shape (NCONFIGS, 4, 3)."""
    v = rng.standard_normal((NCONFIGS, 4, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _configs(settings):
    return [ChshConfig(*row) for row in settings]


def test_cayley_reproduces_basis_table():
    eye = np.eye(8)
    for j, name_j in enumerate(BLADES):
        for k, name_k in enumerate(BLADES):
            assert_array_equal(batch.product(eye[j], eye[k]), geometric_product(blade(name_j), blade(name_k)).coeffs)


def test_product_matches_scalar_product():
    rng = default_rng(3)
    x, y = rng.uniform(-1, 1, (2, 50, 8))
    expected = [geometric_product(Multivector(xi), Multivector(yi)).coeffs for xi, yi in zip(x, y, strict=True)]
    assert_allclose(batch.product(x, y), expected, atol=EPS)


def test_product_broadcasts():
    rng = default_rng(4)
    x = rng.uniform(-1, 1, (5, 3, 8))
    assert batch.product(x, batch.PSEUDOSCALAR).shape == (5, 3, 8)
    assert_allclose(batch.product(batch.PSEUDOSCALAR, batch.PSEUDOSCALAR), -batch.ONE)


@pytest.mark.parametrize('rho', [None, BIASED])
def test_joint_expectation(settings, rho):
    a, b = settings[:, 0], settings[:, 2]
    expected = [joint_expectation(ai, bi, rho).coeffs for ai, bi in zip(a, b, strict=True)]
    assert_allclose(batch.joint_expectation(a, b, rho), expected, atol=EPS)


@pytest.mark.parametrize('rho', [None, BIASED])
def test_chsh_quantities(settings, rho):
    cfgs = _configs(settings)
    assert_allclose(batch.chsh_average(settings, rho), [chsh_average(cfg, rho).coeffs for cfg in cfgs], atol=EPS)
    assert_allclose(batch.seevinck_average(settings, rho), [seevinck_average(cfg, rho).coeffs for cfg in cfgs], atol=EPS)
    assert_allclose(batch.cosine_combination(settings), [cosine_combination(cfg) for cfg in cfgs], atol=EPS)
    assert_allclose(batch.cross_dot_model(settings), [cross_dot_model(cfg) for cfg in cfgs], atol=EPS)
    assert_allclose(batch.cross_dot_quantum(settings), [cross_dot_quantum(cfg) for cfg in cfgs], atol=EPS)
    assert_allclose(batch.model_bound(settings), [model_bound(cfg) for cfg in cfgs], atol=EPS)


def test_quantum_quantities(settings):
    cfgs = _configs(settings)
    assert_allclose(batch.bell_expectation(settings), [bell_expectation(cfg) for cfg in cfgs], atol=EPS)
    a, b = settings[:, 0], settings[:, 2]
    assert_allclose(batch.spin_correlation(a, b), [spin_correlation(ai, bi) for ai, bi in zip(a, b, strict=True)], atol=EPS)
    assert np.all(batch.bell_squared_residual(settings) <= EPS)


def test_qm_chsh_bound_at_extremum():
    angles = np.deg2rad(EXTREMAL_ANGLES_DEG)
    d = np.stack([np.cos(angles), np.sin(angles), np.zeros(4)], axis=-1)[np.newaxis]
    bound = batch.qm_chsh_bound(d)
    assert bound.bound[0] == pytest.approx(TSIRELSON, abs=EPS)
    assert bound.bell_squared_expectation[0] == pytest.approx(8.0, abs=EPS)
    assert abs(batch.bell_expectation(d)[0]) == pytest.approx(TSIRELSON, abs=EPS)


@pytest.mark.parametrize('s', [1, -1])
def test_malus_quantities(settings, s):
    a, p = settings[:, 0], settings[:, 1]
    expected = [malus_expectation(Direction(ai), Preparation(p=Direction(pi), s=s)).coeffs for ai, pi in zip(a, p, strict=True)]
    assert_allclose(batch.malus_expectation(a, p, s), expected, atol=EPS)
    polarized = [polarized_expectation(ai, pi, s) for ai, pi in zip(a, p, strict=True)]
    assert_allclose(batch.polarized_expectation(a, p, s), polarized, atol=EPS)


def test_polarized_state_rejects_spin():
    with pytest.raises(ValueError):
        batch.polarized_state(np.array([[0.0, 0.0, 1.0]]), 0)


def test_versor_inverse(settings):
    B = batch.dual(settings[:, 0])
    assert_allclose(batch.versor_inverse(B), -B, atol=EPS)
    with pytest.raises(NonInvertibleError):
        batch.versor_inverse(np.vstack([B, np.zeros(8)]))


def test_normalized_axis_marks_parallel_rows():
    a = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    b = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    z, sin_theta, valid = batch.normalized_axis(a, b)
    assert_array_equal(valid, [True, False, False])
    assert_allclose(z[0], [0.0, 0.0, 1.0])
    assert_array_equal(z[1:], 0.0)
    assert_allclose(sin_theta, [1.0, 0.0, 0.0])


def test_model_identities(settings):
    a, b, b_prime = settings[:, 0], settings[:, 1], settings[:, 2]
    for sign in (1, -1):
        assert np.all(batch.max_abs(batch.bivector_identity_residual(a, b, sign)) <= EPS)
        assert np.all(batch.max_abs(batch.commutator_relation_residual(a, b, sign)) <= EPS)
        assert np.all(batch.parameter_independence_residuals(a, b, b_prime, sign) <= EPS)
        assert np.all(batch.factorizability_residual(a, b, sign) <= EPS)
    residuals, valid = batch.outcome_independence_residuals(a, b)
    assert residuals.shape == (NCONFIGS, 4)
    assert np.all(residuals[valid] <= EPS)
    residuals, valid = batch.sign_rule_residuals(a, b)
    assert np.all(residuals[valid] <= EPS)


@pytest.mark.parametrize('sign', [1, -1])
def test_event_readout(settings, sign):
    n = settings[:, 0]
    readouts = batch.event_readout(n, sign)
    assert_array_equal(readouts, [event_readout(ni, sign) for ni in n])
    assert_array_equal(readouts, sign)


@pytest.mark.parametrize('rho, expected', [(None, 0.5), (BIASED, 0.25), (EnsembleMeasure(weights={1: 1.0, -1: 0.0}), 1.0)])
def test_implied_weight(settings, rho, expected):
    implied = batch.implied_weight(settings, rho)
    assert implied.shape == (NCONFIGS, 4)
    assert_allclose(implied, expected, atol=EPS)


def test_rotation_preserves_expectations(settings):
    rotations = Rotation.random(NCONFIGS, random_state=7)
    rotated = batch.rotate(settings, rotations)
    assert_allclose(batch.norm(rotated), 1.0, atol=EPS)
    assert_allclose(batch.chsh_value(rotated), batch.chsh_value(settings), atol=EPS)


def test_state_expectation_rejects_non_hermitian():
    op = np.array([[[0.0, 1.0], [0.0, 0.0]]], dtype=complex)
    with pytest.raises(NonHermitianError):
        batch.state_expectation(op, np.array([1.0, 0.0], dtype=complex))
