from cliffbell.model import DegeneratePairError, EnsembleMeasure
from cliffbell.suites.checks import (
    REQUIREMENTS,
    BaseCheck,
    CheckOutcome,
    DirectionCheck,
    MultivectorCheck,
    RotationCheck,
    VerifySuite,
    catalog_report,
    check_catalog,
    check_chsh_extremum,
    check_measure_independence,
    check_sequential_chain,
    evaluate_task,
)
from cliffbell.suites.utils import chunk_sizes

from .constants import CHECK_NAMES

import numpy as np
import pytest

SAMPLES = 40


@pytest.fixture(scope='module')
def verify_result():
    return VerifySuite().run(seed=1, samples=SAMPLES, tolerance=1e-12)


def test_catalog_order():
    assert [check.name for check in check_catalog()] == CHECK_NAMES


def test_every_requirement_has_a_check():
    assert {check.requirement for check in check_catalog()} == set(REQUIREMENTS)


def test_catalog_samplers():
    catalog = {check.name: check for check in check_catalog()}
    assert catalog['algebra_basis_relations'].get_sampler(10) == {}
    assert isinstance(catalog['algebra_associativity'], MultivectorCheck)
    assert catalog['algebra_associativity'].sampled
    assert isinstance(catalog['rotational_covariance'], RotationCheck)
    assert sorted(catalog['rotational_covariance'].get_sampler(10)) == [0, 1]
    assert catalog['parameter_independence'].get_sampler(10)[0].ndirections == 3


def test_verify_passes(verify_result):
    assert verify_result.passed, verify_result.failed()
    assert [check.name for check in verify_result.checks] == CHECK_NAMES
    assert all(value for value in verify_result.requirements().values())


def test_verify_counts(verify_result):
    checks = {check.name: check for check in verify_result.checks}
    assert checks['joint_expectation'].evaluated == SAMPLES
    assert checks['factorizability'].evaluated == 2 * SAMPLES
    assert checks['malus_expectation'].evaluated == 2 * SAMPLES
    outcome = checks['outcome_independence']
    assert outcome.evaluated + outcome.skipped == SAMPLES
    assert checks['chsh_extremum'].evaluated == 360


def test_verify_report(verify_result):
    report = verify_result.as_report({'seed': 1})
    data = report.as_dict()
    assert data['command'] == 'verify'
    assert 'elapsed' not in data['columns']
    assert list(data['summary']['requirements']) == list(REQUIREMENTS)
    assert data['summary']['failed_checks'] == []
    assert 'elapsed' in report.as_dict(include_timings=True)['columns']


def test_verify_is_deterministic(verify_result):
    again = VerifySuite().run(seed=1, samples=SAMPLES, tolerance=1e-12)
    for first, second in zip(verify_result.checks, again.checks, strict=True):
        assert first.max_residual == second.max_residual
        assert first.evaluated == second.evaluated


def test_zero_tolerance_fails():
    suite = VerifySuite()
    suite.catalog = [check for check in check_catalog() if check.name in ('algebra_associativity', 'algebra_basis_relations')]
    result = suite.run(seed=1, samples=SAMPLES, tolerance=0.0)
    assert not result.passed
    assert result.failed() == ['algebra_associativity']
    assert result.requirements() == {'1': False}


def test_chunked_evaluation(monkeypatch):
    monkeypatch.setattr('cliffbell.suites.checks.CHUNK_SIZE', 7)
    suite = VerifySuite()
    check = next(check for check in suite.catalog if check.name == 'joint_expectation')
    result = suite.run_check(check, 6, seed=1, samples=20, tolerance=1e-12)
    assert result.passed
    assert result.evaluated == 20


def test_failed_condition_fails_check():
    def always_fails(draws, eps, measure):
        return CheckOutcome(0.0, 1, failures=1)

    suite = VerifySuite()
    suite.catalog = [DirectionCheck(name='broken', requirement='2', func=always_fails)]
    result = suite.run(seed=1, samples=1, tolerance=1.0)
    assert not result.passed
    assert result.checks[0].failures == 1


def test_duplicate_check_names():
    check = DirectionCheck(name='twice', requirement='1', func=check_sequential_chain)
    with pytest.raises(ValueError):
        VerifySuite(catalog=[check, check])


def test_unknown_requirement():
    with pytest.raises(ValueError):
        VerifySuite(catalog=[DirectionCheck(name='x', requirement='9', func=check_sequential_chain)])


@pytest.mark.parametrize('kwargs', [{'samples': 0}, {'tolerance': -1.0}])
def test_run_rejects(kwargs):
    args = {'seed': 1, 'samples': 1, 'tolerance': 1e-12, **kwargs}
    with pytest.raises(ValueError):
        VerifySuite().run(**args)


def test_fixed_case_checks(measure):
    for func in (check_chsh_extremum, check_sequential_chain):
        outcome = func({}, 1e-12, measure)
        assert outcome.failures == 0
        assert outcome.residual <= 1e-9


def test_evaluate_task_slices_last_chunk():
    check = next(check for check in check_catalog() if check.name == 'joint_expectation')
    sampler = check.get_sampler(5)
    sampler[0].random_state = 1
    sampler[0].sample()
    data = evaluate_task(sampler, check.get_check_func(), [5, 3], 1e-12, None, 2)
    assert data['evaluated'] == 3


def test_catalog_report():
    report = catalog_report()
    assert report.command == 'list'
    assert [row['name'] for row in report.rows] == CHECK_NAMES
    assert report.summary == {'checks': len(CHECK_NAMES)}


@pytest.mark.parametrize('samples, chunk, expected', [(10, 4, [4, 4, 2]), (8, 4, [4, 4]), (3, 4, [3])])
def test_chunk_sizes(samples, chunk, expected):
    assert chunk_sizes(samples, chunk) == expected


def test_base_check_is_abstract():
    with pytest.raises(TypeError):
        BaseCheck(name='abstract', requirement='1')


def test_bivector_identity_uses_more_samples(verify_result):
    checks = {check.name: check for check in verify_result.checks}
    assert checks['bivector_product_identity'].evaluated == 2 * 10 * SAMPLES
    assert checks['measure_setting_independence'].evaluated == 4 * SAMPLES


def test_raising_check_fails():
    def degenerate(draws, eps, measure):
        msg = 'parallel settings'
        raise DegeneratePairError(msg)

    suite = VerifySuite()
    suite.catalog = [
        DirectionCheck(name='raises', requirement='identity', ndirections=2, func=degenerate),
        DirectionCheck(name='chain', requirement='8', func=check_sequential_chain),
    ]
    result = suite.run(seed=1, samples=5, tolerance=1e-12)
    assert result.failed() == ['raises']
    assert result.checks[0].error == 'DegeneratePairError: parallel settings'
    assert result.checks[1].error == ''
    assert result.as_report({}).summary['errors'] == {'raises': 'DegeneratePairError: parallel settings'}


def test_report_without_errors_has_no_error_summary(verify_result):
    assert 'errors' not in verify_result.as_report({}).summary


def test_measure_check_under_biased_measure():
    biased = EnsembleMeasure(weights={1: 0.25, -1: 0.75})
    suite = VerifySuite(measure=biased)
    suite.catalog = [check for check in check_catalog() if check.name == 'measure_setting_independence']
    result = suite.run(seed=1, samples=SAMPLES, tolerance=1e-12)
    assert result.passed
    assert biased.weights == {1: 0.25, -1: 0.75}


def test_measure_check_detects_setting_dependence(monkeypatch, measure):
    def setting_dependent(n, rho=None):
        return 0.5 + 0.1 * n[..., 0]

    monkeypatch.setattr('cliffbell.batch.implied_weight', setting_dependent)
    directions = np.array([[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, 0.0, 0.0]]])
    outcome = check_measure_independence({'directions': directions}, 1e-12, measure)
    assert outcome.residual == pytest.approx(0.2)
    assert outcome.evaluated == 4


def test_tolerance_factors():
    factors = {check.name: check.tolerance_factor for check in check_catalog() if check.tolerance_factor != 1.0}
    assert factors == {'algebra_associativity': 100.0, 'rotational_covariance': 100.0, 'chsh_extremum': 1000.0}
