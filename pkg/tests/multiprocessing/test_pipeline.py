from cliffbell.pipeline import BasePipeline, DistributedPipeline
from cliffbell.suites.checks import VerifySuite
from cliffbell.suites.reports import ChshSweepSuite

from tests.pipeline_value_test import get_samplers, snapshot

import numpy as np
import pytest
from numpy.testing import assert_array_equal

pytestmark = pytest.mark.multiprocessing


def test_distributed_pipeline_without_explicit_seeds(distributed_pipeline):
    pipeline, _ = distributed_pipeline
    data = next(pipeline.get_data(progress_bar=False))
    assert data['data']


def test_distributed_pipeline_too_short_random_seeds_input(distributed_pipeline):
    pipeline, _ = distributed_pipeline
    seeds = {1: range(1, 2)}
    pipeline.random_seeds = seeds
    with pytest.raises(ValueError):
        next(pipeline.get_data(progress_bar=False))


def test_distributed_pipeline_non_equal_length_random_seeds_input(distributed_pipeline):
    pipeline, test_seeds = distributed_pipeline
    test_seeds[3] = range(0, 10)
    pipeline.random_seeds = test_seeds
    with pytest.raises(ValueError):
        next(pipeline.get_data(progress_bar=False))


def test_distributed_pipeline_matches_base_pipeline(distributed_pipeline):
    _, test_seeds = distributed_pipeline
    distributed = DistributedPipeline(sampler=get_samplers(), random_seeds=test_seeds, numworkers=2, features=snapshot)
    sequential = BasePipeline(sampler=get_samplers(), random_seeds=test_seeds, features=snapshot)
    remote = list(distributed.get_data(progress_bar=False))
    local = list(sequential.get_data(progress_bar=False))
    assert [d['idx'] for d in remote] == [1, 2, 3]
    for r, loc in zip(remote, local, strict=True):
        assert_array_equal(r['seeds'], loc['seeds'])
        for key in ('directions', 'coefficients', 'quaternions'):
            assert_array_equal(r[key], loc[key])


@pytest.mark.parametrize(
    'finput',
    [
        lambda sampler: {'res': True},
        (lambda sampler, x: {'res': x}, True),
    ],
)
def test_distributed_pipeline_valid_pipeline_funcs(distributed_pipeline, finput):
    _, _ = distributed_pipeline
    pipeline = DistributedPipeline(numsamples=2, features=finput)
    data = next(pipeline.get_data(progress_bar=False))
    assert data['res']


@pytest.mark.parametrize(
    'finput',
    [
        None,
        lambda: {'res': True},
        (lambda sampler, x: {'res': x}, True, True),
    ],
)
def test_distributed_pipeline_invalid_pipeline_funcs(distributed_pipeline, finput):
    _, _ = distributed_pipeline
    pipeline = DistributedPipeline(numsamples=2, features=finput)
    with pytest.raises(ValueError):
        next(pipeline.get_data(progress_bar=False))


def test_verify_does_not_depend_on_tasks(distributed_pipeline):
    rows = []
    for tasks in (1, 2):
        result = VerifySuite(tasks=tasks).run(seed=3, samples=20, tolerance=1e-12)
        rows.append([{k: v for k, v in check.as_row().items() if k != 'elapsed'} for check in result.checks])
    assert rows[0] == rows[1]


def test_sweep_does_not_depend_on_tasks(distributed_pipeline):
    reports = [ChshSweepSuite(tasks=tasks, step=np.pi / 36).build(1e-12).as_dict() for tasks in (1, 2)]
    assert reports[0] == reports[1]
