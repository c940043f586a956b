"""BasePipeline for testing."""

from cliffbell.pipeline import BasePipeline
from cliffbell.sampler import DirectionSampler, MultivectorSampler, RotationSampler

from numpy.random import default_rng


def get_samplers():
    return {
        1: DirectionSampler(nsamples=4, ndirections=4, random_state=default_rng(1)),
        2: MultivectorSampler(nsamples=4, random_state=default_rng(2)),
        3: RotationSampler(nsamples=4, random_state=default_rng(3)),
    }


def snapshot(sampler):
    """Feature function that copies the draws of every sampler."""
    return {
        'directions': sampler[1].directions.copy(),
        'coefficients': sampler[2].coefficients.copy(),
        'quaternions': sampler[3].rotations.as_quat(),
    }


def get_pipeline(nsamples):
    return BasePipeline(sampler=get_samplers(), numsamples=nsamples, features=lambda sampler: {'data': True})
