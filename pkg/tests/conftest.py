import shutil
import tempfile
from pathlib import Path

from cliffbell.algebra import Direction
from cliffbell.chsh import ChshConfig
from cliffbell.model import EnsembleMeasure

from .constants import EXTREMAL_ANGLES_DEG, NCONFIGS, SEED
from .pipeline_value_test import get_pipeline

import numpy as np
import pytest
from numpy.random import default_rng


def _unit_rows(rng, shape):
    v = rng.standard_normal((*shape, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@pytest.fixture
def temp_dir():
    """Create and clean up a temporary directory."""
    test_dir = Path(tempfile.mkdtemp())
    yield test_dir
    shutil.rmtree(test_dir)


@pytest.fixture
def rng():
    return default_rng(SEED)


@pytest.fixture
def measure():
    """The uniform two-point measure."""
    return EnsembleMeasure()


@pytest.fixture
def random_directions(rng):
    """Return ``n`` tuples of ``k`` random unit directions."""

    def _random_directions(k, n=NCONFIGS):
        return [tuple(Direction(v) for v in row) for row in _unit_rows(rng, (n, k))]

    return _random_directions


@pytest.fixture
def random_configs(random_directions):
    """Return ``n`` random CHSH configurations."""

    def _random_configs(n=NCONFIGS):
        return [ChshConfig(*row) for row in random_directions(4, n)]

    return _random_configs


@pytest.fixture
def extremal_config():
    return ChshConfig.from_angles(np.deg2rad(EXTREMAL_ANGLES_DEG))


@pytest.fixture
def base_pipeline():
    size = 1
    pipeline = get_pipeline(size)
    test_seeds = {1: range(1, 1 + size), 2: range(2, 2 + size), 3: range(3, 3 + size)}
    return pipeline, test_seeds
