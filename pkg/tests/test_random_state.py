"""Tests the random state of the sampler classes.

The random_state argument of a sampler overwrites the random state of its random
variable. An integer state and a RandomState with the same seed draw the same values;
samplers reseeded with the same Generator seed repeat their draws.
"""

import unittest

from cliffbell.sampler import DirectionSampler

from numpy.random import RandomState, default_rng
from scipy.stats import norm

SEED = 100
NVALUES = 100


class TestSamplerState(unittest.TestCase):
    def _version1(self):
        n = norm()
        n.random_state = 1  # should be overwritten
        sampler = DirectionSampler(random_var=n, random_state=SEED)
        return sampler.rvs(NVALUES)

    def _version2(self):
        n = norm()
        n.random_state = 1  # should be overwritten
        sampler = DirectionSampler(random_var=n, random_state=RandomState(SEED))
        return sampler.rvs(NVALUES)

    def _generator_draws(self):
        sampler = DirectionSampler(nsamples=NVALUES, random_state=default_rng(SEED))
        sampler.sample()
        return sampler.directions

    def test(self):
        """Test that integer and RandomState seeding result in the same random numbers."""
        assert (self._version1() == self._version2()).all()

    def test_generator(self):
        """Test that a fresh Generator with the same seed repeats the draws."""
        assert (self._generator_draws() == self._generator_draws()).all()

    def test_states_differ(self):
        sampler = DirectionSampler(nsamples=NVALUES, random_state=default_rng(SEED + 1))
        sampler.sample()
        assert not (sampler.directions == self._generator_draws()).all()


if __name__ == '__main__':
    unittest.main()
