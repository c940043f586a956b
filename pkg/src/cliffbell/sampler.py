"""Random processes that draw analyzer settings, multivectors and rotations.

Sampler Module Purpose
-----------------------

Every sampled check of the verification suite evaluates an identity on a batch of
random configurations. The configurations are drawn by :code:`BaseSampler` derived
classes. A random process is defined by a random variable and a corresponding random
state; the random variable must be part of the :code:`scipy.stats` module. Drawn values
are stored on the sampler instance and read by the feature functions of a pipeline.

This example draws 1000 configurations of four analyzer directions that are uniformly
distributed on the unit sphere:

.. code-block:: python

    from numpy.random import default_rng
    from cliffbell.sampler import DirectionSampler

    sampler = DirectionSampler(nsamples=1000, ndirections=4, random_state=default_rng(1))
    sampler.sample()
    sampler.directions.shape  # (1000, 4, 3)

"""

import numpy as np
from numpy.random import Generator, RandomState
from scipy.spatial.transform import Rotation
from scipy.stats import norm, uniform
from traits.api import CArray, Either, Enum, Float, Instance, Int

from cliffbell.base import BaseSampler


class DirectionSampler(BaseSampler):
    """Draws unit directions uniformly distributed on the sphere.

    Standard normal triples are normalized; triples whose norm falls below
    :attr:`min_norm` are redrawn.
    """

    #: number of directions per configuration
    ndirections = Int(1, desc='number of directions per configuration')

    #: triples shorter than this are redrawn
    min_norm = Float(1e-12, desc='minimum norm of a drawn triple')

    #: drawn directions, shape (nsamples, ndirections, 3)
    directions = CArray(dtype=float, shape=(None, None, 3), desc='unit directions drawn by the last call of sample')

    def _random_var_default(self):
        return norm(loc=0.0, scale=1.0)

    def sample(self):
        """Random sampling of :attr:`nsamples` sets of :attr:`ndirections` directions."""
        values = self.rvs(size=(self.nsamples, self.ndirections, 3))
        lengths = np.linalg.norm(values, axis=-1)
        short = lengths < self.min_norm
        while short.any():  # resample degenerate triples
            values[short] = self.rvs(size=(int(short.sum()), 3))
            lengths = np.linalg.norm(values, axis=-1)
            short = lengths < self.min_norm
        self.directions = values / lengths[..., np.newaxis]


class MultivectorSampler(BaseSampler):
    """Draws general multivectors with independent coefficients in [-1, 1]."""

    #: number of multivectors per configuration
    nmultivectors = Int(3, desc='number of multivectors per configuration')

    #: drawn coefficients, shape (nsamples, nmultivectors, 8)
    coefficients = CArray(dtype=float, shape=(None, None, 8), desc='coefficients drawn by the last call of sample')

    def _random_var_default(self):
        return uniform(loc=-1.0, scale=2.0)

    def sample(self):
        """Random sampling of multivector coefficients."""
        self.coefficients = self.rvs(size=(self.nsamples, self.nmultivectors, 8))


class RotationSampler(BaseSampler):
    """Draws rotations uniformly distributed over SO(3)."""

    #: not needed for this sampler; relies on :meth:`scipy.spatial.transform.Rotation.random`
    random_var = Enum(None)

    #: the state of the random process
    random_state = Either(int, RandomState, Generator, desc='random state consumed by Rotation.random')

    #: drawn rotations
    rotations = Instance(Rotation, desc='rotations drawn by the last call of sample')

    def rvs(self, size=1):
        """Random variable sampling (for internal use)."""
        return Rotation.random(size, self.random_state)

    def sample(self):
        """Random sampling of :attr:`nsamples` rotations."""
        self.rotations = self.rvs(self.nsamples)
