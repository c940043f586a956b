"""Base classes for cliffbell.

This module provides abstract base classes for the random processes that draw
configurations and for the pipelines that evaluate them. These classes are not
intended to be used directly, but to be subclassed.

.. inheritance-diagram::
                cliffbell.base
    :top-classes:
                cliffbell.base.DataGenerator
                cliffbell.base.BaseSampler
    :parts: 1
"""

from abc import abstractmethod

from numpy.random import Generator, RandomState
from scipy.stats import _distn_infrastructure
from traits.api import ABCHasStrictTraits, Either, Instance, Int


class DataGenerator(ABCHasStrictTraits):
    """Abstract base class that serves as a data generator.

    It provides a common interface for all classes that evaluate checks or report
    rows task by task via the :meth:`get_data` method.
    """

    @abstractmethod
    def get_data(self):
        """Python generator that iteratively yields task results as a dictionary.

        Returns
        -------
        dict
            Dictionary containing the result of one task
            {feature_name[key] : feature[values]}.
        """


class BaseSampler(ABCHasStrictTraits):
    """Base class that represents a random process.

    A random process is defined by a random variable and a random state. Derived
    classes store the values drawn by :meth:`sample` in their own output attribute.
    """

    #: the random variable specifying the random distribution
    random_var = Instance(_distn_infrastructure.rv_frozen, desc='instance of a random variable from scipy.stats module')

    #: the state of the random variable :attr:`random_var`
    random_state = Either(int, RandomState, Generator, desc='random state of the random variable')

    #: number of values drawn per call of :meth:`sample`
    nsamples = Int(1, desc='number of values drawn per call of sample')

    def rvs(self, size=1):
        """Random variable sampling (for internal use).

        Parameters
        ----------
        size : int or tuple, optional
            The shape of the output array. Defaults to 1.

        Returns
        -------
        array-like
            Random values drawn from the random distribution.
        """
        return self.random_var.rvs(size=size, random_state=self.random_state)

    @abstractmethod
    def sample(self):
        """Utilizes :meth:`rvs` to draw :attr:`nsamples` values from the random distribution.

        This method needs to be implemented by derived classes.
        """
