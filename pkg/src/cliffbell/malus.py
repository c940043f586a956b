"""Spin version of Malus's law for polarizer-prepared subensembles.

A polarizer along ``p`` that passes spin value ``s`` selects a single orientation
pair of the sequential observable :math:`A(a, p, \\mu) = (\\mu a)(\\mu p)`:
``(-I a)(+I p)`` for ``s = +1`` and ``(+I a)(-I p)`` for ``s = -1``. The selected
product reduces to :math:`a p = a \\cdot p + I (a \\times p)`, and averaging the
bivector part over the two microstates leaves :math:`a \\cdot p`.

.. code-block:: python

    from cliffbell.algebra import Direction
    from cliffbell.malus import Preparation, malus_expectation

    prep = Preparation(p=Direction(0, 0, 1), s=1)
    malus_expectation(Direction(1, 0, 0), prep).scalar  # 0.0
"""

from typing import NamedTuple

from traits.api import Dict, Enum, HasStrictTraits, Instance, Property

from cliffbell.algebra import ZERO, Direction, bivector, cross, geometric_product, grade, vector
from cliffbell.model import ensemble_average, observable, oriented_product, signed_observable

#: enumeration order of (a-factor, p-factor) orientation pairs
SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class Preparation(HasStrictTraits):
    """Subensemble selected by a polarizer."""

    #: polarizer axis
    p = Instance(Direction, desc='polarizer axis')

    #: selected spin value along p
    s = Enum(1, -1, desc='selected spin value s_p')


class PreselectionWeights(HasStrictTraits):
    """Conditional weights over the orientation pairs of :math:`A(a, p, \\mu)`.

    Keys are ``(sa, sp)`` sign pairs; missing pairs carry weight 0.
    """

    #: mapping (sa, sp) -> weight in [0, 1]
    weights = Property(Dict, desc='weights of the orientation pairs (sa, sp)')

    _weights = Dict()

    def __init__(self, weights, **traits):
        super().__init__(**traits)
        self.weights = weights

    @classmethod
    def for_preparation(cls, prep):
        """Return the pure weighting selected by ``prep``."""
        return cls({(-prep.s, prep.s): 1.0})

    def _get_weights(self):
        return dict(self._weights)

    def _set_weights(self, weights):
        weights = {(int(sa), int(sp)): float(w) for (sa, sp), w in weights.items()}
        if any(pair not in SIGN_PAIRS for pair in weights):
            msg = f'Orientation pairs must be built from +1 and -1, got {sorted(weights)}.'
            raise ValueError(msg)
        if any(not 0.0 <= w <= 1.0 for w in weights.values()):
            msg = f'Preselection weights must lie in [0, 1], got {weights}.'
            raise ValueError(msg)
        if abs(sum(weights.values()) - 1.0) > 1e-12:
            msg = f'Preselection weights must sum to 1, got {sum(weights.values())}.'
            raise ValueError(msg)
        self._weights = {pair: weights.get(pair, 0.0) for pair in SIGN_PAIRS}

    def items(self):
        return [(pair, self._weights[pair]) for pair in SIGN_PAIRS]


class MalusDerivation(NamedTuple):
    """Intermediate lines of the expectation of :math:`A(a, p, \\mu)` on a preselected subensemble."""

    #: weighted value of the selected orientation pair
    selected: object
    #: the same value written as a vector product, :math:`a \\cdot p + I (a \\times p)` for a pure preparation
    expanded: object
    #: ensemble average of :math:`\\mu (a \\times p)`
    averaged_bivector: object
    #: grade-0 part of the selected value plus the averaged bivector
    result: object


def sequential_observable(a, p, mu):
    """Return the unit quaternion :math:`(\\mu a)(\\mu p)` in the frame of ``mu``."""
    return oriented_product(observable(a, mu), observable(p, mu), mu)


def malus_derivation(a, prep, rho=None, weights=None):
    """Evaluate the preselected expectation line by line.

    Parameters
    ----------
    a : Direction
        analyzer axis.
    prep : Preparation
        polarizer axis and selected spin value.
    rho : EnsembleMeasure, optional
        measure used to average the bivector term.
    weights : PreselectionWeights, optional
        defaults to :meth:`PreselectionWeights.for_preparation`.
    """
    if weights is None:
        weights = PreselectionWeights.for_preparation(prep)
    p = prep.p
    selected = ZERO
    expanded = ZERO
    ap = geometric_product(vector(a.array), vector(p.array))
    for (sa, sp), w in weights.items():
        if w == 0.0:
            continue
        pair = geometric_product(signed_observable(a, sa), signed_observable(p, sp))
        selected = selected + pair * w
        # (sa I)(sp I) = -sa sp
        expanded = expanded + ap * (-sa * sp * w)
    averaged = ensemble_average(lambda mu: bivector(cross(a, p)) * float(mu), rho)
    return MalusDerivation(selected, expanded, averaged, grade(selected, 0) + averaged)


def malus_expectation(a, prep, rho=None):
    """Return the expectation of :math:`A(a, p, \\mu)` on the subensemble ``prep``.

    The grade-0 part is :math:`a \\cdot p` for both spin values; under the uniform
    measure all other grades vanish exactly.
    """
    return malus_derivation(a, prep, rho).result


def sequential_chain(analyzers, prep, rho=None):
    """Return the expectations of successive analyzers, each re-preparing the next.

    After every step the polarizer axis becomes the previous analyzer, so the
    values are :math:`[a_1 \\cdot p, a_2 \\cdot a_1, \\ldots]`.
    """
    analyzers = list(analyzers)
    if not analyzers:
        msg = 'Sequential chain needs at least one analyzer.'
        raise ValueError(msg)
    values = []
    current = Preparation(p=prep.p, s=prep.s)
    for a in analyzers:
        values.append(malus_expectation(a, current, rho).scalar)
        current = Preparation(p=a, s=prep.s)
    return values
