"""The local bivector model: microstates, observables and locality conditions.

A microstate is the handedness of the unit trivector, :math:`\\mu = \\pm I`, and the
spin observable along a unit direction :math:`n` is the unit bivector
:math:`A_n(\\mu) = \\mu \\cdot n`. Ensemble averages are taken over the two-point
measure :class:`EnsembleMeasure`, so every average is an exact two-term sum.

Products of model quantities are evaluated in the frame fixed by the microstate:
for :math:`\\mu = +I` the ordinary geometric product is used, for :math:`\\mu = -I`
(the left-handed frame) the product is taken in the opposite order,
:math:`x \\circ y = y x`. The algebra obtained that way is again Cl(3,0), with
:math:`-I` as its unit pseudoscalar, and the identity

.. math::

    (\\mu \\cdot a)(\\mu \\cdot b) = -a \\cdot b - \\mu \\cdot (a \\times b)

holds for both microstates. See :func:`oriented_product`.
"""

from enum import IntEnum
from typing import NamedTuple

import numpy as np
from traits.api import Dict, HasStrictTraits, Property

from cliffbell.algebra import (
    Direction,
    as_tolerance,
    bivector,
    cross,
    dot,
    dual,
    geometric_product,
    max_abs,
    pseudoscalar,
    scalar,
    vector,
    versor_inverse,
)
from cliffbell.config import DEGENERACY_THRESHOLD


class DegeneratePairError(ValueError):
    """Raised if the normalized axis z = (a x b) / sin(theta) is undefined (a parallel to b)."""


class Orientation(IntEnum):
    """Handedness of the microstate, :math:`\\mu = \\text{sign} \\cdot I`."""

    RIGHT = 1
    LEFT = -1

    @property
    def sign(self):
        return int(self)

    @property
    def trivector(self):
        """Return :math:`\\mu` as a multivector."""
        return pseudoscalar(float(self))


#: enumeration order of the two microstates
ORIENTATIONS = (Orientation.RIGHT, Orientation.LEFT)


class Verdict(NamedTuple):
    """Outcome of an equality check: pass flag and the residual of every compared case."""

    passed: bool
    residuals: tuple

    @property
    def residual(self):
        return max(self.residuals) if self.residuals else 0.0


class SignTriple(NamedTuple):
    """Senses of rotation of :math:`\\mu \\cdot a`, :math:`\\mu \\cdot b` and :math:`\\mu \\cdot z`."""

    sA: int
    sB: int
    sC: int

    @classmethod
    def from_senses(cls, sA, sB):
        """Complete a pair of senses with the geometric rule sC = sA * sB."""
        if sA not in (1, -1) or sB not in (1, -1):
            msg = f'Senses must be +1 or -1, got ({sA}, {sB}).'
            raise ValueError(msg)
        return cls(sA, sB, sA * sB)


class EnsembleMeasure(HasStrictTraits):
    """Probability measure over the two microstates.

    Defaults to the uniform measure ``{+1: 0.5, -1: 0.5}``. Non-uniform weights are
    accepted for sensitivity experiments; they must be non-negative and sum to 1.
    The measure never depends on analyzer settings.
    """

    #: mapping from orientation sign to probability
    weights = Property(Dict, desc='probabilities of mu = +I and mu = -I')

    _weights = Dict()

    def __init__(self, weights=None, **traits):
        super().__init__(**traits)
        self.weights = {1: 0.5, -1: 0.5} if weights is None else weights

    def _get_weights(self):
        return dict(self._weights)

    def _set_weights(self, weights):
        weights = {int(Orientation(k)): float(v) for k, v in weights.items()}
        if any(w < 0.0 or not np.isfinite(w) for w in weights.values()):
            msg = f'Ensemble weights must be non-negative, got {weights}.'
            raise ValueError(msg)
        if abs(sum(weights.values()) - 1.0) > 1e-12:
            msg = f'Ensemble weights must sum to 1, got {sum(weights.values())}.'
            raise ValueError(msg)
        self._weights = {int(mu): weights.get(int(mu), 0.0) for mu in ORIENTATIONS}

    def weight(self, mu):
        """Return the probability of orientation ``mu``."""
        return self._weights[int(mu)]

    def items(self):
        """Return ``(Orientation, weight)`` pairs in enumeration order."""
        return [(mu, self._weights[int(mu)]) for mu in ORIENTATIONS]

    def is_uniform(self):
        return self._weights == {1: 0.5, -1: 0.5}


def _as_measure(rho):
    return EnsembleMeasure() if rho is None else rho


def _as_direction(n):
    return n if isinstance(n, Direction) else Direction(n)


def oriented_product(x, y, mu):
    """Return the product of ``x`` and ``y`` in the frame of microstate ``mu``.

    ``x y`` for :math:`\\mu = +I` and ``y x`` for :math:`\\mu = -I`.
    """
    if Orientation(mu) is Orientation.RIGHT:
        return geometric_product(x, y)
    return geometric_product(y, x)


def oriented_commutator(x, y, mu):
    """Return :math:`x \\circ y - y \\circ x` in the frame of ``mu``."""
    return oriented_product(x, y, mu) - oriented_product(y, x, mu)


def observable(n, mu):
    """Return the bivector observable :math:`A_n(\\mu) = \\mu \\cdot n`."""
    return dual(_as_direction(n)) * float(Orientation(mu))


def ensemble_average(f, rho=None):
    """Return the weighted two-point average of ``f`` over the microstates.

    Parameters
    ----------
    f : callable
        Maps an :class:`Orientation` to a :class:`~cliffbell.algebra.Multivector`.
    rho : EnsembleMeasure, optional
        Defaults to the uniform two-point measure.
    """
    total = None
    for mu, w in _as_measure(rho).items():
        term = f(mu) * w
        total = term if total is None else total + term
    return total


def joint_expectation(a, b, rho=None):
    """Return the ensemble average of :math:`A_a(\\mu) B_b(\\mu)`.

    Its grade-0 part is :math:`-a \\cdot b`; the :math:`\\mu \\cdot (a \\times b)` term
    cancels between the two orientations.
    """
    a, b = _as_direction(a), _as_direction(b)
    return ensemble_average(lambda mu: oriented_product(observable(a, mu), observable(b, mu), mu), rho)


def bivector_identity_residual(a, b, mu):
    """Return :math:`(\\mu a)(\\mu b) - (-a \\cdot b - \\mu (a \\times b))`."""
    product = oriented_product(observable(a, mu), observable(b, mu), mu)
    expected = scalar(-dot(a, b)) - bivector(cross(a, b)) * float(Orientation(mu))
    return product - expected


def normalized_axis(a, b):
    """Return ``(z, sin_theta)`` with ``z = (a x b) / sin_theta``.

    Raises
    ------
    DegeneratePairError
        If ``|a x b|`` is below :data:`~cliffbell.config.DEGENERACY_THRESHOLD`.
    """
    c = cross(a, b)
    sin_theta = float(np.sqrt(np.dot(c, c)))
    if sin_theta < DEGENERACY_THRESHOLD:
        msg = f'z is undefined for (anti)parallel directions (|a x b| = {sin_theta}).'
        raise DegeneratePairError(msg)
    return Direction(c / sin_theta), sin_theta


def commutator_relation_residual(a, b, mu, normalized=False):
    """Return :math:`[\\mu a, \\mu b] + 2 \\mu (a \\times b)`.

    With ``normalized=True`` the right-hand side is formed as
    :math:`2 (\\mu \\cdot z) \\sin\\theta_{ab}`; this raises :class:`DegeneratePairError`
    for parallel inputs while the unnormalized form still holds there.
    """
    comm = oriented_commutator(observable(a, mu), observable(b, mu), mu)
    if normalized:
        z, sin_theta = normalized_axis(a, b)
        return comm + observable(z, mu) * (2.0 * sin_theta)
    return comm + bivector(cross(a, b)) * (2.0 * float(Orientation(mu)))


def _remote_rearrangement(a, b, mu):
    """Return :math:`B A B^{-1} - 2 \\{\\mu (a \\times b)\\} B^{-1}` in the frame of ``mu``."""
    A = observable(a, mu)
    B = observable(b, mu)
    B_inv = versor_inverse(B)
    conjugated = oriented_product(oriented_product(B, A, mu), B_inv, mu)
    coupling = oriented_product(bivector(cross(a, b)) * float(Orientation(mu)), B_inv, mu)
    return conjugated - coupling * 2.0


def reflection_residual(a, b):
    """Return :math:`b a b - 2 b (a \\cdot b) + a` (zero for unit ``b``)."""
    vb = vector(b)
    return geometric_product(geometric_product(vb, vector(a)), vb) - vb * (2.0 * dot(a, b)) + vector(a)


def parameter_independence_check(a, b, b_prime, mu, tol=None):
    """Check that the local observable is unaffected by the remote setting.

    Evaluates :math:`B A B^{-1} - 2 \\{\\mu (a \\times b)\\} B^{-1}` for ``b`` and
    ``b_prime`` and compares both with each other and with :math:`A_a(\\mu)`. The
    reduced vector identity :math:`b a b - 2 b (a \\cdot b) = -a` is verified for both
    remote settings.

    Returns
    -------
    Verdict
        residuals ``(sides, side vs A_a, reduced identity b, reduced identity b')``.
    """
    eps = as_tolerance(tol).eps
    side = _remote_rearrangement(a, b, mu)
    side_prime = _remote_rearrangement(a, b_prime, mu)
    residuals = (
        max_abs(side - side_prime),
        max_abs(side - observable(a, mu)),
        max_abs(reflection_residual(a, b)),
        max_abs(reflection_residual(a, b_prime)),
    )
    return Verdict(all(r <= eps for r in residuals), residuals)


def signed_observable(n, sense):
    """Return the bivector :math:`\\text{sense} \\cdot I n` rotating in the given sense."""
    return dual(_as_direction(n)) * float(sense)


def sign_rule_bivector(a, b, sA, sB):
    """Return the bivector of the axis of the signed directions, :math:`I (s_A a \\times s_B b) / |a \\times b|`."""
    return dual(Direction.normalized(cross(_as_direction(a).array * sA, _as_direction(b).array * sB)))


def _outcome_side(a, b, z, sin_theta, sA, sB):
    senses = SignTriple.from_senses(sA, sB)
    A = signed_observable(a, senses.sA)
    B = signed_observable(b, senses.sB)
    C = signed_observable(z, senses.sC)
    return -geometric_product(geometric_product(B, A), B) + geometric_product(C, B) * (2.0 * sin_theta)


def outcome_independence_check(a, b, tol=None):
    """Check that the local observable is unaffected by the remote outcome.

    For each of the four sense assignments ``(sA, sB)`` the expression
    :math:`-B A B + 2 C B \\sin\\theta_{ab}` with ``sC = sA * sB`` is compared with the
    same expression under the flipped remote sense, and with :math:`A^{(s_A)}`.

    Returns
    -------
    Verdict
        one residual per sense assignment, in the order (+,+), (+,-), (-,+), (-,-).

    Raises
    ------
    DegeneratePairError
        For parallel ``a`` and ``b``.
    """
    eps = as_tolerance(tol).eps
    a, b = _as_direction(a), _as_direction(b)
    z, sin_theta = normalized_axis(a, b)
    residuals = []
    for sA in (1, -1):
        for sB in (1, -1):
            side = _outcome_side(a, b, z, sin_theta, sA, sB)
            flipped = _outcome_side(a, b, z, sin_theta, sA, -sB)
            residuals.append(max(max_abs(side - flipped), max_abs(side - signed_observable(a, sA))))
    return Verdict(all(r <= eps for r in residuals), tuple(residuals))


def factorizability_check(a, b, mu, tol=None):
    """Check :math:`(A_a B_b)(\\mu) = A_a(\\mu) B_b(\\mu)` coefficient-wise.

    The joint observable is built from the two directions directly,
    :math:`-a \\cdot b - \\mu \\cdot (a \\times b)`, and compared with the product of
    the separately constructed observables.
    """
    eps = as_tolerance(tol).eps
    joint = scalar(-dot(a, b)) - bivector(cross(a, b)) * float(Orientation(mu))
    separate = oriented_product(observable(a, mu), observable(b, mu), mu)
    residual = max_abs(joint - separate)
    return Verdict(residual <= eps, (residual,))


def event_readout(n, mu):
    """Return the sense of rotation of :math:`\\mu \\cdot n` about ``n``: +1 counterclockwise, -1 clockwise.

    The bivector :math:`\\mu \\cdot n` has dual axis ``sign(mu) * n``, so the readout is
    ``sign(mu)`` for every direction. A misaligned analyzer reads the null result 0,
    which never enters an average.
    """
    n = _as_direction(n)
    axis = observable(n, mu).coeffs[4:7]
    return int(np.sign(np.dot(axis, n.array)))


def event_level_correlation(a, b, rho=None):
    """Return :math:`\\sum_\\mu w(\\mu) \\, r(a, \\mu) \\, r(b, \\mu)` by exact enumeration."""
    return float(sum(w * event_readout(a, mu) * event_readout(b, mu) for mu, w in _as_measure(rho).items()))

