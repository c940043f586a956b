"""Dense arithmetic for the real Clifford algebra Cl(3,0).

Purpose of the Algebra Module
-----------------------------

Every quantity of the model (microstates, observables, their products and averages)
is an element of the 8-dimensional algebra generated by three orthonormal vectors
with :math:`e_i e_i = 1` and :math:`e_i e_j = -e_j e_i`. Elements are stored as 8 real
coefficients over the blade basis

.. code-block:: text

    [1, e1, e2, e3, e23, e31, e12, e123]

The cyclic bivector order makes the dual :math:`I n` of a vector a plain component
copy, so :code:`dual(n).coeffs[4:7]` equals :code:`(n_x, n_y, n_z)`.

.. code-block:: python

    from cliffbell.algebra import E1, E2, I, Direction, dual, geometric_product

    geometric_product(E1, E2)  # e12
    I * I  # -1
    dual(Direction(0, 0, 1))  # e12

Products are evaluated with a precomputed 8x8 index/sign table. The table is built
once at import time from the basis words of the blades.
"""

from numbers import Real

import numpy as np
from traits.api import Float, HasStrictTraits, Property

from cliffbell.config import DEFAULT_TOLERANCE, DIRECTION_TOLERANCE

#: blade names in storage order
BLADES = ('1', 'e1', 'e2', 'e3', 'e23', 'e31', 'e12', 'e123')

#: grade of each stored blade
GRADES = np.array([0, 1, 1, 1, 2, 2, 2, 3])

#: basis vector words of each stored blade
_WORDS = ((), (1,), (2,), (3,), (2, 3), (3, 1), (1, 2), (1, 2, 3))


class NonInvertibleError(ValueError):
    """Raised if a multivector has no inverse within tolerance."""


def _reduce_word(word):
    """Sort a word of basis vectors and cancel squares.

    Returns the canonical (ascending, repetition-free) word and the sign collected
    by the transpositions.
    """
    word = list(word)
    sign = 1
    for i in range(len(word)):
        for j in range(len(word) - 1 - i):
            if word[j] > word[j + 1]:
                word[j], word[j + 1] = word[j + 1], word[j]
                sign = -sign
    reduced = []
    for k in word:
        if reduced and reduced[-1] == k:
            reduced.pop()  # e_k e_k = 1
        else:
            reduced.append(k)
    return tuple(reduced), sign


def _build_tables():
    canonical = {}
    for index, word in enumerate(_WORDS):
        reduced, sign = _reduce_word(word)
        canonical[reduced] = (index, sign)
    idx = np.zeros((8, 8), dtype=np.intp)
    sign = np.zeros((8, 8))
    for j, left in enumerate(_WORDS):
        for k, right in enumerate(_WORDS):
            reduced, word_sign = _reduce_word(left + right)
            target, blade_sign = canonical[reduced]
            idx[j, k] = target
            sign[j, k] = word_sign * blade_sign
    idx.flags.writeable = False
    sign.flags.writeable = False
    return idx, sign


#: blade index of the product of blade j and blade k
PRODUCT_INDEX, PRODUCT_SIGN = _build_tables()
_FLAT_INDEX = PRODUCT_INDEX.ravel()

#: sign flips of the reverse per blade (grades 2 and 3 change sign)
_REVERSE = np.where((GRADES == 2) | (GRADES == 3), -1.0, 1.0)


def _as_array(v):
    if isinstance(v, Direction):
        return v.array
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        msg = f'Expected a 3-vector, got shape {arr.shape}.'
        raise ValueError(msg)
    return arr


class Multivector:
    """Immutable element of Cl(3,0).

    Supports ``+``, ``-``, scalar scaling, division by a scalar and ``*`` as the
    geometric product. Equality is exact; use :func:`approx_eq` for tolerances.

    Parameters
    ----------
    coeffs : array_like, optional
        8 real coefficients in blade order. Defaults to zero.
    """

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs=None):
        arr = np.zeros(8) if coeffs is None else np.array(coeffs, dtype=float)
        if arr.shape != (8,):
            msg = f'A multivector needs 8 coefficients, got shape {arr.shape}.'
            raise ValueError(msg)
        arr.flags.writeable = False
        self._coeffs = arr

    @property
    def coeffs(self):
        """Read-only coefficient array in blade order."""
        return self._coeffs

    @property
    def scalar(self):
        """Grade-0 coefficient."""
        return float(self._coeffs[0])

    def __getitem__(self, key):
        if isinstance(key, str):
            key = BLADES.index(key)
        return float(self._coeffs[key])

    def __iter__(self):
        return iter(self._coeffs.tolist())

    def __add__(self, other):
        if isinstance(other, Real):
            other = scalar(other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return Multivector(self._coeffs + other._coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Real):
            other = scalar(other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return Multivector(self._coeffs - other._coeffs)

    def __rsub__(self, other):
        if isinstance(other, Real):
            return scalar(other) - self
        return NotImplemented

    def __neg__(self):
        return Multivector(-self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, Real):
            return Multivector(self._coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Multivector(self._coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Multivector(self._coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self):
        return hash(self._coeffs.tobytes())

    def __repr__(self):
        terms = [
            f'{c!r}' if name == '1' else f'{c!r}*{name}'
            for name, c in zip(BLADES, self._coeffs.tolist(), strict=True)
            if c != 0.0
        ]
        return f'Multivector({" + ".join(terms) or "0"})'


class Direction:
    """Unit 3-vector used as analyzer, polarizer or axis direction.

    Inputs whose norm deviates from 1 by less than
    :data:`~cliffbell.config.DIRECTION_TOLERANCE` are renormalized; anything else is
    rejected. Use :meth:`normalized` to build a direction from an arbitrary nonzero
    vector.

    Parameters
    ----------
    x : float or array_like
        x component, or all three components.
    y, z : float, optional
        Remaining components if ``x`` is a scalar.
    """

    __slots__ = ('_xyz',)

    def __init__(self, x, y=None, z=None):
        v = np.array([x, y, z] if y is not None else x, dtype=float)
        if v.shape != (3,):
            msg = f'A direction needs 3 components, got shape {v.shape}.'
            raise ValueError(msg)
        n = np.sqrt(np.dot(v, v))
        if not np.isfinite(n) or abs(n - 1.0) >= DIRECTION_TOLERANCE:
            msg = f'Direction must have unit norm (|norm - 1| < {DIRECTION_TOLERANCE}), got norm {n}.'
            raise ValueError(msg)
        if n != 1.0:
            v = v / n
        v.flags.writeable = False
        self._xyz = v

    @classmethod
    def normalized(cls, v):
        """Return the direction of a nonzero vector of any length."""
        v = np.asarray(v, dtype=float)
        n = np.sqrt(np.dot(v, v))
        if not n > 0.0 or not np.isfinite(n):
            msg = 'Cannot normalize a zero or non-finite vector.'
            raise ValueError(msg)
        return cls(v / n)

    @classmethod
    def from_angle(cls, angle, plane='xy'):
        """Return the direction at ``angle`` radians in a coordinate plane.

        The angle is measured from the first axis of the plane towards the second one
        (``xy``: x towards y, ``yz``: y towards z, ``zx``: z towards x).
        """
        u, w = plane_axes(plane)
        return cls(np.cos(angle) * u + np.sin(angle) * w)

    @property
    def array(self):
        """Read-only component array."""
        return self._xyz

    @property
    def x(self):
        return float(self._xyz[0])

    @property
    def y(self):
        return float(self._xyz[1])

    @property
    def z(self):
        return float(self._xyz[2])

    def __iter__(self):
        return iter(self._xyz.tolist())

    def __neg__(self):
        return Direction(-self._xyz)

    def __eq__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        return bool(np.array_equal(self._xyz, other._xyz))

    def __hash__(self):
        return hash(self._xyz.tobytes())

    def __repr__(self):
        return f'Direction({self.x!r}, {self.y!r}, {self.z!r})'


class Tolerance(HasStrictTraits):
    """Absolute per-coefficient tolerance for identity checks."""

    #: non-negative tolerance, defaults to 1e-12
    eps = Property(Float, desc='absolute tolerance (eps >= 0)')

    _eps = Float(DEFAULT_TOLERANCE)

    def __init__(self, eps=DEFAULT_TOLERANCE, **traits):
        super().__init__(**traits)
        self.eps = eps

    def _get_eps(self):
        return self._eps

    def _set_eps(self, eps):
        eps = float(eps)
        if not eps >= 0.0:
            msg = f'Tolerance must be non-negative, got {eps}.'
            raise ValueError(msg)
        self._eps = eps


def as_tolerance(tol=None):
    """Coerce ``None``, a number or a :class:`Tolerance` to a :class:`Tolerance`."""
    if tol is None:
        return Tolerance()
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(eps=tol)


def plane_axes(plane):
    """Return the two orthonormal axes spanning a coordinate plane."""
    axes = {
        'xy': ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
        'yz': ((0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
        'zx': ((0.0, 0.0, 1.0), (1.0, 0.0, 0.0)),
    }
    if plane not in axes:
        msg = f'Unknown plane "{plane}". Choose from {list(axes)}.'
        raise ValueError(msg)
    u, w = axes[plane]
    return np.array(u), np.array(w)


def scalar(s):
    """Return the scalar ``s`` as a multivector."""
    coeffs = np.zeros(8)
    coeffs[0] = s
    return Multivector(coeffs)


def vector(v):
    """Return the grade-1 multivector with components ``v``."""
    coeffs = np.zeros(8)
    coeffs[1:4] = _as_array(v)
    return Multivector(coeffs)


def bivector(v):
    """Return the bivector :math:`I v` for any 3-vector ``v`` (linear, no normalization)."""
    coeffs = np.zeros(8)
    coeffs[4:7] = _as_array(v)
    return Multivector(coeffs)


def pseudoscalar(s=1.0):
    """Return ``s`` times the unit trivector e123."""
    coeffs = np.zeros(8)
    coeffs[7] = s
    return Multivector(coeffs)


def blade(name):
    """Return the unit basis blade called ``name``."""
    coeffs = np.zeros(8)
    coeffs[BLADES.index(name)] = 1.0
    return Multivector(coeffs)


ONE, E1, E2, E3, E23, E31, E12, I = (blade(name) for name in BLADES)
ZERO = Multivector()


def geometric_product(x, y):
    """Return the Clifford product ``x y``.

    The 64 coefficient products are accumulated in row-major (j, k) order into the
    target blades given by :data:`PRODUCT_INDEX`.
    """
    weights = (PRODUCT_SIGN * np.outer(x.coeffs, y.coeffs)).ravel()
    return Multivector(np.bincount(_FLAT_INDEX, weights=weights, minlength=8))


def grade(x, k):
    """Return the grade-``k`` part of ``x``."""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k <= 3:
        msg = f'Grade must be an integer in 0..3, got {k!r}.'
        raise ValueError(msg)
    return Multivector(np.where(GRADES == k, x.coeffs, 0.0))


def reverse(x):
    """Return the reverse of ``x`` (order of basis vectors reversed in every blade)."""
    return Multivector(x.coeffs * _REVERSE)


def commutator(x, y):
    """Return ``x y - y x``."""
    return geometric_product(x, y) - geometric_product(y, x)


def dual(n):
    """Return the unit bivector :math:`I n` of a unit direction."""
    if not isinstance(n, Direction):
        n = Direction(n)
    return bivector(n.array)


def norm(x):
    """Return the Euclidean norm of the coefficient vector."""
    c = x.coeffs
    return float(np.sqrt(np.dot(c, c)))


def versor_inverse(x, tol=None):
    """Return the inverse of a versor or unit bivector.

    For a versor :math:`V`, :math:`V \\tilde V` is a positive scalar and
    :math:`V^{-1} = \\tilde V / (V \\tilde V)`. For a unit bivector this gives
    :math:`-x`.

    Raises
    ------
    NonInvertibleError
        If the norm of ``x`` is below the tolerance or ``x`` is not a versor.
    """
    eps = as_tolerance(tol).eps
    if norm(x) <= eps:
        msg = f'Multivector with norm {norm(x)} is not invertible.'
        raise NonInvertibleError(msg)
    rev = reverse(x)
    square = geometric_product(x, rev)
    magnitude = square.scalar
    if magnitude <= 0.0 or np.max(np.abs(square.coeffs[1:])) > max(eps, DEFAULT_TOLERANCE) * magnitude:
        msg = 'Only versors and unit bivectors are inverted; x times its reverse is not a positive scalar.'
        raise NonInvertibleError(msg)
    return rev / magnitude


def cross(a, b):
    """Return the right-handed cross product of two 3-vectors as an array."""
    return np.cross(_as_array(a), _as_array(b))


def dot(a, b):
    """Return the Euclidean scalar product of two 3-vectors."""
    return float(np.dot(_as_array(a), _as_array(b)))


def max_abs(x):
    """Return the largest coefficient magnitude of ``x``."""
    return float(np.max(np.abs(x.coeffs)))


def approx_eq(x, y, tol=None):
    """Return True iff every coefficient of ``x - y`` is at most ``tol.eps`` in magnitude."""
    eps = as_tolerance(tol).eps
    return bool(np.all(np.abs(x.coeffs - y.coeffs) <= eps))
