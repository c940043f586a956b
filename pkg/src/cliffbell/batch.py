"""Vectorized kernels over stacks of configurations.

Purpose of the Batch Module
---------------------------

The verification suite evaluates every identity on whole chunks of random
configurations. The functions of this module mirror the scalar API of
:mod:`cliffbell.algebra`, :mod:`cliffbell.model`, :mod:`cliffbell.chsh`,
:mod:`cliffbell.quantum` and :mod:`cliffbell.malus` on plain numpy arrays whose
leading axes index the configurations:

* multivectors are ``(..., 8)`` coefficient arrays in blade order,
* directions are ``(..., 3)`` unit vectors,
* CHSH settings are ``(..., 4, 3)`` arrays in the order (a, a', b, b'),
* orientations are the signs ``+1`` and ``-1``,
* operators are ``(..., 2, 2)`` or ``(..., 4, 4)`` complex arrays.

Inputs are not validated; the samplers deliver unit directions.

The geometric product contracts the ``(..., 64)`` coefficient products with the
signed one-hot table :data:`CAYLEY`, so a chunk costs a single matrix product per
multiplication.

.. code-block:: python

    import numpy as np
    from cliffbell import batch

    a = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    b = np.array([[0.6, 0.8, 0.0], [0.0, 1.0, 0.0]])
    batch.joint_expectation(a, b)[:, 0]  # [-0.6, -1.0]
"""

from typing import NamedTuple

import numpy as np

from cliffbell.algebra import GRADES, PRODUCT_INDEX, PRODUCT_SIGN, NonInvertibleError, as_tolerance
from cliffbell.config import DEFAULT_TOLERANCE, DEGENERACY_THRESHOLD, HERMITIAN_TOLERANCE, IMAGINARY_TOLERANCE
from cliffbell.model import EnsembleMeasure
from cliffbell.quantum import PAULI_X, PAULI_Y, PAULI_Z, NonHermitianError, singlet


def _cayley_table():
    table = np.zeros((64, 8))
    table[np.arange(64), PRODUCT_INDEX.ravel()] = PRODUCT_SIGN.ravel()
    table.flags.writeable = False
    return table


#: row j * 8 + k holds the sign of blade j times blade k in the column of the target blade
CAYLEY = _cayley_table()

_REVERSE = np.where(GRADES >= 2, -1.0, 1.0)
_PAULI = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
_SINGLET = singlet()

#: coefficients of the unit scalar
ONE = np.eye(8)[0]

#: coefficients of the unit trivector e123
PSEUDOSCALAR = np.eye(8)[7]


# algebra


def product(x, y):
    """Return the geometric products ``x y`` of two broadcastable stacks of multivectors."""
    outer = np.asarray(x, dtype=float)[..., :, np.newaxis] * np.asarray(y, dtype=float)[..., np.newaxis, :]
    return outer.reshape(*outer.shape[:-2], 64) @ CAYLEY


def oriented(x, y, sign):
    """Return ``x y`` for ``sign = +1`` and ``y x`` for ``sign = -1``."""
    return product(x, y) if sign > 0 else product(y, x)


def commutator(x, y, sign=1):
    """Return ``x o y - y o x`` in the frame of orientation ``sign``."""
    return oriented(x, y, sign) - oriented(y, x, sign)


def reverse(x):
    return np.asarray(x) * _REVERSE


def _embed(v, start):
    v = np.asarray(v, dtype=float)
    out = np.zeros((*v.shape[:-1], 8))
    out[..., start : start + 3] = v
    return out


def scalar(s):
    """Return the scalars ``s`` as multivectors."""
    s = np.asarray(s, dtype=float)
    out = np.zeros((*s.shape, 8))
    out[..., 0] = s
    return out


def vector(v):
    return _embed(v, 1)


def bivector(v):
    """Return the bivectors :math:`I v`, a plain component copy."""
    return _embed(v, 4)


#: dual of unit directions
dual = bivector


def dot(a, b):
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def cross(a, b):
    return np.cross(a, b)


def norm(x):
    """Return the Euclidean norms along the last axis."""
    return np.linalg.norm(x, axis=-1)


def max_abs(x):
    """Return the largest coefficient magnitude of every multivector."""
    return np.max(np.abs(x), axis=-1)


def max_nonscalar(x):
    """Return the largest coefficient magnitude outside grade 0 of every multivector."""
    return np.max(np.abs(np.asarray(x)[..., 1:]), axis=-1)


def versor_inverse(x, tol=None):
    """Return the inverses of a stack of versors or unit bivectors.

    Raises
    ------
    NonInvertibleError
        If any multivector of the stack has no inverse.
    """
    eps = as_tolerance(tol).eps
    rev = reverse(x)
    square = product(x, rev)
    magnitude = square[..., 0]
    bad = (norm(x) <= eps) | (magnitude <= 0.0) | (max_nonscalar(square) > max(eps, DEFAULT_TOLERANCE) * magnitude)
    if np.any(bad):
        msg = f'{int(np.count_nonzero(bad))} multivector(s) of the stack are not invertible.'
        raise NonInvertibleError(msg)
    return rev / magnitude[..., np.newaxis]


def rotate(d, rotations):
    """Apply rotation ``i`` of a stacked :class:`scipy.spatial.transform.Rotation` to every direction of row ``i``.

    ``d`` has the shape ``(N, k, 3)``; the rotated directions are renormalized.
    """
    rotated = np.stack([rotations.apply(d[:, k]) for k in range(d.shape[1])], axis=1)
    return rotated / norm(rotated)[..., np.newaxis]


def settings(d):
    """Split ``(..., 4, 3)`` CHSH settings into the directions a, a', b, b'."""
    return tuple(np.moveaxis(np.asarray(d, dtype=float), -2, 0))


# model


def observable(n, sign):
    """Return the bivector observables :math:`A_n(\\mu) = \\mu \\cdot n`."""
    return bivector(n) * float(sign)


def ensemble_average(f, rho=None):
    """Return the weighted two-point average of ``f(sign)`` over the microstates."""
    total = None
    for mu, w in (EnsembleMeasure() if rho is None else rho).items():
        term = f(int(mu)) * w
        total = term if total is None else total + term
    return total


def joint_expectation(a, b, rho=None):
    """Return the ensemble averages of :math:`A_a(\\mu) B_b(\\mu)`."""
    return ensemble_average(lambda sign: oriented(observable(a, sign), observable(b, sign), sign), rho)


def bivector_identity_residual(a, b, sign):
    """Return :math:`(\\mu a)(\\mu b) - (-a \\cdot b - \\mu (a \\times b))` per configuration."""
    left = oriented(observable(a, sign), observable(b, sign), sign)
    return left - (scalar(-dot(a, b)) - bivector(cross(a, b)) * float(sign))


def normalized_axis(a, b):
    """Return ``(z, sin_theta, valid)`` with ``z = (a x b) / sin_theta``.

    Rows with ``sin_theta`` below :data:`~cliffbell.config.DEGENERACY_THRESHOLD` are
    marked invalid and carry ``z = 0``.
    """
    c = cross(a, b)
    sin_theta = norm(c)
    valid = sin_theta >= DEGENERACY_THRESHOLD
    z = np.divide(c, sin_theta[..., np.newaxis], out=np.zeros_like(c), where=valid[..., np.newaxis])
    return z, sin_theta, valid


def commutator_relation_residual(a, b, sign, normalized=False):
    """Return :math:`[\\mu a, \\mu b] + 2 \\mu (a \\times b)` per configuration.

    With ``normalized=True`` the right-hand side is formed from the normalized axis;
    the rows that :func:`normalized_axis` marks invalid hold no result then.
    """
    comm = commutator(observable(a, sign), observable(b, sign), sign)
    if normalized:
        z, sin_theta, _ = normalized_axis(a, b)
        return comm + observable(z, sign) * (2.0 * sin_theta)[..., np.newaxis]
    return comm + bivector(cross(a, b)) * (2.0 * float(sign))


def _remote_rearrangement(a, b, sign):
    A = observable(a, sign)
    B = observable(b, sign)
    B_inv = versor_inverse(B)
    conjugated = oriented(oriented(B, A, sign), B_inv, sign)
    coupling = oriented(bivector(cross(a, b)) * float(sign), B_inv, sign)
    return conjugated - coupling * 2.0


def reflection_residual(a, b):
    """Return :math:`b a b - 2 b (a \\cdot b) + a` per configuration."""
    va, vb = vector(a), vector(b)
    return product(product(vb, va), vb) - vb * (2.0 * dot(a, b))[..., np.newaxis] + va


def parameter_independence_residuals(a, b, b_prime, sign):
    """Return the residuals (sides, side vs A_a, reduced identity b, reduced identity b') as ``(..., 4)``."""
    side = _remote_rearrangement(a, b, sign)
    side_prime = _remote_rearrangement(a, b_prime, sign)
    return np.stack(
        [
            max_abs(side - side_prime),
            max_abs(side - observable(a, sign)),
            max_abs(reflection_residual(a, b)),
            max_abs(reflection_residual(a, b_prime)),
        ],
        axis=-1,
    )


def _outcome_side(a, b, z, sin_theta, sA, sB):
    A = observable(a, sA)
    B = observable(b, sB)
    C = observable(z, sA * sB)
    return -product(product(B, A), B) + product(C, B) * (2.0 * sin_theta)[..., np.newaxis]


def outcome_independence_residuals(a, b):
    """Return the residuals of the four sense assignments as ``(..., 4)`` and the validity mask.

    The assignments are ordered (+,+), (+,-), (-,+), (-,-).
    """
    z, sin_theta, valid = normalized_axis(a, b)
    residuals = []
    for sA in (1, -1):
        for sB in (1, -1):
            side = _outcome_side(a, b, z, sin_theta, sA, sB)
            flipped = _outcome_side(a, b, z, sin_theta, sA, -sB)
            residuals.append(np.maximum(max_abs(side - flipped), max_abs(side - observable(a, sA))))
    return np.stack(residuals, axis=-1), valid


def sign_rule_residuals(a, b):
    """Return ``|I (sA a x sB b) / |a x b| - sA sB I z|`` for the four sense assignments and the validity mask."""
    z, _, valid = normalized_axis(a, b)
    residuals = []
    for sA in (1, -1):
        for sB in (1, -1):
            c = cross(np.asarray(a) * sA, np.asarray(b) * sB)
            axis = np.divide(c, norm(c)[..., np.newaxis], out=np.zeros_like(c), where=valid[..., np.newaxis])
            residuals.append(max_abs(dual(axis) - observable(z, sA * sB)))
    return np.stack(residuals, axis=-1), valid


def factorizability_residual(a, b, sign):
    """Return :math:`|(A_a B_b)(\\mu) - A_a(\\mu) B_b(\\mu)|_\\infty` per configuration."""
    joint = scalar(-dot(a, b)) - bivector(cross(a, b)) * float(sign)
    return max_abs(joint - oriented(observable(a, sign), observable(b, sign), sign))


def event_readout(n, sign):
    """Return the senses of rotation of :math:`\\mu \\cdot n` about ``n`` as integers."""
    axis = observable(n, sign)[..., 4:7]
    return np.sign(dot(axis, n)).astype(int)


def implied_weight(n, rho=None):
    """Return the probability of :math:`\\mu = +I` recovered from the averaged observable at ``n``.

    The average of :math:`\\mu \\cdot n` is :math:`(w_+ - w_-) I n`, so its bivector part
    projected on ``n`` gives :math:`w_+ - w_-` for every setting.
    """
    average = ensemble_average(lambda sign: observable(n, sign), rho)
    return 0.5 * (1.0 + dot(average[..., 4:7], n))


# chsh


def f_cv(d, sign):
    """Return :math:`A_a (B_b + B_{b'}) + A_{a'} (B_b - B_{b'})` per configuration."""
    A, A_prime, B, B_prime = (observable(n, sign) for n in settings(d))
    return oriented(A, B + B_prime, sign) + oriented(A_prime, B - B_prime, sign)


def chsh_average(d, rho=None):
    return ensemble_average(lambda sign: f_cv(d, sign), rho)


def chsh_value(d, rho=None):
    """Return the grade-0 parts of the averaged CHSH functions."""
    return chsh_average(d, rho)[..., 0]


def cosine_combination(d):
    a, a_prime, b, b_prime = settings(d)
    return -dot(a, b) - dot(a, b_prime) - dot(a_prime, b) + dot(a_prime, b_prime)


def cross_dot_model(d):
    """Return :math:`(a \\times a') \\cdot (b' \\times b)`."""
    a, a_prime, b, b_prime = settings(d)
    return dot(cross(a, a_prime), cross(b_prime, b))


def cross_dot_quantum(d):
    """Return :math:`(a \\times a') \\cdot (b \\times b')`."""
    a, a_prime, b, b_prime = settings(d)
    return dot(cross(a, a_prime), cross(b, b_prime))


def model_bound(d):
    return np.sqrt(4.0 + 4.0 * np.abs(cross_dot_model(d)))


def seevinck_product(d, sign):
    """Return :math:`[A_a, A_{a'}] [B_{b'}, B_b]` per configuration."""
    a, a_prime, b, b_prime = settings(d)
    comm_a = commutator(observable(a, sign), observable(a_prime, sign), sign)
    comm_b = commutator(observable(b_prime, sign), observable(b, sign), sign)
    return oriented(comm_a, comm_b, sign)


def seevinck_target(d, sign):
    """Return :math:`4 (\\mu (a \\times a')) (\\mu (b' \\times b))` per configuration."""
    a, a_prime, b, b_prime = settings(d)
    left = bivector(cross(a, a_prime)) * float(sign)
    right = bivector(cross(b_prime, b)) * float(sign)
    return oriented(left, right, sign) * 4.0


def seevinck_average(d, rho=None):
    return ensemble_average(lambda sign: seevinck_product(d, sign), rho)


def cross_commutator_average(n, n_prime, rho=None):
    """Return the two-point averages of :math:`[\\mu n, \\mu n']`."""
    return ensemble_average(lambda sign: commutator(observable(n, sign), observable(n_prime, sign), sign), rho)


# quantum


class QuantumBound(NamedTuple):
    """Per-configuration quantum bound with the Bell operator moments it derives from."""

    bound: np.ndarray
    bell_squared_expectation: np.ndarray
    cross_dot: np.ndarray


def pauli_projection(n):
    """Return :math:`\\sigma \\cdot n` as ``(..., 2, 2)`` complex arrays."""
    return np.einsum('...i,ijk->...jk', np.asarray(n, dtype=float), _PAULI)


def tensor(x, y):
    """Return the Kronecker products of two broadcastable stacks of matrices."""
    x, y = np.asarray(x), np.asarray(y)
    out = np.einsum('...ij,...kl->...ikjl', x, y)
    return out.reshape(*out.shape[:-4], x.shape[-2] * y.shape[-2], x.shape[-1] * y.shape[-1])


def state_expectation(op, state):
    """Return the real expectations :math:`\\langle \\psi | op | \\psi \\rangle` of Hermitian operators.

    Raises
    ------
    NonHermitianError
        If any operator of the stack is not Hermitian.
    """
    op = np.asarray(op, dtype=complex)
    asymmetry = np.max(np.abs(op - np.conj(np.swapaxes(op, -1, -2))), initial=0.0)
    if asymmetry > HERMITIAN_TOLERANCE:
        msg = f'Operator stack is not Hermitian (residual {asymmetry:.3e}).'
        raise NonHermitianError(msg)
    value = np.einsum('...i,...ij,...j->...', np.conj(state), op, state)
    imaginary = np.max(np.abs(value.imag), initial=0.0)
    if imaginary > IMAGINARY_TOLERANCE:
        msg = f'Expectation has imaginary part {imaginary:.3e}.'
        raise ValueError(msg)
    return value.real


def singlet_expectation(op):
    return state_expectation(op, _SINGLET)


def spin_correlation(a, b):
    """Return :math:`\\langle \\Psi | \\sigma \\cdot a \\otimes \\sigma \\cdot b | \\Psi \\rangle` per configuration."""
    return singlet_expectation(tensor(pauli_projection(a), pauli_projection(b)))


def bell_operator(d):
    a, a_prime, b, b_prime = (pauli_projection(n) for n in settings(d))
    return tensor(a, b) + tensor(a, b_prime) + tensor(a_prime, b) - tensor(a_prime, b_prime)


def bell_squared_identity(d):
    """Return :math:`4 \\mathbb{1} + 4 \\, \\sigma (a \\times a') \\otimes \\sigma (b \\times b')` per configuration."""
    a, a_prime, b, b_prime = settings(d)
    return 4.0 * np.eye(4, dtype=complex) + 4.0 * tensor(
        pauli_projection(cross(a, a_prime)),
        pauli_projection(cross(b, b_prime)),
    )


def bell_squared_residual(d):
    """Return the largest absolute entry of :math:`B^2` minus its closed form per configuration."""
    op = bell_operator(d)
    return np.max(np.abs(op @ op - bell_squared_identity(d)), axis=(-2, -1))


def bell_expectation(d):
    return singlet_expectation(bell_operator(d))


def qm_chsh_bound(d):
    """Return the quantum bounds together with :math:`\\langle B^2 \\rangle` and the cross dot product.

    Raises
    ------
    ValueError
        If :math:`\\langle B^2 \\rangle` differs from :math:`4 - 4 (a \\times a') \\cdot (b \\times b')`
        by more than 1e-10 in any configuration.
    """
    cross_dot = cross_dot_quantum(d)
    op = bell_operator(d)
    squared = singlet_expectation(op @ op)
    deviation = np.max(np.abs(squared - (4.0 - 4.0 * cross_dot)), initial=0.0)
    if deviation > 1e-10:
        msg = f'<B^2> disagrees with 4 - 4 (a x a).(b x b) by up to {deviation:.3e}.'
        raise ValueError(msg)
    return QuantumBound(np.sqrt(4.0 + 4.0 * np.abs(cross_dot)), squared, cross_dot)


def polarized_state(p, s=1):
    """Return the eigenvectors of :math:`\\sigma \\cdot p` with eigenvalue ``s`` as ``(..., 2)``."""
    if s not in (1, -1):
        msg = f'Spin value must be +1 or -1, got {s}.'
        raise ValueError(msg)
    values, vectors = np.linalg.eigh(pauli_projection(p))
    column = np.argmin(np.abs(values - s), axis=-1)
    return np.take_along_axis(vectors, column[..., np.newaxis, np.newaxis], axis=-1)[..., 0]


def polarized_expectation(a, p, s=1):
    """Return :math:`\\langle s_p | \\sigma \\cdot a | s_p \\rangle` per configuration."""
    return state_expectation(pauli_projection(a), polarized_state(p, s))


# malus


def malus_expectation(a, p, s, rho=None):
    """Return the expectations of :math:`A(a, p, \\mu)` on the pure subensembles prepared along ``p`` with spin ``s``."""
    selected = product(observable(a, -s), observable(p, s))
    averaged = ensemble_average(lambda sign: bivector(cross(a, p)) * float(sign), rho)
    return scalar(selected[..., 0]) + averaged
