"""Two-qubit singlet reference for the model's expectation values.

Conventions: qubit 1 is the left tensor factor and :math:`|0\\rangle` is the +1
eigenvector of :math:`\\sigma_z`. Operators are dense complex numpy arrays; matrix
equality is judged by the largest absolute entry of the difference.
"""

from typing import NamedTuple

import numpy as np

from cliffbell.algebra import Direction, as_tolerance, cross, dot
from cliffbell.config import HERMITIAN_TOLERANCE, IMAGINARY_TOLERANCE

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

#: largest operator dimension produced by :func:`tensor`
MAX_DIMENSION = 16


class NonHermitianError(ValueError):
    """Raised if an operator passed to the singlet oracle is not Hermitian."""


class QuantumBound(NamedTuple):
    """Tsirel'son-type bound together with the Bell operator moments it derives from."""

    bound: float
    bell_squared_expectation: float
    cross_dot: float


def _components(v):
    if isinstance(v, Direction):
        return v.array
    return np.asarray(v, dtype=float)


def pauli_projection(n):
    """Return :math:`\\sigma \\cdot n`; linear in ``n``, so non-unit vectors are allowed."""
    nx, ny, nz = _components(n)
    return nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z


def singlet():
    """Return :math:`(|01\\rangle - |10\\rangle) / \\sqrt 2`."""
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)


def tensor(x, y):
    """Return the Kronecker product with row-major block convention."""
    x, y = np.asarray(x), np.asarray(y)
    if x.ndim != 2 or y.ndim != 2:
        msg = 'tensor expects two matrices.'
        raise ValueError(msg)
    rows, cols = x.shape[0] * y.shape[0], x.shape[1] * y.shape[1]
    if max(rows, cols) > MAX_DIMENSION:
        msg = f'Tensor product of shape ({rows}, {cols}) exceeds the supported dimension {MAX_DIMENSION}.'
        raise ValueError(msg)
    return np.kron(x, y)


def max_entry_residual(x, y):
    """Return the largest absolute entry of ``x - y``."""
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


def is_hermitian(op, tol=HERMITIAN_TOLERANCE):
    return max_entry_residual(op, np.conj(op).T) <= tol


def state_expectation(op, state):
    """Return the real expectation :math:`\\langle \\psi | op | \\psi \\rangle` of a Hermitian operator."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (len(state), len(state)):
        msg = f'Operator of shape {op.shape} does not act on a state of length {len(state)}.'
        raise ValueError(msg)
    if not is_hermitian(op):
        msg = f'Operator is not Hermitian (residual {max_entry_residual(op, np.conj(op).T):.3e}).'
        raise NonHermitianError(msg)
    value = np.vdot(state, op @ state)
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        msg = f'Expectation has imaginary part {value.imag:.3e}.'
        raise ValueError(msg)
    return float(value.real)


def singlet_expectation(op):
    """Return :math:`\\langle \\Psi | op | \\Psi \\rangle` for the singlet state."""
    return state_expectation(op, singlet())


def spin_correlation(a, b):
    """Return :math:`\\langle \\Psi | \\sigma \\cdot a \\otimes \\sigma \\cdot b | \\Psi \\rangle`."""
    return singlet_expectation(tensor(pauli_projection(a), pauli_projection(b)))


def bell_operator(cfg):
    """Return :math:`\\sigma a \\otimes \\sigma b + \\sigma a \\otimes \\sigma b' + \\sigma a' \\otimes \\sigma b - \\sigma a' \\otimes \\sigma b'`."""
    sa, sa_prime = pauli_projection(cfg.a), pauli_projection(cfg.a_prime)
    sb, sb_prime = pauli_projection(cfg.b), pauli_projection(cfg.b_prime)
    return tensor(sa, sb) + tensor(sa, sb_prime) + tensor(sa_prime, sb) - tensor(sa_prime, sb_prime)


def bell_squared_identity(cfg):
    """Return :math:`4 \\mathbb{1} + 4 \\, \\sigma (a \\times a') \\otimes \\sigma (b \\times b')`."""
    return 4.0 * np.eye(4, dtype=complex) + 4.0 * tensor(
        pauli_projection(cross(cfg.a, cfg.a_prime)),
        pauli_projection(cross(cfg.b, cfg.b_prime)),
    )


def bell_operator_squared_check(cfg, tol=None):
    """Compare :math:`B^2` with the closed form :func:`bell_squared_identity`.

    Returns
    -------
    tuple(bool, float)
        pass flag and max-abs-entry residual.
    """
    eps = as_tolerance(tol).eps
    op = bell_operator(cfg)
    residual = max_entry_residual(op @ op, bell_squared_identity(cfg))
    return residual <= eps, residual


def bell_expectation(cfg):
    """Return :math:`\\langle \\Psi | B | \\Psi \\rangle`."""
    return singlet_expectation(bell_operator(cfg))


def qm_chsh_bound(cfg):
    """Return the quantum bound :math:`\\sqrt{4 + 4 |(a \\times a') \\cdot (b \\times b')|}`.

    :math:`\\langle B^2 \\rangle` is computed by matrix arithmetic and must equal
    :math:`4 - 4 (a \\times a') \\cdot (b \\times b')` within 1e-10.
    """
    cross_dot = dot(cross(cfg.a, cfg.a_prime), cross(cfg.b, cfg.b_prime))
    op = bell_operator(cfg)
    squared = singlet_expectation(op @ op)
    if abs(squared - (4.0 - 4.0 * cross_dot)) > 1e-10:
        msg = f'<B^2> = {squared} disagrees with 4 - 4 (a x a).(b x b) = {4.0 - 4.0 * cross_dot}.'
        raise ValueError(msg)
    return QuantumBound(float(np.sqrt(4.0 + 4.0 * abs(cross_dot))), squared, cross_dot)


def polarized_state(p, s=1):
    """Return the eigenvector of :math:`\\sigma \\cdot p` with eigenvalue ``s``."""
    if s not in (1, -1):
        msg = f'Spin value must be +1 or -1, got {s}.'
        raise ValueError(msg)
    values, vectors = np.linalg.eigh(pauli_projection(p))
    return vectors[:, int(np.argmin(np.abs(values - s)))]


def polarized_expectation(a, p, s=1):
    """Return :math:`\\langle s_p | \\sigma \\cdot a | s_p \\rangle`, which equals ``s * a . p``."""
    return state_expectation(pauli_projection(a), polarized_state(p, s))
