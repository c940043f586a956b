"""CHSH combination, its square and the bound of the bivector model.

The local-realistic counterpart of the CHSH string is

.. math::

    F(\\mu) = A_a (B_b + B_{b'}) + A_{a'} (B_b - B_{b'})

with all products taken in the frame of :math:`\\mu`. Its square is computed two ways
and never substituted for one another: :func:`f_squared_exact` multiplies
:math:`F F` out, :func:`f_squared_paper_decomposition` uses
:math:`4 + [A_a, A_{a'}][B_{b'}, B_b]`, which assumes that every A commutes with
every B. :func:`decomposition_residual` reports the difference of their averages.

.. code-block:: python

    from cliffbell.chsh import ChshConfig, chsh_value, model_bound

    cfg = ChshConfig.from_angles((0.0, np.pi / 2, np.pi / 4, 7 * np.pi / 4))
    chsh_value(cfg)  # -2.8284271247461903
    model_bound(cfg)  # 2.8284271247461903
"""

from warnings import warn

import numpy as np
from traits.api import Bool, Float, HasStrictTraits, Instance, List, Property, Tuple

from cliffbell.algebra import (
    Direction,
    Multivector,
    as_tolerance,
    bivector,
    cross,
    dot,
    geometric_product,
    grade,
    max_abs,
    norm,
    scalar,
)
from cliffbell.model import (
    ORIENTATIONS,
    Orientation,
    ensemble_average,
    observable,
    oriented_commutator,
    oriented_product,
)


class ChshConfig(HasStrictTraits):
    """The four analyzer settings a, a', b, b'."""

    a = Instance(Direction, allow_none=False, desc='first setting of station 1')
    a_prime = Instance(Direction, allow_none=False, desc='second setting of station 1')
    b = Instance(Direction, allow_none=False, desc='first setting of station 2')
    b_prime = Instance(Direction, allow_none=False, desc='second setting of station 2')

    #: settings in the order (a, a', b, b')
    directions = Property(depends_on='a, a_prime, b, b_prime')

    def __init__(self, a, a_prime, b, b_prime, **traits):
        super().__init__(
            a=_direction(a),
            a_prime=_direction(a_prime),
            b=_direction(b),
            b_prime=_direction(b_prime),
            **traits,
        )

    @classmethod
    def from_angles(cls, angles, plane='xy'):
        """Build a coplanar configuration from the angles (a, a', b, b') in radians."""
        return cls(*(Direction.from_angle(angle, plane) for angle in angles))

    def _get_directions(self):
        return (self.a, self.a_prime, self.b, self.b_prime)

    def rotated(self, rotation):
        """Apply a :class:`scipy.spatial.transform.Rotation` to all four settings."""
        return ChshConfig(*(Direction.normalized(rotation.apply(d.array)) for d in self.directions))

    def swapped(self):
        """Exchange the roles of the stations: (a, a') <-> (b', b)."""
        return ChshConfig(self.b_prime, self.b, self.a_prime, self.a)


def _direction(n):
    return n if isinstance(n, Direction) else Direction(n)


def _multivector_list(x):
    return [float(c) for c in x.coeffs]


def cross_dot_model(cfg):
    """Return :math:`(a \\times a') \\cdot (b' \\times b)`."""
    return dot(cross(cfg.a, cfg.a_prime), cross(cfg.b_prime, cfg.b))


def cross_dot_quantum(cfg):
    """Return :math:`(a \\times a') \\cdot (b \\times b')`."""
    return dot(cross(cfg.a, cfg.a_prime), cross(cfg.b, cfg.b_prime))


def cosine_combination(cfg):
    """Return :math:`-a \\cdot b - a \\cdot b' - a' \\cdot b + a' \\cdot b'`."""
    return -dot(cfg.a, cfg.b) - dot(cfg.a, cfg.b_prime) - dot(cfg.a_prime, cfg.b) + dot(cfg.a_prime, cfg.b_prime)


def f_cv(cfg, mu):
    """Return :math:`A_a (B_b + B_{b'}) + A_{a'} (B_b - B_{b'})` for microstate ``mu``."""
    A = observable(cfg.a, mu)
    A_prime = observable(cfg.a_prime, mu)
    B = observable(cfg.b, mu)
    B_prime = observable(cfg.b_prime, mu)
    return oriented_product(A, B + B_prime, mu) + oriented_product(A_prime, B - B_prime, mu)


def f_squared_exact(cfg, mu):
    """Return :math:`F(\\mu) F(\\mu)` without simplifying assumptions."""
    f = f_cv(cfg, mu)
    return geometric_product(f, f)


def seevinck_product(cfg, mu):
    """Return :math:`[A_a, A_{a'}] [B_{b'}, B_b]` for microstate ``mu``."""
    comm_a = oriented_commutator(observable(cfg.a, mu), observable(cfg.a_prime, mu), mu)
    comm_b = oriented_commutator(observable(cfg.b_prime, mu), observable(cfg.b, mu), mu)
    return oriented_product(comm_a, comm_b, mu)


def seevinck_target(cfg, mu):
    """Return :math:`4 (\\mu (a \\times a')) (\\mu (b' \\times b))`."""
    sign = float(Orientation(mu))
    left = bivector(cross(cfg.a, cfg.a_prime)) * sign
    right = bivector(cross(cfg.b_prime, cfg.b)) * sign
    return oriented_product(left, right, mu) * 4.0


def seevinck_residual(cfg, mu):
    """Return ``seevinck_product - seevinck_target``."""
    return seevinck_product(cfg, mu) - seevinck_target(cfg, mu)


def f_squared_paper_decomposition(cfg, mu):
    """Return :math:`4 + [A_a, A_{a'}] [B_{b'}, B_b]`."""
    return scalar(4.0) + seevinck_product(cfg, mu)


def chsh_average(cfg, rho=None):
    """Return the ensemble average of :math:`F(\\mu)` as a multivector."""
    return ensemble_average(lambda mu: f_cv(cfg, mu), rho)


def chsh_value(cfg, rho=None):
    """Return the grade-0 part of the averaged :math:`F`.

    Non-scalar grades cancel under the uniform measure; for any other measure a
    warning is issued if they exceed 1e-13.
    """
    average = chsh_average(cfg, rho)
    if rho is None or rho.is_uniform():
        return average.scalar
    leftover = max_abs(average - grade(average, 0))
    if leftover > 1e-13:
        warn(f'Averaged CHSH function has non-scalar grades up to {leftover:.3e}.', stacklevel=2)
    return average.scalar


def decomposition_residual(cfg, rho=None):
    """Return the average of the exact square minus the average of the decomposed square."""
    exact = ensemble_average(lambda mu: f_squared_exact(cfg, mu), rho)
    decomposed = ensemble_average(lambda mu: f_squared_paper_decomposition(cfg, mu), rho)
    return exact - decomposed


def cross_commutator(n, n_prime, mu):
    """Return :math:`[\\mu n, \\mu n']`, which equals :math:`-2 \\mu (n \\times n')`."""
    return oriented_commutator(observable(n, mu), observable(n_prime, mu), mu)


def cross_commutator_average(n, n_prime, rho=None):
    """Return the two-point average of :func:`cross_commutator`."""
    return ensemble_average(lambda mu: cross_commutator(n, n_prime, mu), rho)


def seevinck_average(cfg, rho=None):
    """Return the ensemble average of :func:`seevinck_product`.

    Its grade-0 part equals :math:`-4 (a \\times a') \\cdot (b' \\times b)`.
    """
    return ensemble_average(lambda mu: seevinck_product(cfg, mu), rho)


def model_bound(cfg):
    """Return :math:`\\sqrt{4 + 4 |(a \\times a') \\cdot (b' \\times b)|}`, in [2, 2 sqrt 2]."""
    return float(np.sqrt(4.0 + 4.0 * abs(cross_dot_model(cfg))))


class VarianceCheck(HasStrictTraits):
    """Outcome of :func:`variance_inequality_check`."""

    passed = Bool
    squared_average = Float(desc='|<F>|^2')
    average_square = Float(desc='grade-0 part of <F F>')


def variance_inequality_check(cfg, rho=None, tol=None):
    """Compare :math:`|\\langle F \\rangle|^2` with the grade-0 part of :math:`\\langle F^2 \\rangle`.

    The outcome is reported, not asserted.
    """
    eps = as_tolerance(tol).eps
    squared_average = chsh_value(cfg, rho) ** 2
    average_square = ensemble_average(lambda mu: f_squared_exact(cfg, mu), rho).scalar
    return VarianceCheck(
        passed=bool(squared_average <= average_square + eps),
        squared_average=squared_average,
        average_square=average_square,
    )


class ChshReport(HasStrictTraits):
    """All quantities of one CHSH configuration, intermediate multivectors included."""

    #: angles (a, a', b, b') in radians, if the configuration came from a grid
    angles = Tuple(Float, Float, Float, Float)
    chsh_value = Float
    model_bound = Float
    f_squared_exact_avg = Instance(Multivector)
    f_squared_paper_avg = Float
    decomposition_residual = Instance(Multivector)
    #: norms of [A, B] per microstate for the pairs (a,b), (a,b'), (a',b), (a',b')
    cross_commutator_norms = List(Float)
    #: norms of the two-point averages of the same commutators
    cross_commutator_avg_norms = List(Float)
    variance_check = Bool
    variance_lhs = Float
    variance_rhs = Float
    seevinck_avg = Float
    cross_dot_model = Float(desc="(a x a') . (b' x b)")
    cross_dot_quantum = Float(desc="(a x a') . (b x b')")

    def as_dict(self):
        """Return the report with the fixed serialization key order."""
        return {
            'chsh_value': self.chsh_value,
            'model_bound': self.model_bound,
            'f2_exact_avg': _multivector_list(self.f_squared_exact_avg),
            'f2_paper_avg': self.f_squared_paper_avg,
            'residual': _multivector_list(self.decomposition_residual),
            'cross_comm_norms': list(self.cross_commutator_norms),
            'variance_check': self.variance_check,
            'cross_comm_avg_norms': list(self.cross_commutator_avg_norms),
            'variance_lhs': self.variance_lhs,
            'variance_rhs': self.variance_rhs,
            'seevinck_avg': self.seevinck_avg,
            'cross_dot_model': self.cross_dot_model,
            'cross_dot_quantum': self.cross_dot_quantum,
        }


def chsh_report(cfg, rho=None, tol=None, angles=None):
    """Evaluate every CHSH quantity of ``cfg`` into a :class:`ChshReport`."""
    exact = ensemble_average(lambda mu: f_squared_exact(cfg, mu), rho)
    decomposed = ensemble_average(lambda mu: f_squared_paper_decomposition(cfg, mu), rho)
    pairs = [(cfg.a, cfg.b), (cfg.a, cfg.b_prime), (cfg.a_prime, cfg.b), (cfg.a_prime, cfg.b_prime)]
    variance = variance_inequality_check(cfg, rho, tol)
    report = ChshReport(
        chsh_value=chsh_value(cfg, rho),
        model_bound=model_bound(cfg),
        f_squared_exact_avg=exact,
        f_squared_paper_avg=decomposed.scalar,
        decomposition_residual=exact - decomposed,
        cross_commutator_norms=[norm(cross_commutator(n, m, ORIENTATIONS[0])) for n, m in pairs],
        cross_commutator_avg_norms=[norm(cross_commutator_average(n, m, rho)) for n, m in pairs],
        variance_check=variance.passed,
        variance_lhs=variance.squared_average,
        variance_rhs=variance.average_square,
        seevinck_avg=seevinck_average(cfg, rho).scalar,
        cross_dot_model=cross_dot_model(cfg),
        cross_dot_quantum=cross_dot_quantum(cfg),
    )
    if angles is not None:
        report.angles = tuple(float(angle) for angle in angles)
    return report


def angle_grid(step):
    """Return the angles ``k * step`` covering [0, 2 pi).

    Raises
    ------
    ValueError
        If ``step`` is not in (0, pi].
    """
    step = float(step)
    if not step > 0.0:
        msg = f'Sweep step must be positive, got {step}.'
        raise ValueError(msg)
    if step > np.pi:
        msg = f'Sweep step must not exceed pi, got {step}.'
        raise ValueError(msg)
    count = int(np.ceil(2.0 * np.pi / step - 1e-9))
    return np.arange(count) * step


def sweep_angles(step, full_grid=False):
    """Return the coplanar angle sets (a, a', b, b') of a sweep in grid order.

    a = 0 and a' = pi/2 are fixed. By default one angle theta is free with b = theta
    and b' = theta + 3 pi / 2 (mod 2 pi); ``full_grid`` varies b and b' independently.
    """
    grid = angle_grid(step)
    if full_grid:
        if len(grid) > 720:
            warn(f'Full-grid sweep with {len(grid) ** 2} rows.', stacklevel=2)
        return [(0.0, np.pi / 2, float(b), float(bp)) for b in grid for bp in grid]
    return [(0.0, np.pi / 2, float(t), float(np.mod(t + 1.5 * np.pi, 2.0 * np.pi))) for t in grid]


def chsh_sweep(plane='xy', step=np.pi / 180, rho=None, tol=None, full_grid=False):
    """Evaluate a :class:`ChshReport` for every grid point of a coplanar sweep, in grid order."""
    return [
        chsh_report(ChshConfig.from_angles(angles, plane), rho, tol, angles=angles)
        for angles in sweep_angles(step, full_grid)
    ]


def sweep_maximum(reports):
    """Return the first report whose |chsh_value| is maximal within 1e-12."""
    values = np.abs([report.chsh_value for report in reports])
    best = int(np.argmax(values >= values.max() - 1e-12))
    return reports[best]


def max_nonscalar(x):
    """Return the largest coefficient magnitude outside grade 0."""
    return max_abs(x - grade(x, 0))

