"""Registry of verification checks and the suite that runs them.

Every check serves exactly one of the eight model requirements, or is one of the
labeled algebraic identities. A check evaluates a residual on a batch of random
configurations (or on a fixed set of cases) and passes if the largest residual does not
exceed the run tolerance times its :attr:`~BaseCheck.tolerance_factor` and no case
failed a discrete condition. Sampled checks work on whole chunks of draws with the
vectorized kernels of :mod:`cliffbell.batch`.
"""

from abc import abstractmethod
from time import time
from typing import NamedTuple

import numpy as np
from traits.api import ABCHasStrictTraits, Bool, Callable, Float, HasStrictTraits, Instance, Int, List, Property, Str

from cliffbell import batch
from cliffbell.algebra import BLADES, E1, E2, E3, E12, E23, E31, ONE, Direction, blade, commutator, max_abs
from cliffbell.algebra import I as PSEUDOSCALAR
from cliffbell.chsh import ChshConfig, chsh_sweep, sweep_maximum
from cliffbell.config import CHUNK_SIZE, GRADE_CANCELLATION_TOLERANCE
from cliffbell.malus import Preparation, sequential_chain
from cliffbell.model import EnsembleMeasure, Orientation
from cliffbell.quantum import IDENTITY, qm_chsh_bound
from cliffbell.sampler import DirectionSampler, MultivectorSampler, RotationSampler
from cliffbell.suites.base import SuiteBase
from cliffbell.suites.utils import CHECK_SEED_OFFSET, chunk_sizes, set_pipeline_seeds
from cliffbell.writer import Report

#: requirement key -> short title, in report order
REQUIREMENTS = {
    '1': 'observables are elements of a normed division algebra',
    '2': 'observed values are dichotomic',
    '3': 'single-observable average vanishes',
    '4': 'joint average reproduces -a.b',
    '5': 'factorizability with remote parameter and outcome independence',
    '6': 'measure independent of the analyzer settings',
    '7': 'CHSH combination bounded by 2 sqrt 2',
    '8': 'spin version of Malus law',
    'identity': 'supporting algebraic identities',
}

TSIRELSON = 2.0 * np.sqrt(2.0)


class CheckOutcome(NamedTuple):
    """Result of a check on one task."""

    residual: float
    evaluated: int
    failures: int = 0
    skipped: int = 0


class BaseCheck(ABCHasStrictTraits):
    """Base class of a registered check.

    Attributes
    ----------
    name : str
        Unique name of the check.
    requirement : str
        Requirement key ('1' to '8') or 'identity'.
    label : str
        One-line description of what is verified.
    tolerance_factor : float
        Multiplier of the run tolerance.
    sample_factor : int
        Multiplier of the run's sample count.
    """

    name = Str
    requirement = Str
    label = Str
    tolerance_factor = Float(1.0)
    sample_factor = Int(1)

    #: directions per random configuration; 0 for checks on fixed cases
    ndirections = Int(0)

    #: whether configurations are drawn at random
    sampled = Property(depends_on=['ndirections'])

    def _get_sampled(self):
        return self.ndirections > 0

    def get_sampler(self, nsamples):
        """Return the sampler dict of one task (empty for checks on fixed cases)."""
        if not self.sampled:
            return {}
        return {0: DirectionSampler(nsamples=nsamples, ndirections=self.ndirections)}

    @abstractmethod
    def get_check_func(self):
        """Return the callable ``func(draws, eps, measure) -> CheckOutcome`` evaluating one batch of draws."""


class DirectionCheck(BaseCheck):
    """Check on random directions (and on fixed cases if ``ndirections`` is 0)."""

    func = Callable

    def get_check_func(self):
        return self.func


class RotationCheck(DirectionCheck):
    """Check on random directions together with random rotations."""

    def get_sampler(self, nsamples):
        sampler = super().get_sampler(nsamples)
        sampler[1] = RotationSampler(nsamples=nsamples)
        return sampler


class MultivectorCheck(DirectionCheck):
    """Check on random general multivectors."""

    nmultivectors = Int(3)

    #: multivector checks draw no directions but are sampled
    sampled = Property(depends_on=['nmultivectors'])

    def _get_sampled(self):
        return True

    def get_sampler(self, nsamples):
        return {0: MultivectorSampler(nsamples=nsamples, nmultivectors=self.nmultivectors)}


def evaluate_task(sampler, check_func, counts, eps, measure, idx):
    """Run ``check_func`` on the draws of task ``idx``."""
    count = counts[idx - 1]
    draws = {}
    for s in sampler.values():
        if isinstance(s, DirectionSampler):
            draws['directions'] = s.directions[:count]
        elif isinstance(s, MultivectorSampler):
            draws['coefficients'] = s.coefficients[:count]
        elif isinstance(s, RotationSampler):
            draws['rotations'] = s.rotations[:count]
    outcome = check_func(draws, eps, measure)
    return {
        'residual': float(outcome.residual),
        'evaluated': int(outcome.evaluated),
        'failures': int(outcome.failures),
        'skipped': int(outcome.skipped),
    }


def _settings(draws):
    return np.asarray(draws['directions'], dtype=float)


def _columns(draws):
    d = _settings(draws)
    return tuple(d[:, k] for k in range(d.shape[1]))


def _max(*residuals):
    return float(max((np.max(r, initial=0.0) for r in residuals), default=0.0))


def _count(mask):
    return int(np.count_nonzero(mask))


# requirement (1)


def check_associativity(draws, eps, measure):
    x, y, z = np.moveaxis(np.asarray(draws['coefficients']), 1, 0)
    left = batch.product(batch.product(x, y), z)
    right = batch.product(x, batch.product(y, z))
    return CheckOutcome(_max(batch.max_abs(left - right)), len(x))


def check_basis_relations(draws, eps, measure):
    residuals = []
    basis = (E1, E2, E3)
    for i, ei in enumerate(basis):
        residuals.append(max_abs(ei * ei - ONE))
        residuals.extend(max_abs(ei * ej + ej * ei) for ej in basis[i + 1 :])
    residuals.append(max_abs(PSEUDOSCALAR * PSEUDOSCALAR + ONE))
    residuals.append(max_abs(E1 * E2 * E3 - PSEUDOSCALAR))
    residuals.extend([max_abs(E2 * E3 - E23), max_abs(E3 * E1 - E31), max_abs(E1 * E2 - E12)])
    residuals.extend(max_abs(commutator(PSEUDOSCALAR, blade(name))) for name in BLADES)
    return CheckOutcome(_max(residuals), len(residuals))


def check_duality(draws, eps, measure):
    (n,) = _columns(draws)
    B = batch.dual(n)
    residual = np.maximum(
        batch.max_abs(B - batch.product(batch.PSEUDOSCALAR, batch.vector(n))),
        batch.max_abs(batch.product(B, B) + batch.ONE),
    )
    return CheckOutcome(_max(residual), len(n))


def check_bivector_inverse(draws, eps, measure):
    (n,) = _columns(draws)
    B = batch.dual(n)
    inverse = batch.versor_inverse(B)
    residual = np.maximum(batch.max_abs(inverse + B), batch.max_abs(batch.product(B, inverse) - batch.ONE))
    return CheckOutcome(_max(residual), len(n))


# requirement (2)


def check_dichotomic(draws, eps, measure):
    (n,) = _columns(draws)
    residuals = []
    failures = 0
    for sign in (1, -1):
        A = batch.observable(n, sign)
        residuals.append(np.maximum(np.abs(batch.norm(A) - 1.0), batch.max_abs(batch.oriented(A, A, sign) + batch.ONE)))
        failures += _count(np.abs(batch.event_readout(n, sign)) != 1)
    return CheckOutcome(_max(*residuals), 2 * len(n), failures)


# requirement (3)


def check_single_expectation(draws, eps, measure):
    (n,) = _columns(draws)
    average = batch.ensemble_average(lambda sign: batch.observable(n, sign), measure)
    quantum = batch.singlet_expectation(batch.tensor(batch.pauli_projection(n), IDENTITY))
    failures = _count(np.any(average != 0.0, axis=-1))
    return CheckOutcome(_max(batch.max_abs(average), np.abs(quantum)), len(n), failures)


# requirement (4)


def check_joint_expectation(draws, eps, measure):
    a, b = _columns(draws)
    joint = batch.joint_expectation(a, b, measure)
    perfect = batch.joint_expectation(a, a, measure)[:, 0]
    failures = _count(batch.max_nonscalar(joint) > GRADE_CANCELLATION_TOLERANCE)
    return CheckOutcome(_max(np.abs(joint[:, 0] + batch.dot(a, b)), np.abs(perfect + 1.0)), len(a), failures)


def check_singlet_agreement(draws, eps, measure):
    a, b = _columns(draws)
    quantum = batch.spin_correlation(a, b)
    model = batch.joint_expectation(a, b, measure)[:, 0]
    return CheckOutcome(_max(np.abs(quantum + batch.dot(a, b)), np.abs(quantum - model)), len(a))


# requirement (5)


def check_factorizability(draws, eps, measure):
    a, b = _columns(draws)
    residuals = [batch.factorizability_residual(a, b, sign) for sign in (1, -1)]
    return CheckOutcome(_max(*residuals), 2 * len(a))


def check_parameter_independence(draws, eps, measure):
    a, b, b_prime = _columns(draws)
    residuals = [batch.parameter_independence_residuals(a, b, b_prime, sign) for sign in (1, -1)]
    return CheckOutcome(_max(*residuals), 2 * len(a))


def check_outcome_independence(draws, eps, measure):
    a, b = _columns(draws)
    residuals, valid = batch.outcome_independence_residuals(a, b)
    return CheckOutcome(_max(residuals[valid]), _count(valid), skipped=_count(~valid))


def check_sign_rule(draws, eps, measure):
    a, b = _columns(draws)
    residuals, valid = batch.sign_rule_residuals(a, b)
    return CheckOutcome(_max(residuals[valid]), 4 * _count(valid), skipped=_count(~valid))


# requirement (6)


def check_measure_independence(draws, eps, measure):
    measure = measure or EnsembleMeasure()
    d = _settings(draws)
    before = measure.weights
    # recovered per setting from the averaged observables, shape (N, 4)
    implied = batch.implied_weight(d, measure)
    batch.chsh_average(d, measure)
    failures = int(measure.weights != before)
    declared = measure.weight(Orientation.RIGHT)
    residuals = (
        np.abs(implied - declared),
        implied.max(axis=-1) - implied.min(axis=-1),
        np.ptp(implied) if implied.size else 0.0,
        abs(sum(measure.weights.values()) - 1.0),
    )
    return CheckOutcome(_max(*residuals), implied.size, failures)


# requirement (7)


def check_cosine_combination(draws, eps, measure):
    d = _settings(draws)
    return CheckOutcome(_max(np.abs(batch.chsh_value(d, measure) - batch.cosine_combination(d))), len(d))


def check_seevinck_identity(draws, eps, measure):
    d = _settings(draws)
    residuals = [batch.max_abs(batch.seevinck_product(d, sign) - batch.seevinck_target(d, sign)) for sign in (1, -1)]
    return CheckOutcome(_max(*residuals), 2 * len(d))


def check_seevinck_average(draws, eps, measure):
    d = _settings(draws)
    average = batch.seevinck_average(d, measure)
    residual = np.maximum(np.abs(average[:, 0] + 4.0 * batch.cross_dot_model(d)), batch.max_nonscalar(average))
    return CheckOutcome(_max(residual), len(d))


def check_cross_commutator_average(draws, eps, measure):
    a, a_prime, b, b_prime = _columns(draws)
    residuals = (
        batch.max_abs(batch.cross_commutator_average(a, a_prime, measure)),
        batch.max_abs(batch.cross_commutator_average(b_prime, b, measure)),
    )
    return CheckOutcome(_max(*residuals), 2 * len(a))


def check_model_bound(draws, eps, measure):
    d = _settings(draws)
    bound = batch.model_bound(d)
    excess = np.abs(batch.chsh_value(d, measure)) - bound
    failures = _count(bound > TSIRELSON + eps)
    return CheckOutcome(_max(np.maximum(excess, 0.0)), len(d), failures)


def check_bell_squared(draws, eps, measure):
    d = _settings(draws)
    op = batch.bell_operator(d)
    squared = batch.singlet_expectation(op @ op)
    failures = _count(np.abs(squared - (4.0 - 4.0 * batch.cross_dot_quantum(d))) > 1e-10)
    return CheckOutcome(_max(batch.bell_squared_residual(d)), len(d), failures)


def check_bell_expectation(draws, eps, measure):
    d = _settings(draws)
    expectation = batch.bell_expectation(d)
    bound = batch.qm_chsh_bound(d)
    failures = _count(bound.bell_squared_expectation + 1e-10 < expectation**2)
    failures += _count(np.abs(expectation) > bound.bound + 1e-9)
    return CheckOutcome(_max(np.abs(expectation - batch.chsh_value(d, measure))), len(d), failures)


def check_rotational_covariance(draws, eps, measure):
    d = _settings(draws)
    rotated = batch.rotate(d, draws['rotations'])

    def joint(settings):
        return batch.joint_expectation(settings[:, 0], settings[:, 2], measure)[:, 0]

    residuals = (
        np.abs(batch.chsh_value(rotated, measure) - batch.chsh_value(d, measure)),
        np.abs(batch.bell_expectation(rotated) - batch.bell_expectation(d)),
        np.abs(joint(rotated) - joint(d)),
        np.abs(batch.seevinck_average(rotated, measure)[:, 0] - batch.seevinck_average(d, measure)[:, 0]),
        np.abs(batch.model_bound(rotated) - batch.model_bound(d)),
    )
    return CheckOutcome(_max(*residuals), len(d))


def check_chsh_extremum(draws, eps, measure):
    reports = chsh_sweep('xy', np.pi / 180, measure)
    best = sweep_maximum(reports)
    cfg = ChshConfig.from_angles(best.angles)
    residuals = [
        abs(abs(best.chsh_value) - TSIRELSON),
        abs(best.model_bound - TSIRELSON),
        abs(qm_chsh_bound(cfg).bound - TSIRELSON),
    ]
    degrees = tuple(int(round(d)) % 360 for d in np.rad2deg(best.angles))
    failures = int(degrees != (0, 90, 45, 315))
    return CheckOutcome(_max(residuals), len(reports), failures)


# requirement (8)


def check_malus_expectation(draws, eps, measure):
    a, p = _columns(draws)
    residuals = []
    for s in (1, -1):
        value = batch.malus_expectation(a, p, s, measure)
        quantum = batch.polarized_expectation(a, p, s)
        cosine = batch.dot(a, p)
        residuals.extend([np.abs(value[:, 0] - cosine), batch.max_nonscalar(value), np.abs(quantum - s * cosine)])
    return CheckOutcome(_max(*residuals), 2 * len(a))


def check_sequential_chain(draws, eps, measure):
    def at(degrees):
        return Direction.from_angle(np.deg2rad(degrees))

    prep = Preparation(p=at(0.0), s=1)
    cases = [
        (sequential_chain([at(45.0), at(90.0)], prep, measure), [np.sqrt(0.5), np.sqrt(0.5)]),
        (sequential_chain([at(0.0)], prep, measure), [1.0]),
        (sequential_chain([at(90.0), at(180.0), at(270.0)], prep, measure), [0.0, 0.0, 0.0]),
        (sequential_chain([at(60.0)], Preparation(p=at(0.0), s=-1), measure), [0.5]),
    ]
    residuals = [abs(v - e) for values, expected in cases for v, e in zip(values, expected, strict=True)]
    # the last step only depends on the last two analyzers
    tails = [sequential_chain(history + [at(30.0), at(75.0)], prep, measure)[-1] for history in ([], [at(10.0)], [at(200.0), at(-40.0)])]
    failures = int(len(set(tails)) != 1)
    return CheckOutcome(_max(residuals), len(residuals) + len(tails), failures)


# identities


def check_bivector_identity(draws, eps, measure):
    a, b = _columns(draws)
    residuals = [batch.max_abs(batch.bivector_identity_residual(a, b, sign)) for sign in (1, -1)]
    return CheckOutcome(_max(*residuals), 2 * len(a))


def check_commutator_relation(draws, eps, measure):
    a, b = _columns(draws)
    _, _, valid = batch.normalized_axis(a, b)
    residuals = []
    for sign in (1, -1):
        residuals.append(batch.max_abs(batch.commutator_relation_residual(a, b, sign)))
        residuals.append(batch.max_abs(batch.commutator_relation_residual(a, b, sign, normalized=True))[valid])
    return CheckOutcome(_max(*residuals), 2 * len(a) + 2 * _count(valid), skipped=2 * _count(~valid))


def check_catalog():
    """Return the registered checks in report order."""
    return [
        MultivectorCheck(name='algebra_associativity', requirement='1', label='(x y) z = x (y z) for general multivectors', tolerance_factor=100.0, func=check_associativity),
        DirectionCheck(name='algebra_basis_relations', requirement='1', label='e_i e_j + e_j e_i = 2 delta_ij, I^2 = -1, I central', func=check_basis_relations),
        DirectionCheck(name='duality_consistency', requirement='1', label='dual(n) = I n and dual(n)^2 = -1', ndirections=1, func=check_duality),
        DirectionCheck(name='bivector_inverse', requirement='1', label='unit bivectors are invertible with inverse -B', ndirections=1, func=check_bivector_inverse),
        DirectionCheck(name='observable_dichotomic', requirement='2', label='mu n is a unit bivector squaring to -1 with readout +-1', ndirections=1, func=check_dichotomic),
        DirectionCheck(name='single_expectation', requirement='3', label='<mu n> = 0 exactly and <psi| sigma.n x 1 |psi> = 0', ndirections=1, func=check_single_expectation),
        DirectionCheck(name='joint_expectation', requirement='4', label='<(mu a)(mu b)> = -a.b, other grades <= 1e-15, -1 at a = b', ndirections=2, func=check_joint_expectation),
        DirectionCheck(name='singlet_agreement', requirement='4', label='singlet correlation equals the model average', ndirections=2, func=check_singlet_agreement),
        DirectionCheck(name='factorizability', requirement='5', label='(A_a B_b)(mu) = A_a(mu) B_b(mu)', ndirections=2, func=check_factorizability),
        DirectionCheck(name='parameter_independence', requirement='5', label='local observable unaffected by the remote setting', ndirections=3, func=check_parameter_independence),
        DirectionCheck(name='outcome_independence', requirement='5', label='local observable unaffected by the remote outcome', ndirections=2, func=check_outcome_independence),
        DirectionCheck(name='sign_rule', requirement='5', label='sense of mu z is the product of the senses of mu a and mu b', ndirections=2, func=check_sign_rule),
        DirectionCheck(name='measure_setting_independence', requirement='6', label='measure recovered from the observable averages is the same under every setting', ndirections=4, func=check_measure_independence),
        DirectionCheck(name='chsh_cosine_combination', requirement='7', label='CHSH value equals -a.b - a.b\' - a\'.b + a\'.b\'', ndirections=4, func=check_cosine_combination),
        DirectionCheck(name='seevinck_identity', requirement='7', label='[A_a, A_a\'][B_b\', B_b] = 4 (mu (a x a\'))(mu (b\' x b)) per microstate', ndirections=4, func=check_seevinck_identity),
        DirectionCheck(name='seevinck_average', requirement='7', label='averaged commutator product equals -4 (a x a\').(b\' x b)', ndirections=4, func=check_seevinck_average),
        DirectionCheck(name='cross_commutator_average', requirement='7', label='averaged commutators [A_a, A_a\'] and [B_b\', B_b] vanish', ndirections=4, func=check_cross_commutator_average),
        DirectionCheck(name='chsh_within_model_bound', requirement='7', label='|CHSH| <= sqrt(4 + 4 |(a x a\').(b\' x b)|) <= 2 sqrt 2', ndirections=4, func=check_model_bound),
        DirectionCheck(name='bell_squared_identity', requirement='7', label='B^2 = 4 + 4 sigma(a x a\') x sigma(b x b\')', ndirections=4, func=check_bell_squared),
        DirectionCheck(name='bell_expectation_agreement', requirement='7', label='<psi| B |psi> equals the model CHSH value', ndirections=4, func=check_bell_expectation),
        RotationCheck(name='rotational_covariance', requirement='7', label='scalar expectations invariant under a common rotation', ndirections=4, tolerance_factor=100.0, func=check_rotational_covariance),
        DirectionCheck(name='chsh_extremum', requirement='7', label='1 degree coplanar sweep peaks at 2 sqrt 2 at (0, 90, 45, 315) degrees', tolerance_factor=1000.0, func=check_chsh_extremum),
        DirectionCheck(name='malus_expectation', requirement='8', label='preselected expectation equals a.p for both spin values', ndirections=2, func=check_malus_expectation),
        DirectionCheck(name='malus_sequential_chain', requirement='8', label='re-prepared analyzer chain gives successive cosines', func=check_sequential_chain),
        DirectionCheck(name='bivector_product_identity', requirement='identity', label='(mu a)(mu b) = -a.b - mu (a x b)', ndirections=2, sample_factor=10, func=check_bivector_identity),
        DirectionCheck(name='commutator_relation', requirement='identity', label='[mu a, mu b] = -2 mu (a x b)', ndirections=2, func=check_commutator_relation),
    ]


class CheckResult(HasStrictTraits):
    """Aggregated outcome of one check."""

    name = Str
    requirement = Str
    label = Str
    passed = Bool
    max_residual = Float
    tolerance = Float
    evaluated = Int
    failures = Int
    skipped = Int
    #: wall-clock seconds
    elapsed = Float
    #: message of an exception raised while evaluating the check
    error = Str

    def as_row(self):
        return {
            'name': self.name,
            'requirement': self.requirement,
            'label': self.label,
            'passed': self.passed,
            'max_residual': self.max_residual,
            'tolerance': self.tolerance,
            'evaluated': self.evaluated,
            'failures': self.failures,
            'skipped': self.skipped,
            'elapsed': self.elapsed,
        }


class SuiteResult(HasStrictTraits):
    """Outcome of a verification run, one :class:`CheckResult` per registered check."""

    checks = List(Instance(CheckResult))

    #: True iff every check passed
    passed = Property(depends_on=['checks'])

    def _get_passed(self):
        return all(check.passed for check in self.checks)

    def requirements(self):
        """Return requirement key -> all checks of the requirement passed."""
        return {
            key: all(check.passed for check in self.checks if check.requirement == key)
            for key in REQUIREMENTS
            if any(check.requirement == key for check in self.checks)
        }

    def failed(self):
        return [check.name for check in self.checks if not check.passed]

    def errors(self):
        """Return check name -> error message of the checks that raised."""
        return {check.name: check.error for check in self.checks if check.error}

    def _summary(self):
        summary = {'passed': self.passed, 'requirements': self.requirements(), 'failed_checks': self.failed()}
        if self.errors():
            summary['errors'] = self.errors()
        return summary

    def as_report(self, metadata):
        """Return the :class:`~cliffbell.writer.Report` of the run."""
        return Report(
            command='verify',
            metadata=dict(metadata),
            columns=list(self.checks[0].as_row()) if self.checks else [],
            timing_columns=['elapsed'],
            rows=[check.as_row() for check in self.checks],
            summary=self._summary(),
        )


def catalog_report():
    """Return the mapping of every registered check to its requirement."""
    rows = [
        {
            'name': check.name,
            'requirement': check.requirement,
            'requirement_title': REQUIREMENTS[check.requirement],
            'label': check.label,
            'sampled': check.sampled,
            'tolerance_factor': check.tolerance_factor,
            'sample_factor': check.sample_factor,
        }
        for check in check_catalog()
    ]
    return Report(command='list', columns=list(rows[0]), rows=rows, summary={'checks': len(rows)})


class VerifySuite(SuiteBase):
    """Run every registered check with a common seed, sample count and tolerance."""

    #: checks in report order
    catalog = Property(desc='registered checks')

    _catalog = List(Instance(BaseCheck))

    def _get_catalog(self):
        if not self._catalog:
            self._catalog = check_catalog()
        return self._catalog

    def _set_catalog(self, catalog):
        names = [check.name for check in catalog]
        if len(set(names)) != len(names):
            msg = f'Check names must be unique, got {names}.'
            raise ValueError(msg)
        unknown = [check.requirement for check in catalog if check.requirement not in REQUIREMENTS]
        if unknown:
            msg = f'Unknown requirement keys {unknown}.'
            raise ValueError(msg)
        self._catalog = list(catalog)

    def run_check(self, check, position, seed, samples, tolerance):
        """Evaluate one check and return its :class:`CheckResult`."""
        eps = tolerance * check.tolerance_factor
        pipeline = self.get_pipeline_instance()
        if check.sampled:
            samples = samples * check.sample_factor
            counts = chunk_sizes(samples, CHUNK_SIZE)
            pipeline.sampler = check.get_sampler(min(CHUNK_SIZE, samples))
            set_pipeline_seeds(pipeline, seed, len(counts), offset=position * CHECK_SEED_OFFSET)
        else:
            counts = [0]
            pipeline.numsamples = 1
        pipeline.features = (evaluate_task, check.get_check_func(), counts, eps, self.measure)
        self.logger.info(f'check {check.name}: {len(counts)} task(s).')
        start = time()
        residual, evaluated, failures, skipped = 0.0, 0, 0, 0
        error = ''
        try:
            for data in self._generate(pipeline):
                residual = max(residual, data['residual'])
                evaluated += data['evaluated']
                failures += data['failures']
                skipped += data['skipped']
        except (ValueError, ArithmeticError) as exc:
            error = f'{type(exc).__name__}: {exc}'
            failures += 1
            self.logger.error(f'check {check.name} raised {error}')
        passed = failures == 0 and residual <= eps
        self.logger.info(f'check {check.name}: residual {residual:.3e}, passed {passed}.')
        return CheckResult(
            name=check.name,
            requirement=check.requirement,
            label=check.label,
            passed=passed,
            max_residual=residual,
            tolerance=eps,
            evaluated=evaluated,
            failures=failures,
            skipped=skipped,
            elapsed=time() - start,
            error=error,
        )

    def run(self, seed, samples, tolerance):
        """Run every registered check.

        Parameters
        ----------
        seed : int
            master seed; each check and sampler derives its seeds from it.
        samples : int
            number of random configurations per sampled check.
        tolerance : float
            run tolerance (non-negative).

        Returns
        -------
        SuiteResult
            results in registry order.
        """
        if samples < 1:
            msg = f'Number of samples must be at least 1, got {samples}.'
            raise ValueError(msg)
        if not tolerance >= 0.0:
            msg = f'Tolerance must be non-negative, got {tolerance}.'
            raise ValueError(msg)
        return SuiteResult(
            checks=[self.run_check(check, position, seed, samples, tolerance) for position, check in enumerate(self.catalog)],
        )
