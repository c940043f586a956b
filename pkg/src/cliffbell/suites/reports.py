"""Report builders of the ``chsh-sweep``, ``quantum-compare``, ``malus`` and ``event-diag`` commands.

Sweep rows list the CHSH report quantities first and the four setting angles last.
Grid reports split their angle grid into blocks of :data:`~cliffbell.config.ROW_BLOCK`
rows; each block is one pipeline task and rows are collected in grid order, so the
table does not depend on the number of tasks.
"""

import numpy as np
from traits.api import Bool, Enum, Float, List, Property

from cliffbell.algebra import Direction
from cliffbell.chsh import (
    ChshConfig,
    angle_grid,
    chsh_report,
    chsh_value,
    cross_dot_model,
    f_squared_exact,
    f_squared_paper_decomposition,
    model_bound,
    sweep_angles,
)
from cliffbell.config import ROW_BLOCK
from cliffbell.malus import Preparation, sequential_chain
from cliffbell.model import ensemble_average, event_level_correlation, joint_expectation
from cliffbell.quantum import bell_expectation, polarized_expectation, qm_chsh_bound, spin_correlation
from cliffbell.suites.base import SuiteBase
from cliffbell.writer import Report

ANGLE_COLUMNS = ['theta_a', 'theta_a_prime', 'theta_b', 'theta_b_prime']


def evaluate_block(sampler, row_func, items, args, idx):
    """Evaluate ``row_func(item, *args)`` for the items of block ``idx``."""
    block = items[(idx - 1) * ROW_BLOCK : idx * ROW_BLOCK]
    return {'rows': [row_func(item, *args) for item in block]}


def _angle_cells(angles):
    return dict(zip(ANGLE_COLUMNS, (float(angle) for angle in angles), strict=True))


def sweep_row(angles, plane, measure, tolerance):
    cfg = ChshConfig.from_angles(angles, plane)
    return {**chsh_report(cfg, measure, tolerance).as_dict(), **_angle_cells(angles)}


def compare_row(angles, plane, measure):
    cfg = ChshConfig.from_angles(angles, plane)
    e_model = joint_expectation(cfg.a, cfg.b, measure).scalar
    e_quantum = spin_correlation(cfg.a, cfg.b)
    chsh_model = chsh_value(cfg, measure)
    chsh_quantum = bell_expectation(cfg)
    bound_model = model_bound(cfg)
    quantum = qm_chsh_bound(cfg)
    f2_exact = ensemble_average(lambda mu: f_squared_exact(cfg, mu), measure).scalar
    f2_paper = ensemble_average(lambda mu: f_squared_paper_decomposition(cfg, mu), measure).scalar
    return {
        **_angle_cells(angles),
        'e_model': e_model,
        'e_quantum': e_quantum,
        'e_diff': abs(e_model - e_quantum),
        'chsh_model': chsh_model,
        'chsh_quantum': chsh_quantum,
        'chsh_diff': abs(chsh_model - chsh_quantum),
        'bound_model': bound_model,
        'bound_quantum': quantum.bound,
        'bound_diff': abs(bound_model - quantum.bound),
        'b2_quantum': quantum.bell_squared_expectation,
        'f2_exact_avg': f2_exact,
        'f2_paper_avg': f2_paper,
        'f2_exact_diff': abs(f2_exact - quantum.bell_squared_expectation),
        'f2_paper_diff': abs(f2_paper - quantum.bell_squared_expectation),
        'cross_dot_model': cross_dot_model(cfg),
        'cross_dot_quantum': quantum.cross_dot,
    }


def event_row(theta, plane, measure):
    a = Direction.from_angle(0.0, plane)
    b = Direction.from_angle(theta, plane)
    event = event_level_correlation(a, b, measure)
    algebra = joint_expectation(a, b, measure).scalar
    return {
        'theta': float(theta),
        'theta_deg': float(np.rad2deg(theta)),
        'event_correlation': event,
        'algebra_correlation': algebra,
        'difference': event - algebra,
    }


class GridSuite(SuiteBase):
    """Base class of the reports evaluated on a coplanar angle grid."""

    #: coordinate plane of all settings
    plane = Enum('xy', 'yz', 'zx', desc='coordinate plane of the settings')

    #: grid step in radians, in (0, pi]
    step = Property(desc='angular step of the grid')

    _step = Float(np.pi / 180)

    def _get_step(self):
        return self._step

    def _set_step(self, step):
        angle_grid(step)  # validates
        self._step = float(step)

    def _rows(self, row_func, items, *args):
        pipeline = self.get_pipeline_instance()
        pipeline.numsamples = -(-len(items) // ROW_BLOCK)
        pipeline.features = (evaluate_block, row_func, list(items), args)
        rows = []
        for data in self._generate(pipeline):
            rows.extend(data['rows'])
        return rows

    def _metadata(self, **extra):
        return {'plane': self.plane, 'step': self.step, 'step_deg': float(np.rad2deg(self.step)), **extra}


class ChshSweepSuite(GridSuite):
    """Tabulate every CHSH quantity over the sweep grid."""

    #: vary b and b' independently instead of b' = b + 3 pi / 2
    full_grid = Bool(False, desc='two-dimensional grid over b and b_prime')

    def build(self, tolerance):
        """Return the ``chsh-sweep`` :class:`~cliffbell.writer.Report`."""
        angle_sets = sweep_angles(self.step, self.full_grid)
        self.logger.info(f'chsh-sweep: {len(angle_sets)} grid points in plane {self.plane}.')
        rows = self._rows(sweep_row, angle_sets, self.plane, self.measure, tolerance)
        values = np.abs([row['chsh_value'] for row in rows])
        best = rows[int(np.argmax(values >= values.max() - 1e-12))]
        angles = [best[c] for c in ANGLE_COLUMNS]
        cfg = ChshConfig.from_angles(angles, self.plane)
        return Report(
            command='chsh-sweep',
            metadata=self._metadata(full_grid=self.full_grid, tolerance=tolerance),
            columns=list(rows[0]),
            multivector_columns=['f2_exact_avg', 'residual'],
            rows=rows,
            summary={
                'max_abs_chsh': float(abs(best['chsh_value'])),
                'argmax_angles': angles,
                'argmax_angles_deg': [float(np.rad2deg(angle)) for angle in angles],
                'model_bound_at_max': best['model_bound'],
                'qm_bound_at_max': qm_chsh_bound(cfg).bound,
                'tsirelson': float(2.0 * np.sqrt(2.0)),
            },
        )


class QuantumCompareSuite(GridSuite):
    """Put model and singlet values side by side over the sweep grid.

    Correlations and CHSH values must agree within the tolerance. Bounds and the
    squared CHSH quantities are reported without a pass criterion.
    """

    def build(self, tolerance):
        """Return the ``quantum-compare`` :class:`~cliffbell.writer.Report`."""
        angle_sets = sweep_angles(self.step)
        self.logger.info(f'quantum-compare: {len(angle_sets)} grid points in plane {self.plane}.')
        rows = self._rows(compare_row, angle_sets, self.plane, self.measure)
        max_e_diff = max(row['e_diff'] for row in rows)
        max_chsh_diff = max(row['chsh_diff'] for row in rows)
        return Report(
            command='quantum-compare',
            metadata=self._metadata(tolerance=tolerance),
            columns=list(rows[0]),
            rows=rows,
            summary={
                'max_e_diff': max_e_diff,
                'max_chsh_diff': max_chsh_diff,
                'max_bound_diff': max(row['bound_diff'] for row in rows),
                'max_f2_exact_diff': max(row['f2_exact_diff'] for row in rows),
                'max_f2_paper_diff': max(row['f2_paper_diff'] for row in rows),
                'passed': bool(max_e_diff <= tolerance and max_chsh_diff <= tolerance),
            },
        )


class EventDiagSuite(GridSuite):
    """Compare the event-level readout correlation with the algebraic correlation.

    This is a diagnostic; the two columns are not expected to agree.
    """

    def build(self):
        """Return the ``event-diag`` :class:`~cliffbell.writer.Report`."""
        grid = angle_grid(self.step)
        rows = self._rows(event_row, [float(theta) for theta in grid], self.plane, self.measure)
        return Report(
            command='event-diag',
            metadata=self._metadata(diagnostic=True, pass_criterion=None),
            columns=list(rows[0]),
            rows=rows,
            summary={
                'rows': len(rows),
                'max_abs_difference': max(abs(row['difference']) for row in rows),
            },
        )


class MalusSuite(SuiteBase):
    """Follow a preparation through a chain of analyzers.

    The chain holds relative rotations: analyzer ``k`` sits at the polarizer angle plus
    the sum of the first ``k`` entries. Each analyzer re-prepares the subensemble for the
    next one.
    """

    #: relative rotations in radians
    chain = List(Float, desc='relative analyzer rotations')

    plane = Enum('xy', 'yz', 'zx', desc='coordinate plane of polarizer and analyzers')

    #: polarizer angle in radians
    polarizer = Float(0.0, desc='angle of the initial polarizer')

    #: spin value selected by the polarizer
    spin = Enum(1, -1, desc='selected spin value')

    def build(self, tolerance):
        """Return the ``malus`` :class:`~cliffbell.writer.Report`."""
        if not self.chain:
            msg = 'Analyzer chain is empty.'
            raise ValueError(msg)
        angles = self.polarizer + np.cumsum(self.chain)
        analyzers = [Direction.from_angle(angle, self.plane) for angle in angles]
        polarizers = [Direction.from_angle(self.polarizer, self.plane), *analyzers[:-1]]
        prep = Preparation(p=polarizers[0], s=self.spin)
        values = sequential_chain(analyzers, prep, self.measure)
        rows = []
        cumulative = 1.0
        for k, (relative, angle, a, p, value) in enumerate(zip(self.chain, angles, analyzers, polarizers, values, strict=True)):
            quantum = polarized_expectation(a, p, 1)
            cumulative *= value
            rows.append(
                {
                    'step': k + 1,
                    'relative_angle': float(relative),
                    'relative_angle_deg': float(np.rad2deg(relative)),
                    'analyzer_angle': float(angle),
                    'model': value,
                    'quantum': quantum,
                    'diff': abs(value - quantum),
                    'quantum_polarized': polarized_expectation(a, p, self.spin),
                    'cumulative': cumulative,
                },
            )
        max_diff = max(row['diff'] for row in rows)
        self.logger.info(f'malus: {len(rows)} analyzer(s), max difference {max_diff:.3e}.')
        return Report(
            command='malus',
            metadata={
                'plane': self.plane,
                'polarizer': self.polarizer,
                'spin': self.spin,
                'chain': list(self.chain),
                'tolerance': tolerance,
            },
            columns=list(rows[0]),
            rows=rows,
            summary={
                'values': values,
                'cumulative_product': cumulative,
                'max_diff': max_diff,
                'passed': bool(max_diff <= tolerance),
            },
        )
