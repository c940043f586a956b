"""Command-line interface: ``cliffbell <command> [options]``.

Commands
--------
verify
    run every registered check; exit 1 if one fails.
chsh-sweep
    tabulate the CHSH quantities over a coplanar angle grid.
quantum-compare
    model and singlet values side by side; exit 1 if correlations or CHSH values differ.
malus
    expectations along a chain of analyzers; exit 1 if model and quantum values differ.
event-diag
    event-level readout correlation next to the algebraic one (diagnostic only).

Exit codes are 0 (success), 1 (failed check or failed evaluation) and 2 (invalid arguments
or unwritable output).
"""

import argparse
import logging
import os
import sys

import numpy as np
from traits.api import Bool, Enum, Float, HasStrictTraits, Int, Property, Str, TraitError

from cliffbell.config import DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE, RAY_FLAG
from cliffbell.suites.checks import VerifySuite, catalog_report
from cliffbell.suites.reports import ChshSweepSuite, EventDiagSuite, MalusSuite, QuantumCompareSuite
from cliffbell.suites.utils import _handle_log, parse_angle, parse_chain
from cliffbell.version import __version__
from cliffbell.writer import WRITERS, get_writer

COMMANDS = ('verify', 'chsh-sweep', 'quantum-compare', 'malus', 'event-diag')

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

logger = logging.getLogger('cliffbell')


class UsageError(ValueError):
    """Invalid command-line arguments."""


class RunConfig(HasStrictTraits):
    """Validated run parameters shared by all commands."""

    command = Enum(*COMMANDS)

    #: master seed, unsigned 64 bit
    seed = Property(desc='master seed')

    #: random configurations per sampled check
    samples = Property(desc='number of random configurations')

    #: absolute tolerance, non-negative
    tolerance = Property(desc='absolute tolerance')

    output_format = Enum(*WRITERS)
    output_path = Str
    timings = Bool(False)
    tasks = Int(1)
    progress = Bool(False)

    _seed = Int(DEFAULT_SEED)
    _samples = Int(DEFAULT_SAMPLES)
    _tolerance = Float(DEFAULT_TOLERANCE)

    def _get_seed(self):
        return self._seed

    def _set_seed(self, seed):
        if not 0 <= seed < 2**64:
            msg = f'Seed must be an unsigned 64-bit integer, got {seed}.'
            raise ValueError(msg)
        self._seed = seed

    def _get_samples(self):
        return self._samples

    def _set_samples(self, samples):
        if samples < 1:
            msg = f'Number of samples must be at least 1, got {samples}.'
            raise ValueError(msg)
        self._samples = samples

    def _get_tolerance(self):
        return self._tolerance

    def _set_tolerance(self, tolerance):
        tolerance = float(tolerance)
        if not (np.isfinite(tolerance) and tolerance >= 0.0):
            msg = f'Tolerance must be finite and non-negative, got {tolerance}.'
            raise ValueError(msg)
        self._tolerance = tolerance

    def validate_output(self):
        """Raise ``ValueError`` if the report cannot be written to :attr:`output_path`."""
        if self.output_format == 'h5' and not self.output_path:
            msg = 'Format h5 needs an output file (--out).'
            raise ValueError(msg)
        if not self.output_path:
            return
        directory = os.path.dirname(os.path.abspath(self.output_path))
        if os.path.isdir(self.output_path) or not os.path.isdir(directory) or not os.access(directory, os.W_OK):
            msg = f'Cannot write to {self.output_path}.'
            raise ValueError(msg)


def _angle(text):
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _chain(text):
    try:
        return parse_chain(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    """Return the argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'Master seed (unsigned 64 bit). Default: {DEFAULT_SEED}')
    common.add_argument(
        '--samples',
        type=int,
        default=DEFAULT_SAMPLES,
        help=f'Random configurations per sampled check. Default: {DEFAULT_SAMPLES}',
    )
    common.add_argument(
        '--tolerance',
        type=float,
        default=DEFAULT_TOLERANCE,
        help=f'Absolute tolerance of identity residuals. Default: {DEFAULT_TOLERANCE}',
    )
    common.add_argument('--format', default='json', choices=list(WRITERS), help="Output format. Default is 'json'")
    common.add_argument('--out', type=str, default=None, help='Output file. Default: stdout (not for h5)')
    common.add_argument('--list', action='store_true', help='Print the registry mapping checks to requirements and exit')
    common.add_argument('--timings', action='store_true', help='Include elapsed times in json/csv/h5 output')
    common.add_argument(
        '--tasks',
        type=int,
        default=1,
        help="Number of asynchronous tasks. Defaults to '1' (non-distributed)",
    )
    common.add_argument(
        '--head',
        type=str,
        default=None,
        help='IP address of the head node in the ray cluster. Only necessary when running in distributed mode.',
    )
    common.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')
    common.add_argument('--log', action='store_true', help='Log timing statistics to stderr')
    common.add_argument('--log-file', type=str, default=None, help='Also write the log to this file')

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument('--step', type=_angle, default=np.pi / 180, help="Grid step in radians or degrees ('1deg'). Default: 1deg")
    grid.add_argument('--plane', default='xy', choices=['xy', 'yz', 'zx'], help="Plane of the settings. Default is 'xy'")

    parser = argparse.ArgumentParser(prog='cliffbell', description=__doc__.splitlines()[0])
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('verify', parents=[common], help='Run every registered check')
    sweep = commands.add_parser('chsh-sweep', parents=[common, grid], help='CHSH quantities over an angle grid')
    sweep.add_argument('--full-grid', action='store_true', help="Vary b and b' independently")
    commands.add_parser('quantum-compare', parents=[common, grid], help='Model and singlet values side by side')
    malus = commands.add_parser('malus', parents=[common], help='Expectations along a chain of analyzers')
    malus.add_argument(
        '--chain',
        type=_chain,
        default=None,
        help="Comma separated relative analyzer rotations, e.g. '45deg,45deg'",
    )
    malus.add_argument('--plane', default='xy', choices=['xy', 'yz', 'zx'], help="Plane of polarizer and analyzers. Default is 'xy'")
    malus.add_argument('--polarizer', type=_angle, default=0.0, help='Polarizer angle. Default: 0')
    malus.add_argument('--spin', type=int, default=1, choices=[1, -1], help='Selected spin value. Default: 1')
    commands.add_parser('event-diag', parents=[common, grid], help='Event-level readout diagnostic')
    return parser


def _init_logging(args):
    if args.log:
        logging.basicConfig(level=logging.INFO)  # root logger, stderr
    if args.log_file:
        return _handle_log(args.log_file)
    return None


def _init_ray(args):
    if args.tasks <= 1:
        return
    import ray  # noqa: PLC0415

    ray.init(address=args.head, log_to_driver=args.log)


def _metadata(cfg):
    return {'version': __version__, 'seed': cfg.seed, 'samples': cfg.samples, 'tolerance': cfg.tolerance}


def _build_suite(args, options):
    if args.command == 'verify':
        return VerifySuite(**options)
    if args.command == 'chsh-sweep':
        return ChshSweepSuite(full_grid=args.full_grid, plane=args.plane, step=args.step, **options)
    if args.command == 'quantum-compare':
        return QuantumCompareSuite(plane=args.plane, step=args.step, **options)
    if args.command == 'event-diag':
        return EventDiagSuite(plane=args.plane, step=args.step, **options)
    if not args.chain:
        msg = 'Command malus needs an analyzer chain (--chain).'
        raise ValueError(msg)
    return MalusSuite(chain=args.chain, plane=args.plane, polarizer=args.polarizer, spin=args.spin, **options)


def configure(args):
    """Validate the parsed arguments and return ``(config, suite)``.

    ``suite`` is None for ``--list``.

    Raises
    ------
    UsageError
        If an argument is out of range or the output cannot be written.
    """
    try:
        cfg = RunConfig(
            command=args.command,
            seed=args.seed,
            samples=args.samples,
            tolerance=args.tolerance,
            output_format=args.format,
            output_path=args.out or '',
            timings=args.timings,
            tasks=args.tasks,
            progress=args.progress,
        )
        cfg.validate_output()
        if args.list:
            return cfg, None
        if cfg.tasks > 1 and not RAY_FLAG:
            msg = 'More than one task needs the ray package.'
            raise ValueError(msg)
        suite = _build_suite(args, {'tasks': cfg.tasks, 'logger': logger, 'progress_bar': cfg.progress})
    except (ValueError, TraitError) as exc:
        raise UsageError(str(exc)) from exc
    return cfg, suite


def run(args):
    """Execute the parsed command and return ``(report, exit_code)``."""
    cfg, suite = configure(args)
    if suite is None:
        return catalog_report(), EXIT_OK
    _init_ray(args)
    if args.command == 'verify':
        result = suite.run(cfg.seed, cfg.samples, cfg.tolerance)
        return result.as_report(_metadata(cfg)), EXIT_OK if result.passed else EXIT_FAILED
    if args.command == 'event-diag':
        return suite.build(), EXIT_OK
    report = suite.build(cfg.tolerance)
    if args.command == 'chsh-sweep':
        return report, EXIT_OK
    return report, EXIT_OK if report.summary['passed'] else EXIT_FAILED


def main(argv=None):
    """Entry point of the ``cliffbell`` script; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    file_handler = _init_logging(args)
    try:
        report, code = run(args)
        get_writer(args.format, report, name=args.out or '', include_timings=args.timings).save()
    except (UsageError, OSError) as exc:
        sys.stderr.write(f'cliffbell {args.command}: error: {exc}\n')
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f'cliffbell {args.command}: evaluation failed: {exc}\n')
        return EXIT_FAILED
    finally:
        if file_handler is not None:
            logging.getLogger().removeHandler(file_handler)
            file_handler.close()
    return code
