import csv
import io
import json

from cliffbell.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, build_parser, configure, main
from cliffbell.config import SCHEMA

from .constants import CHECK_NAMES, TSIRELSON

import numpy as np
import pytest


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_verify(capsys):
    assert main(['verify', '--samples', '5']) == EXIT_OK
    data = _json(capsys)
    assert data['schema'] == SCHEMA
    assert data['command'] == 'verify'
    assert data['metadata']['samples'] == 5
    assert [row['name'] for row in data['rows']] == CHECK_NAMES
    assert data['summary']['passed'] is True


def test_verify_zero_tolerance_fails(capsys):
    assert main(['verify', '--samples', '5', '--tolerance', '0']) == EXIT_FAILED
    assert 'algebra_associativity' in _json(capsys)['summary']['failed_checks']


@pytest.mark.parametrize(
    'argv',
    [
        ['verify', '--samples', '0'],
        ['verify', '--tolerance', '-1'],
        ['verify', '--seed', '-3'],
        ['verify', '--format', 'h5'],
        ['verify', '--tasks', '0'],
        ['chsh-sweep', '--step', 'abc'],
        ['chsh-sweep', '--step', '0'],
        ['malus'],
        ['malus', '--chain', ','],
        ['unknown'],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def _raise_value_error(*args, **kwargs):
    msg = '<B^2> disagrees'
    raise ValueError(msg)


def test_configure_raises_usage_error():
    with pytest.raises(UsageError):
        configure(build_parser().parse_args(['chsh-sweep', '--step', '0']))


def test_evaluation_error_is_a_failure(monkeypatch, capsys):
    monkeypatch.setattr('cliffbell.suites.reports.qm_chsh_bound', _raise_value_error)
    assert main(['quantum-compare', '--step', '90deg']) == EXIT_FAILED
    assert 'evaluation failed' in capsys.readouterr().err


def test_check_error_is_a_failed_check(monkeypatch, capsys):
    monkeypatch.setattr('cliffbell.batch.qm_chsh_bound', _raise_value_error)
    assert main(['verify', '--samples', '5']) == EXIT_FAILED
    summary = _json(capsys)['summary']
    assert summary['failed_checks'] == ['bell_expectation_agreement']
    assert summary['errors'] == {'bell_expectation_agreement': 'ValueError: <B^2> disagrees'}


def test_unwritable_output(temp_dir, capsys):
    target = temp_dir / 'missing' / 'report.json'
    assert main(['verify', '--samples', '1', '--out', str(target)]) == EXIT_USAGE
    assert not target.exists()
    assert main(['verify', '--samples', '1', '--out', str(temp_dir)]) == EXIT_USAGE


def test_version(capsys):
    assert main(['--version']) == EXIT_OK


def test_list(capsys):
    assert main(['verify', '--list']) == EXIT_OK
    data = _json(capsys)
    assert data['command'] == 'list'
    assert [row['name'] for row in data['rows']] == CHECK_NAMES


def test_verify_is_byte_identical(temp_dir):
    outputs = []
    for name in ('first.json', 'second.json'):
        target = temp_dir / name
        assert main(['verify', '--samples', '5', '--seed', '42', '--out', str(target)]) == EXIT_OK
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]


def test_timings_are_optional(temp_dir):
    target = temp_dir / 'verify.json'
    main(['verify', '--samples', '2', '--timings', '--out', str(target)])
    assert 'elapsed' in json.loads(target.read_text())['columns']


def test_chsh_sweep(capsys):
    assert main(['chsh-sweep', '--step', '45deg', '--plane', 'zx']) == EXIT_OK
    data = _json(capsys)
    assert len(data['rows']) == 8
    assert data['summary']['max_abs_chsh'] == pytest.approx(TSIRELSON)
    assert data['metadata']['plane'] == 'zx'


def test_chsh_sweep_csv(temp_dir):
    target = temp_dir / 'sweep.csv'
    assert main(['chsh-sweep', '--step', '90deg', '--format', 'csv', '--out', str(target)]) == EXIT_OK
    lines = list(csv.reader(io.StringIO(target.read_text())))
    assert lines[0][0] == 'chsh_value'
    assert lines[0][-4:] == ['theta_a', 'theta_a_prime', 'theta_b', 'theta_b_prime']
    assert 'f2_exact_avg[e123]' in lines[0]
    assert len(lines[1]) == len(lines[0])


def test_quantum_compare(capsys):
    assert main(['quantum-compare', '--step', str(np.pi / 6)]) == EXIT_OK
    assert _json(capsys)['summary']['passed'] is True


def test_event_diag(capsys):
    assert main(['event-diag', '--step', '90deg', '--format', 'text']) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith(f'{SCHEMA} event-diag')
    assert 'event_correlation' in out


def test_malus(capsys):
    assert main(['malus', '--chain', '45deg,45deg']) == EXIT_OK
    data = _json(capsys)
    assert data['summary']['values'] == pytest.approx([np.sqrt(0.5), np.sqrt(0.5)])
    assert data['summary']['cumulative_product'] == pytest.approx(0.5)


def test_malus_h5(temp_dir):
    import h5py

    target = temp_dir / 'malus.h5'
    assert main(['malus', '--chain', '60deg', '--spin', '-1', '--format', 'h5', '--out', str(target)]) == EXIT_OK
    with h5py.File(target, 'r') as f:
        assert f['0/model'][()] == pytest.approx(0.5)
        assert f['metadata/spin'][()] == -1


def test_log_file(temp_dir, capsys):
    log = temp_dir / 'run.log'
    assert main(['malus', '--chain', '30deg', '--log-file', str(log)]) == EXIT_OK
    assert 'malus: 1 analyzer(s)' in log.read_text()


def test_parser_defaults():
    args = build_parser().parse_args(['chsh-sweep'])
    assert args.step == pytest.approx(np.pi / 180)
    assert args.plane == 'xy'
    assert args.format == 'json'
    assert args.tasks == 1


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command='verify', tolerance=float('nan'))
    cfg = RunConfig(command='verify', output_format='json', seed=2**64 - 1)
    assert cfg.seed == 2**64 - 1
    cfg.validate_output()
