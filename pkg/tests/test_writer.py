import csv
import io
import json

from cliffbell.config import SCHEMA
from cliffbell.writer import (
    WRITERS,
    Report,
    WriteH5Report,
    WriteTextReport,
    flatten,
    get_writer,
    plain,
)

import h5py
import numpy as np
import pytest


@pytest.fixture
def report():
    return Report(
        command='chsh-sweep',
        metadata={'version': '0', 'seed': 1, 'step': np.float64(0.5)},
        columns=['theta', 'value', 'mv', 'norms', 'elapsed'],
        multivector_columns=['mv'],
        timing_columns=['elapsed'],
        rows=[
            {'theta': 0.0, 'value': np.float64(-2.5), 'mv': list(range(8)), 'norms': [1.0, 2.0], 'elapsed': 0.1},
            {'theta': 0.5, 'value': 1.0 / 3.0, 'mv': [0.0] * 8, 'norms': [3.0, 4.0], 'elapsed': 0.2},
        ],
        summary={'passed': np.bool_(True), 'requirements': {'1': True, '7': False}, 'failed_checks': ['a', 'b']},
    )


def test_plain_converts_numpy_types():
    value = plain({'a': np.arange(2), 'b': (np.float32(0.5), np.int64(3)), 1: np.bool_(False)})
    assert value == {'a': [0, 1], 'b': [0.5, 3], '1': False}
    assert type(value['b'][1]) is int


def test_flatten():
    assert flatten({'a': {'b': 1, 'c': {'d': 2}}, 'e': 3}) == [('a.b', 1), ('a.c.d', 2), ('e', 3)]


def test_json_schema_first_and_timings_hidden(report):
    data = json.loads(get_writer('json', report).dumps())
    assert list(data)[0] == 'schema'
    assert data['schema'] == SCHEMA
    assert data['columns'] == ['theta', 'value', 'mv', 'norms']
    assert 'elapsed' not in data['rows'][0]
    assert data['rows'][1]['value'] == 1.0 / 3.0
    assert data['summary']['passed'] is True


def test_json_with_timings(report):
    data = json.loads(get_writer('json', report, include_timings=True).dumps())
    assert data['rows'][0]['elapsed'] == 0.1


def test_json_is_deterministic(report):
    assert get_writer('json', report).dumps() == get_writer('json', report).dumps()


def test_csv_spreads_list_columns(report):
    lines = list(csv.reader(io.StringIO(get_writer('csv', report).dumps())))
    header = lines[0]
    assert header[:3] == ['theta', 'value', 'mv[1]']
    assert 'mv[e123]' in header
    assert header[-2:] == ['norms[0]', 'norms[1]']
    assert lines[1][header.index('mv[e123]')] == '7'
    assert float(lines[2][1]) == 1.0 / 3.0
    assert ['schema', SCHEMA] in lines
    assert ['summary.requirements.7', 'False'] in lines
    assert ['summary.failed_checks', '["a", "b"]'] in lines


def test_text_report_includes_timings(report):
    writer = get_writer('text', report)
    assert isinstance(writer, WriteTextReport)
    text = writer.dumps()
    assert text.startswith(f'{SCHEMA} chsh-sweep')
    assert 'elapsed' in text
    assert 'passed: True' in text


def test_save_to_file(report, temp_dir):
    name = temp_dir / 'report.json'
    get_writer('json', report, name=str(name)).save()
    assert json.loads(name.read_text())['command'] == 'chsh-sweep'


def test_save_to_stdout(report, capsys):
    get_writer('json', report).save()
    assert json.loads(capsys.readouterr().out)['schema'] == SCHEMA


def test_save_h5(report, temp_dir):
    name = temp_dir / 'report.h5'
    get_writer('h5', report, name=str(name)).save()
    with h5py.File(name, 'r') as f:
        assert f.attrs['schema'] == SCHEMA
        assert sorted(f.keys()) == ['0', '1', 'metadata', 'summary']
        assert list(f['0/mv'][()]) == list(range(8))
        assert f['1/value'][()] == 1.0 / 3.0
        assert 'elapsed' not in f['0']
        assert f['summary/requirements/7'][()] == np.False_
        assert [v.decode() for v in f['summary/failed_checks'][()]] == ['a', 'b']


def test_h5_needs_file_name(report):
    with pytest.raises(ValueError):
        WriteH5Report(report=report).save()


def test_unknown_format(report):
    with pytest.raises(ValueError):
        get_writer('xml', report)


def test_writer_registry():
    assert list(WRITERS) == ['json', 'csv', 'text', 'h5']
