"""Provides classes to store the reports assembled by the suites.

Purpose of the Writer Module
----------------------------
The :code:`writer.py` module serializes a :class:`Report` (run metadata, a table of
rows and a summary) to the supported output formats:

* JSON (:code:`WriteJSONReport`), the canonical format. The schema string comes first
  and floats are written with their shortest round-trip representation.
* CSV (:code:`WriteCSVReport`), a lossless flattening. List-valued cells are spread
  over ``name[i]`` columns; multivector cells use one column per blade in storage
  order. Metadata and summary follow the table as ``key,value`` lines.
* text (:code:`WriteTextReport`), an aligned table for humans. It always includes
  elapsed times and is therefore not byte-stable.
* HDF5 (:code:`WriteH5Report`), one group per row index plus ``metadata`` and
  ``summary`` groups.

.. code-block:: python

    writer = get_writer('json', report, name='verify.json')
    writer.save()

Without a file name, the text formats are written to stdout.
"""

import csv
import io
import json
import sys
from abc import abstractmethod

import numpy as np
from h5py import File as H5File
from h5py import string_dtype
from traits.api import ABCHasStrictTraits, Bool, Dict, File, HasStrictTraits, Instance, List, Str

from cliffbell.algebra import BLADES
from cliffbell.config import SCHEMA


def plain(value):
    """Convert numpy scalars and arrays (also nested in lists and dicts) to builtin types."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def flatten(mapping, prefix=''):
    """Flatten nested dicts to ``(key.subkey, value)`` pairs in insertion order."""
    items = []
    for key, value in mapping.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            items.extend(flatten(value, prefix=f'{name}.'))
        else:
            items.append((name, value))
    return items


class Report(HasStrictTraits):
    """Result table of a command together with its run metadata and summary."""

    #: subcommand that produced the report
    command = Str(desc='name of the subcommand')

    #: run parameters (seed, samples, tolerance, ...), written in insertion order
    metadata = Dict(desc='run parameters')

    #: column names in output order
    columns = List(Str, desc='column names')

    #: columns holding 8 multivector coefficients
    multivector_columns = List(Str, desc='columns whose cells are multivectors in blade order')

    #: columns holding elapsed times; only written on request
    timing_columns = List(Str, desc='columns with wall-clock times')

    #: table rows as mappings column -> value
    rows = List(Dict, desc='table rows')

    #: aggregated results
    summary = Dict(desc='summary of the table')

    def visible_columns(self, include_timings=False):
        if include_timings:
            return list(self.columns)
        return [c for c in self.columns if c not in self.timing_columns]

    def as_dict(self, include_timings=False):
        """Return the canonical nested representation with the schema string first."""
        columns = self.visible_columns(include_timings)
        return {
            'schema': SCHEMA,
            'command': self.command,
            'metadata': plain(self.metadata),
            'columns': columns,
            'rows': [{c: plain(row.get(c)) for c in columns} for row in self.rows],
            'summary': plain(self.summary),
        }

    def flat_header(self, include_timings=False):
        """Return the CSV header with list-valued columns spread out."""
        header = []
        for c in self.visible_columns(include_timings):
            if c in self.multivector_columns:
                header.extend(f'{c}[{b}]' for b in BLADES)
                continue
            width = max((len(row[c]) for row in self.rows if isinstance(row.get(c), (list, tuple, np.ndarray))), default=0)
            header.extend([f'{c}[{i}]' for i in range(width)] if width else [c])
        return header

    def flat_rows(self, include_timings=False):
        """Yield rows matching :meth:`flat_header`."""
        header = self.flat_header(include_timings)
        for row in self.rows:
            cells = {}
            for c in self.visible_columns(include_timings):
                value = plain(row.get(c))
                if isinstance(value, list):
                    cells.update({f'{c}[{BLADES[i] if c in self.multivector_columns else i}]': v for i, v in enumerate(value)})
                else:
                    cells[c] = value
            yield [cells.get(h, '') for h in header]


class BaseWriteReport(ABCHasStrictTraits):
    """Base class intended to write a :class:`Report` to a specific file format.

    This class has no functionality and should not be used.
    """

    #: the report to be written
    report = Instance(Report)

    #: name of the file to be saved; stdout if empty
    name = File(desc='name of the output file')

    #: write timing columns (always on for text output)
    include_timings = Bool(False, desc='write elapsed times')

    @abstractmethod
    def dumps(self):
        """Return the serialized report as a string."""

    def save(self):
        """Write the serialized report to :attr:`name` or stdout."""
        content = self.dumps()
        if not self.name:
            sys.stdout.write(content)
            sys.stdout.flush()
            return
        with open(self.name, 'w', encoding='utf-8', newline='') as f:
            f.write(content)


class WriteJSONReport(BaseWriteReport):
    """Class intended to write a report to a `.json` file."""

    name = File(filter=['*.json'], desc='name of the output file')

    def dumps(self):
        return json.dumps(self.report.as_dict(self.include_timings), indent=2, allow_nan=True) + '\n'


class WriteCSVReport(BaseWriteReport):
    """Class intended to write a report to a `.csv` file."""

    name = File(filter=['*.csv'], desc='name of the output file')

    def dumps(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(self.report.flat_header(self.include_timings))
        writer.writerows(self.report.flat_rows(self.include_timings))
        writer.writerow([])
        writer.writerow(['key', 'value'])
        writer.writerow(['schema', SCHEMA])
        writer.writerow(['command', self.report.command])
        for key, value in flatten(plain(self.report.metadata), prefix='metadata.'):
            writer.writerow([key, json.dumps(value) if isinstance(value, list) else value])
        for key, value in flatten(plain(self.report.summary), prefix='summary.'):
            writer.writerow([key, json.dumps(value) if isinstance(value, list) else value])
        return buffer.getvalue()


def _format_cell(value):
    if isinstance(value, float):
        return f'{value:.12g}'
    if isinstance(value, list):
        return '[' + ', '.join(_format_cell(v) for v in value) + ']'
    if value is None:
        return '-'
    return str(value)


class WriteTextReport(BaseWriteReport):
    """Class intended to write a human-readable aligned table."""

    name = File(filter=['*.txt'], desc='name of the output file')

    include_timings = Bool(True, desc='write elapsed times')

    def dumps(self):
        report = self.report
        lines = [f'{SCHEMA} {report.command}']
        lines.extend(f'  {key}: {_format_cell(value)}' for key, value in flatten(plain(report.metadata)))
        columns = report.visible_columns(self.include_timings)
        table = [columns] + [[_format_cell(plain(row.get(c))) for c in columns] for row in report.rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(columns))]
        lines.append('')
        lines.extend('  '.join(cell.ljust(w) for cell, w in zip(r, widths, strict=True)).rstrip() for r in table)
        if report.summary:
            lines.append('')
            lines.extend(f'{key}: {_format_cell(value)}' for key, value in flatten(plain(report.summary)))
        return '\n'.join(lines) + '\n'


class WriteH5Report(BaseWriteReport):
    """Class intended to write a report to a `.h5` file."""

    name = File(filter=['*.h5'], desc='name of data file')

    def dumps(self):
        msg = 'HDF5 reports are binary; use save().'
        raise NotImplementedError(msg)

    def _add_group(self, f5h, group, items):
        f5h.create_group(group)
        for key, value in items:
            if value is None:
                continue
            if isinstance(value, list) and any(isinstance(v, str) for v in value):
                f5h.create_dataset(f'{group}/{key}', data=value, dtype=string_dtype())
                continue
            f5h.create_dataset(f'{group}/{key}', data=value)

    def save(self):
        """Save the report to .h5 file format."""
        if not self.name:
            msg = 'HDF5 output needs a file name.'
            raise ValueError(msg)
        columns = self.report.visible_columns(self.include_timings)
        with H5File(self.name, mode='w') as f5h:
            f5h.attrs['schema'] = SCHEMA
            f5h.attrs['command'] = self.report.command
            for idx, row in enumerate(self.report.rows):
                self._add_group(f5h, str(idx), [(c, plain(row.get(c))) for c in columns])
            self._add_group(f5h, 'metadata', [(k.replace('.', '/'), v) for k, v in flatten(plain(self.report.metadata))])
            self._add_group(f5h, 'summary', [(k.replace('.', '/'), v) for k, v in flatten(plain(self.report.summary))])


#: output format -> writer class
WRITERS = {
    'json': WriteJSONReport,
    'csv': WriteCSVReport,
    'text': WriteTextReport,
    'h5': WriteH5Report,
}


def get_writer(fmt, report, name='', include_timings=False):
    """Return a writer instance for the output format ``fmt``."""
    if fmt not in WRITERS:
        msg = f'Unknown output format "{fmt}". Choose from {list(WRITERS)}.'
        raise ValueError(msg)
    writer = WRITERS[fmt](report=report, name=name or '')
    if fmt != 'text':
        writer.include_timings = include_timings
    return writer
