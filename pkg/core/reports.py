"""
Report envelope shared by every subcommand, with deterministic JSON and
CSV rendering.

JSON floats use Python's shortest round-trip repr; CSV floats carry 17
significant digits. Neither format includes timing, so identical
configurations render byte-identical output.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import UniversalityError
from .serializers import SCHEMA_VERSION, ReportSerializer

logger = logging.getLogger(__name__)


def to_jsonable(value):
    """Convert numpy scalars/arrays, tuples and complex numbers to JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def format_csv_value(value):
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    if value is None:
        return ''
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(to_jsonable(value), sort_keys=True)
    return str(value)


@dataclass
class Report:
    """
    Result of one subcommand run.

    `payload` is the schema-shaped result; `columns`/`rows` give the tabular
    view used for CSV output.
    """

    subcommand: str
    config: dict
    payload: dict
    action: str = ''
    provenance: list = field(default_factory=list)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def add_provenance(self, quantity, value, source, anchor=''):
        self.provenance.append({'quantity': quantity, 'value': value, 'source': source, 'anchor': anchor})

    def envelope(self):
        """The validated, JSON-ready envelope."""
        data = to_jsonable({
            'schema_version': SCHEMA_VERSION,
            'subcommand': self.subcommand,
            'action': self.action,
            'config': self.config,
            'payload': self.payload,
            'provenance': self.provenance,
        })
        serializer = ReportSerializer(data=data)
        if not serializer.is_valid():
            raise UniversalityError(f'Report for {self.subcommand} does not match its schema: {serializer.errors}')
        return data

    def render_json(self):
        return json.dumps(self.envelope(), sort_keys=True, indent=2, allow_nan=True)

    def render_csv(self):
        columns, rows = self.columns, self.rows
        if not columns:
            flat = {k: v for k, v in to_jsonable(self.payload).items()}
            columns, rows = sorted(flat), [flat]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_csv_value(row.get(column)) for column in columns])
        return buffer.getvalue()

    def render_table(self):
        cells = [[str(c) for c in self.columns]]
        for row in self.rows:
            cells.append([
                f'{v:.10g}' if isinstance(v, float) else format_csv_value(v)
                for v in (row.get(column) for column in self.columns)
            ])
        widths = [max(len(line[i]) for line in cells) for i in range(len(self.columns))]
        return ['  ' + '  '.join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in cells]

    def render_human(self):
        lines = [f'{self.subcommand} {self.action}'.strip()]
        tabular = len(self.columns) > 0 and len(self.rows) > 1
        for key, value in sorted(to_jsonable(self.payload).items()):
            if tabular and isinstance(value, (list, dict)):
                continue
            if isinstance(value, (list, dict)) and len(json.dumps(value)) > 120:
                value = f'<{len(value)} entries>'
            elif isinstance(value, float) and math.isfinite(value):
                value = f'{value:.10g}'
            lines.append(f'  {key}: {value}')
        if tabular:
            lines.extend(self.render_table())
        return '\n'.join(lines) + '\n'

    def render(self, output_format):
        if output_format == 'json':
            return self.render_json() + '\n'
        if output_format == 'csv':
            return self.render_csv()
        return self.render_human()
