"""
CSV ingestion and serialisation of aggregated trial data.
Schema: header `x,z,events,trials`, one integer row per cell.
"""

import io
import logging
import re
import warnings

import pandas as pd

from preprocessing.cells import (
    CSV_COLUMNS,
    Cell,
    CellTable,
    EmptyTableError,
    MalformedHeaderError,
    MalformedRowError,
    NonIntegerFieldError,
)

logger = logging.getLogger(__name__)


def _read_frame(text):
    try:
        with warnings.catch_warnings():
            # Ragged rows are reported by _check_field_counts
            warnings.simplefilter('ignore', pd.errors.ParserWarning)
            return pd.read_csv(
                io.StringIO(text),
                dtype=str,
                na_filter=False,
                skip_blank_lines=True,
                index_col=False,
            )
    except pd.errors.EmptyDataError:
        raise MalformedHeaderError("missing header, expected x,z,events,trials")
    except pd.errors.ParserError as e:
        match = re.search(r'line (\d+)', str(e))
        where = f" at row {int(match.group(1)) - 1}" if match else ""
        raise MalformedRowError(f"expected {len(CSV_COLUMNS)} fields{where}")


def _check_field_counts(text):
    lines = [line for line in text.splitlines() if line.strip()]
    for row, line in enumerate(lines[1:], start=1):
        fields = len(line.split(','))
        if fields != len(CSV_COLUMNS):
            raise MalformedRowError(f"expected {len(CSV_COLUMNS)} fields, got {fields} at row {row}")


def _to_int(value, column, row):
    text = '' if value is None else str(value).strip()
    try:
        return int(text)
    except ValueError:
        raise NonIntegerFieldError(f"non-integer {column} {text!r} at row {row}")


def parse_cell_csv(text):
    """
    Parse cell CSV text (or a readable stream) into a CellTable.

    Rows keep their file order. Every kind of malformation raises its own
    CellTableError subclass naming the 1-based data row.
    """
    if hasattr(text, 'read'):
        text = text.read()

    frame = _read_frame(text)

    columns = [str(c) for c in frame.columns]
    if columns != CSV_COLUMNS:
        raise MalformedHeaderError(
            f"header must be exactly {','.join(CSV_COLUMNS)}, got {','.join(columns)}"
        )
    _check_field_counts(text)
    if frame.empty:
        raise EmptyTableError("no cells")

    cells = []
    for row, record in enumerate(frame.itertuples(index=False), start=1):
        values = [_to_int(getattr(record, col), col, row) for col in CSV_COLUMNS]
        cell = Cell(*values)
        cell.validate(row)
        cells.append(cell)

    table = CellTable(tuple(cells))
    logger.info(f"✓ Parsed {len(table)} cells ({table.total_trials} individuals)")
    return table


def render_cell_csv(table):
    """Serialise a CellTable back to cell CSV (LF line endings)."""
    return table.to_frame().to_csv(index=False, lineterminator='\n')


def load_cell_csv(path):
    """Read a UTF-8 cell CSV file from disk."""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        table = parse_cell_csv(f.read())
    logger.info(f"✓ Loaded trial data from: {path}")
    return table
