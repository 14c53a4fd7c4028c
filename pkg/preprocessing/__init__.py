"""
Preprocessing package for canonlink.
Contains the aggregated trial-data model, CSV ingestion and row expansion.
"""

from .cells import (
    BalanceReport,
    Cell,
    CellTable,
    CellTableError,
    DuplicateCellError,
    EmptyTableError,
    EventsExceedTrialsError,
    MalformedHeaderError,
    MalformedRowError,
    MissingArmError,
    NonIntegerFieldError,
)
from .parser import load_cell_csv, parse_cell_csv, render_cell_csv
from .utils import aggregate_rows, check_balance, expand_to_rows, scale_table

__all__ = [
    'Cell',
    'CellTable',
    'BalanceReport',
    'CellTableError',
    'DuplicateCellError',
    'EmptyTableError',
    'EventsExceedTrialsError',
    'MalformedHeaderError',
    'MalformedRowError',
    'MissingArmError',
    'NonIntegerFieldError',
    'parse_cell_csv',
    'render_cell_csv',
    'load_cell_csv',
    'expand_to_rows',
    'aggregate_rows',
    'check_balance',
    'scale_table',
]
