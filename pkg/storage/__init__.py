"""
Storage package for canonlink.
JSON result documents, grid-run files and application settings.
"""

from .records import (
    RecordsFormatError,
    read_records_csv,
    write_ba_csv,
    write_grid_outputs,
    write_pattern_report,
    write_records_csv,
)
from .results import build_document, dumps, effect_to_dict, fit_from_dict, fit_to_dict, read_document
from .settings import SettingsError, load_settings

__all__ = [
    'build_document',
    'read_document',
    'dumps',
    'fit_to_dict',
    'fit_from_dict',
    'effect_to_dict',
    'read_records_csv',
    'write_records_csv',
    'write_ba_csv',
    'write_pattern_report',
    'write_grid_outputs',
    'RecordsFormatError',
    'load_settings',
    'SettingsError',
]
