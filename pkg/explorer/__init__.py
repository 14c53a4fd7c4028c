"""
Explorer package for canonlink.
Grid of balanced trials, Bland-Altman coordinates, pattern checks and plots.
"""

from .grid import GridRecord, GridSpec, LinkEstimates, analyse_table, generate_grid, run_grid
from .patterns import (
    BAPoint,
    PatternReport,
    bland_altman,
    null_preservation_across_grid,
    pattern_checks,
)
from .plots import NoPointsError, PlotDocument, render_bland_altman

__all__ = [
    'GridSpec',
    'GridRecord',
    'LinkEstimates',
    'generate_grid',
    'analyse_table',
    'run_grid',
    'BAPoint',
    'PatternReport',
    'bland_altman',
    'pattern_checks',
    'null_preservation_across_grid',
    'PlotDocument',
    'NoPointsError',
    'render_bland_altman',
]
