"""
Utility functions for trial data: row expansion, re-aggregation,
balance checks and count scaling.
"""

import numpy as np
import pandas as pd

from preprocessing.cells import (
    ARMS,
    BalanceReport,
    Cell,
    CellTable,
    CellValueError,
    LevelCount,
    MissingArmError,
)

ROW_COLUMNS = ['x', 'z', 'y']


def expand_to_rows(table):
    """
    Expand aggregated cells to one row per individual.

    Each cell emits `events` rows with y=1 followed by `trials - events`
    rows with y=0, cells in table order.
    """
    x = np.repeat([c.x for c in table], [c.trials for c in table])
    z = np.repeat([c.z for c in table], [c.trials for c in table])
    y = np.concatenate([
        np.r_[np.ones(c.events, dtype=int), np.zeros(c.trials - c.events, dtype=int)]
        for c in table
    ])
    return pd.DataFrame({'x': x.astype(int), 'z': z.astype(int), 'y': y})


def aggregate_rows(rows):
    """Collapse individual (x, z, y) rows back to cells, first-appearance order."""
    frame = pd.DataFrame(rows, columns=ROW_COLUMNS) if not isinstance(rows, pd.DataFrame) else rows
    grouped = frame.groupby(['x', 'z'], sort=False)['y'].agg(['sum', 'size']).reset_index()
    return CellTable(tuple(
        Cell(int(r.x), int(r.z), int(r['sum']), int(r['size']))
        for _, r in grouped.iterrows()
    ))


def check_balance(table):
    """
    Compare each covariate level's trial count across the two arms.

    A level absent from one arm counts as zero individuals there.
    """
    present = {cell.z for cell in table}
    for arm in ARMS:
        if arm not in present:
            raise MissingArmError(f"missing arm z={arm}")

    levels = sorted({cell.x for cell in table})
    counts = []
    for level in levels:
        treated = sum(c.trials for c in table if c.x == level and c.z == 1)
        control = sum(c.trials for c in table if c.x == level and c.z == 0)
        counts.append(LevelCount(level, treated, control))

    return BalanceReport(
        balanced=all(level.balanced for level in counts),
        levels=tuple(counts),
    )


def scale_table(table, factor):
    """Multiply every event and trial count by a positive integer."""
    if int(factor) != factor or factor < 1:
        raise CellValueError(f"scale factor must be a positive integer, got {factor}")
    factor = int(factor)
    return CellTable(tuple(
        Cell(c.x, c.z, c.events * factor, c.trials * factor) for c in table
    ))
