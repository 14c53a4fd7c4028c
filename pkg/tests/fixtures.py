"""
Shared test data: the hypothetical four-cell trial and generators of
random tables.
"""

import os

import numpy as np

from preprocessing.cells import CellTable

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

TABLE1_PATH = os.path.join(project_root, 'data', 'table1.csv')
TABLE1_ROWS = [(0, 1, 10, 200), (0, 0, 20, 200), (1, 1, 90, 200), (1, 0, 80, 200)]
TABLE1_CSV = "x,z,events,trials\n0,1,10,200\n0,0,20,200\n1,1,90,200\n1,0,80,200\n"

# Unbalanced table with a hand-computed IPTW answer:
# e(0) = 1/3, e(1) = 2/3; arm 1 mean 16.5/60, arm 0 mean 27/60.
IPTW_ROWS = [(0, 1, 1, 10), (0, 0, 2, 20), (1, 1, 9, 20), (1, 0, 8, 10)]
IPTW_TREATED = 0.275
IPTW_CONTROL = 0.45

# Published marginal risk differences on TABLE1 (estimate, SE).
TABLE2 = {
    ('logit', False): (0.000, 0.031),
    ('logit', True): (0.000, 0.028),
    ('identity', False): (0.000, 0.031),
    ('identity', True): (-0.028, 0.023),
    ('probit', False): (0.000, 0.031),
    ('probit', True): (-0.006, 0.028),
}


def table1():
    return CellTable.from_counts(TABLE1_ROWS)


def random_balanced_table(rng, null=True):
    """
    Four cells with equal trials per covariate level in both arms.

    With null=True the arms also share their event totals, so the
    unadjusted treatment effect is exactly zero. No cell is empty or full.
    """
    while True:
        m0, m1 = (int(v) for v in rng.integers(20, 301, size=2))
        e01 = int(rng.integers(1, m0))
        e11 = int(rng.integers(1, m1))
        if null:
            total = e01 + e11
            lo, hi = max(1, total - (m1 - 1)), min(m0 - 1, total - 1)
            if lo > hi:
                continue
            e00 = int(rng.integers(lo, hi + 1))
            e10 = total - e00
        else:
            e00 = int(rng.integers(1, m0))
            e10 = int(rng.integers(1, m1))
        return CellTable.from_counts([
            (0, 1, e01, m0), (0, 0, e00, m0), (1, 1, e11, m1), (1, 0, e10, m1),
        ])


def random_interior_table(rng):
    """Four cells, unbalanced, with risks between 0.1 and 0.6."""
    rows = []
    for x, z in ((0, 1), (0, 0), (1, 1), (1, 0)):
        trials = int(rng.integers(50, 301))
        events = int(round(rng.uniform(0.1, 0.6) * trials))
        rows.append((x, z, events, trials))
    return CellTable.from_counts(rows)


def rng(seed=12345):
    return np.random.default_rng(seed)
