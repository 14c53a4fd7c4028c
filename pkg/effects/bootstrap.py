"""
Nonparametric bootstrap of the standardized risk difference.

Individuals are resampled within arm so every replicate keeps the
randomised arm sizes. Replicates are split into fixed chunks, each drawing
from its own Philox stream spawned from one seed, so results do not depend
on how many workers run them.
"""

import logging
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from effects.margins import standardized_risk_difference
from model.exceptions import GLMError
from model.training import fit_glm
from preprocessing.cells import ARMS, Cell, CellTable, CellTableError

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20210714
CHUNK_SIZE = 250


@dataclass(frozen=True)
class BootstrapResult:
    std_error: float
    estimates: np.ndarray
    failures: int


def _resample(table, rng):
    cells = []
    for arm in ARMS:
        arm_cells = [c for c in table if c.z == arm]
        counts = np.array([[c.events, c.trials - c.events] for c in arm_cells], dtype=float).ravel()
        n = int(counts.sum())
        drawn = rng.multinomial(n, counts / n).reshape(-1, 2)
        for cell, (events, non_events) in zip(arm_cells, drawn):
            if events + non_events > 0:
                cells.append(Cell(cell.x, cell.z, int(events), int(events + non_events)))
    return CellTable(tuple(cells))


def _run_chunk(spec, table, seed_sequence, size):
    rng = np.random.Generator(np.random.Philox(seed_sequence))
    estimates = []
    failures = 0
    for _ in range(size):
        try:
            sample = _resample(table, rng)
            fit = fit_glm(spec, sample)
            if not fit.converged:
                failures += 1
                continue
            estimates.append(standardized_risk_difference(fit, spec, sample).estimate)
        except (GLMError, CellTableError):
            failures += 1
    return estimates, failures


def bootstrap_standard_error(spec, table, replicates=10000, seed=DEFAULT_SEED, n_jobs=1):
    """Standard deviation of the standardized risk difference over replicates."""
    n_chunks = -(-replicates // CHUNK_SIZE)
    sizes = [min(CHUNK_SIZE, replicates - i * CHUNK_SIZE) for i in range(n_chunks)]
    streams = np.random.SeedSequence(seed).spawn(n_chunks)

    logger.info(f"Bootstrapping {spec.label()} with {replicates} replicates...")
    chunks = Parallel(n_jobs=n_jobs)(
        delayed(_run_chunk)(spec, table, stream, size) for stream, size in zip(streams, sizes)
    )

    estimates = np.array([value for values, _ in chunks for value in values])
    failures = sum(failed for _, failed in chunks)
    if failures:
        logger.warning(f"⚠️ {failures} bootstrap replicates failed to fit")

    result = BootstrapResult(float(np.std(estimates, ddof=1)), estimates, failures)
    logger.info(f"✓ Bootstrap SE: {result.std_error:.4f}")
    return result
