"""
Systematic exploration over a grid of perfectly balanced four-cell trials.

Every cell has the same number of individuals; event counts vary
independently over a range. Each table is analysed with several links,
unadjusted and adjusted for the covariate, keeping raw coefficients.
"""

import itertools
import logging
from dataclasses import dataclass

from joblib import Parallel, delayed

from model.exceptions import GLMError
from model.features import ModelSpec
from model.links import LinkFunction
from model.training import fit_glm
from preprocessing.cells import Cell, CellTable, CellValueError

logger = logging.getLogger(__name__)

# Cell order of every generated table and of the lexicographic sweep.
CELL_ORDER = ((0, 1), (0, 0), (1, 1), (1, 0))


@dataclass(frozen=True)
class GridSpec:
    """Event-count range per cell, trials per cell and links to fit."""

    low: int = 10
    high: int = 20
    step: int = 2
    trials: int = 200
    links: tuple = ('identity', 'log', 'logit')

    def __post_init__(self):
        object.__setattr__(self, 'links', tuple(LinkFunction.from_name(l).kind for l in self.links))
        if self.step <= 0:
            raise CellValueError(f"grid step must be positive, got {self.step}")
        if self.low < 0 or self.high < self.low:
            raise CellValueError(f"grid range [{self.low}, {self.high}] is empty")
        if (self.high - self.low) % self.step:
            raise CellValueError(f"step {self.step} does not divide {self.high - self.low}")
        if self.high > self.trials:
            raise CellValueError(f"event count {self.high} exceeds {self.trials} trials")
        if not self.links:
            raise CellValueError("grid needs at least one link")

    @classmethod
    def from_dict(cls, values):
        values = dict(values or {})
        if 'links' in values:
            values['links'] = tuple(values['links'])
        return cls(**{k: v for k, v in values.items() if k in cls.__dataclass_fields__})

    @property
    def levels(self):
        return tuple(range(self.low, self.high + 1, self.step))

    @property
    def size(self):
        return len(self.levels) ** len(CELL_ORDER)


@dataclass(frozen=True)
class LinkEstimates:
    """Treatment coefficients for one link; None where the fit failed."""

    unadjusted: float = None
    adjusted: float = None

    @property
    def converged(self):
        return self.unadjusted is not None and self.adjusted is not None


@dataclass(frozen=True)
class GridRecord:
    """One grid table (event count e<x><z> per cell) and its estimates."""

    e00: int
    e01: int
    e10: int
    e11: int
    estimates: tuple

    def for_link(self, link):
        for name, estimates in self.estimates:
            if name == link:
                return estimates
        return None

    @property
    def links(self):
        return tuple(name for name, _ in self.estimates)


def generate_grid(spec):
    """All tables in lexicographic order of (e01, e00, e11, e10)."""
    tables = []
    for counts in itertools.product(spec.levels, repeat=len(CELL_ORDER)):
        tables.append(CellTable(tuple(
            Cell(x, z, events, spec.trials) for (x, z), events in zip(CELL_ORDER, counts)
        )))
    return tables


def _coefficient(spec, table, settings):
    try:
        fit = fit_glm(spec, table, settings)
    except GLMError as e:
        logger.debug(f"{spec.label()} fit failed: {e}")
        return None
    return fit.treatment_coefficient if fit.converged else None


def analyse_table(table, links, settings=None):
    """Fit every link unadjusted and adjusted; failures become None."""
    estimates = []
    for name in links:
        link = LinkFunction.from_name(name)
        estimates.append((link.kind, LinkEstimates(
            _coefficient(ModelSpec(link, False), table, settings),
            _coefficient(ModelSpec(link, True), table, settings),
        )))
    return GridRecord(
        e00=table.get(0, 0).events,
        e01=table.get(0, 1).events,
        e10=table.get(1, 0).events,
        e11=table.get(1, 1).events,
        estimates=tuple(estimates),
    )


def run_grid(spec, n_jobs=1, settings=None):
    """One record per generated table, in generation order."""
    tables = generate_grid(spec)
    logger.info(f"Fitting {len(tables)} tables x {len(spec.links)} links with {n_jobs} worker(s)...")

    records = Parallel(n_jobs=n_jobs, batch_size=16)(
        delayed(analyse_table)(table, spec.links, settings) for table in tables
    )

    for link in spec.links:
        failed = sum(1 for r in records if not r.for_link(link).converged)
        if failed:
            logger.warning(f"⚠️ {link}: {failed} tables without converged fits")
    logger.info(f"✓ Grid complete: {len(records)} records")
    return records
