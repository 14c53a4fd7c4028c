"""
Trial data model for canonlink.
Aggregated cell counts (covariate level x arm) and the errors raised when
they are malformed.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

CSV_COLUMNS = ['x', 'z', 'events', 'trials']
LEVELS = (0, 1)
ARMS = (0, 1)


class CellTableError(ValueError):
    """Base class for invalid trial data."""


class MalformedHeaderError(CellTableError):
    """Header is not exactly `x,z,events,trials`."""


class MalformedRowError(CellTableError):
    """A data row has the wrong number of fields."""


class NonIntegerFieldError(CellTableError):
    """A field that must be an integer is not."""


class CellValueError(CellTableError):
    """A field is an integer but outside its allowed range."""


class EventsExceedTrialsError(CellTableError):
    """A cell reports more events than trials."""


class DuplicateCellError(CellTableError):
    """The same (x, z) pair appears twice."""


class EmptyTableError(CellTableError):
    """No cells at all."""


class MissingArmError(CellTableError):
    """One of the two randomised arms has no cells."""


def _where(row):
    return f" at row {row}" if row is not None else ""


@dataclass(frozen=True)
class Cell:
    """One covariate stratum within one arm: events out of trials."""

    x: int
    z: int
    events: int
    trials: int

    def validate(self, row=None):
        if self.x not in LEVELS:
            raise CellValueError(f"covariate x must be 0 or 1, got {self.x}{_where(row)}")
        if self.z not in ARMS:
            raise CellValueError(f"arm z must be 0 or 1, got {self.z}{_where(row)}")
        if self.trials < 1:
            raise CellValueError(f"trials must be positive, got {self.trials}{_where(row)}")
        if self.events < 0:
            raise CellValueError(f"events must be nonnegative, got {self.events}{_where(row)}")
        if self.events > self.trials:
            raise EventsExceedTrialsError(
                f"events exceed trials ({self.events} > {self.trials}){_where(row)}"
            )

    @property
    def key(self):
        return (self.x, self.z)

    @property
    def risk(self):
        return self.events / self.trials


@dataclass(frozen=True)
class CellTable:
    """Ordered, immutable collection of cells, unique on (x, z)."""

    cells: tuple

    def __post_init__(self):
        cells = tuple(self.cells)
        object.__setattr__(self, 'cells', cells)

        if not cells:
            raise EmptyTableError("no cells")

        seen = set()
        for row, cell in enumerate(cells, start=1):
            cell.validate(row)
            if cell.key in seen:
                raise DuplicateCellError(f"duplicate cell (x={cell.x}, z={cell.z}) at row {row}")
            seen.add(cell.key)

        for arm in ARMS:
            if not any(cell.z == arm for cell in cells):
                raise MissingArmError(f"missing arm z={arm}")

    @classmethod
    def from_counts(cls, rows):
        """Build a table from (x, z, events, trials) tuples."""
        return cls(tuple(Cell(int(x), int(z), int(e), int(n)) for x, z, e, n in rows))

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def x(self):
        return np.array([cell.x for cell in self.cells], dtype=float)

    @property
    def z(self):
        return np.array([cell.z for cell in self.cells], dtype=float)

    @property
    def events(self):
        return np.array([cell.events for cell in self.cells], dtype=float)

    @property
    def trials(self):
        return np.array([cell.trials for cell in self.cells], dtype=float)

    @property
    def total_trials(self):
        return sum(cell.trials for cell in self.cells)

    def get(self, x, z):
        for cell in self.cells:
            if cell.key == (x, z):
                return cell
        return None

    def arm_totals(self, arm):
        """(events, trials) summed over the cells of one arm."""
        events = sum(cell.events for cell in self.cells if cell.z == arm)
        trials = sum(cell.trials for cell in self.cells if cell.z == arm)
        return events, trials

    def to_frame(self):
        return pd.DataFrame(
            [(c.x, c.z, c.events, c.trials) for c in self.cells],
            columns=CSV_COLUMNS,
        )

    def sorted_key(self):
        """Order-independent identity of the table's contents."""
        return tuple(sorted((c.x, c.z, c.events, c.trials) for c in self.cells))


@dataclass(frozen=True)
class LevelCount:
    """Trial counts of one covariate level in each arm."""

    x: int
    treated: int
    control: int

    @property
    def balanced(self):
        return self.treated == self.control


@dataclass(frozen=True)
class BalanceReport:
    """Per-level arm counts and whether every level is balanced."""

    balanced: bool
    levels: tuple

    def counts(self):
        return {level.x: {1: level.treated, 0: level.control} for level in self.levels}
