"""
Bland-Altman coordinates and the qualitative checks over a grid run.
"""

from dataclasses import dataclass, field

import numpy as np

EXTREMENESS_TOLERANCE = 1e-9
SIGN_FLOOR = 1e-6
UNADJUSTED_NULL = 1e-8
ADJUSTED_NULL = 1e-6


@dataclass(frozen=True)
class BAPoint:
    """Mean and difference (adjusted - unadjusted) of one estimate pair."""

    mean: float
    diff: float

    @classmethod
    def from_pair(cls, unadjusted, adjusted):
        return cls((unadjusted + adjusted) / 2.0, adjusted - unadjusted)


def bland_altman(records, link):
    """One point per record whose two fits for `link` both converged."""
    points = []
    for record in records:
        estimates = record.for_link(link)
        if estimates is not None and estimates.converged:
            points.append(BAPoint.from_pair(estimates.unadjusted, estimates.adjusted))
    return points


def is_more_extreme(unadjusted, adjusted, tolerance=EXTREMENESS_TOLERANCE):
    """Adjusted at least as far from zero as unadjusted, on the same side."""
    if abs(adjusted) < abs(unadjusted) - tolerance:
        return False
    if abs(unadjusted) <= tolerance or abs(adjusted) <= tolerance:
        return True
    return np.sign(unadjusted) == np.sign(adjusted)


def is_sign_flip(unadjusted, adjusted, floor=SIGN_FLOOR):
    return abs(unadjusted) > floor and abs(adjusted) > floor and unadjusted * adjusted < 0


@dataclass
class PatternReport:
    """Counts summarising a grid run, per link."""

    records: int = 0
    extremeness_violations: int = 0
    sign_flips: dict = field(default_factory=dict)
    null_band: dict = field(default_factory=dict)
    converged: dict = field(default_factory=dict)
    not_converged: dict = field(default_factory=dict)
    null_preservation_violations: int = 0

    @property
    def passed(self):
        return self.extremeness_violations == 0

    def to_dict(self):
        return {
            'records': self.records,
            'logit_extremeness_violations': self.extremeness_violations,
            'logit_null_preservation_violations': self.null_preservation_violations,
            'sign_flips': dict(sorted(self.sign_flips.items())),
            'null_band': dict(sorted(self.null_band.items())),
            'converged': dict(sorted(self.converged.items())),
            'not_converged': dict(sorted(self.not_converged.items())),
            'passed': self.passed,
        }


def null_preservation_across_grid(records, link='logit'):
    """Records whose unadjusted coefficient is null but adjusted is not."""
    violations = 0
    for record in records:
        estimates = record.for_link(link)
        if estimates is None or not estimates.converged:
            continue
        if abs(estimates.unadjusted) <= UNADJUSTED_NULL and abs(estimates.adjusted) > ADJUSTED_NULL:
            violations += 1
    return violations


def pattern_checks(records):
    """
    Summarise a grid run: logit extremeness violations (expected 0),
    identity/log sign flips, the null band per link and convergence per link.

    The null band counts records whose unadjusted coefficient is null while
    the adjusted one is not. On balanced tables it is empty for logit and
    populated for identity and log. Opposite-sign identity/log pairs on the
    default grid all have a round-off unadjusted coefficient, so they land in
    the band rather than in `sign_flips`.
    """
    report = PatternReport(records=len(records))
    links = records[0].links if records else ()

    for link in links:
        pairs = [record.for_link(link) for record in records]
        done = [p for p in pairs if p.converged]
        report.converged[link] = len(done)
        report.not_converged[link] = len(pairs) - len(done)
        report.null_band[link] = null_preservation_across_grid(records, link)

        if link == 'logit':
            report.extremeness_violations = sum(
                1 for p in done if not is_more_extreme(p.unadjusted, p.adjusted)
            )
            report.null_preservation_violations = report.null_band[link]
        else:
            report.sign_flips[link] = sum(1 for p in done if is_sign_flip(p.unadjusted, p.adjusted))

    return report
