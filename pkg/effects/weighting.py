"""
Inverse probability of treatment weighting with a saturated propensity model.
"""

import logging
from dataclasses import dataclass

import numpy as np

from effects.margins import MarginalEffect, PositivityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PropensityModel:
    """P(Z=1 | X=x) per covariate level, from cell totals."""

    levels: tuple
    probabilities: tuple

    @classmethod
    def fit(cls, table):
        levels = tuple(sorted({cell.x for cell in table}))
        probabilities = []
        for level in levels:
            treated = table.get(level, 1)
            control = table.get(level, 0)
            if treated is None or control is None:
                missing = 1 if treated is None else 0
                raise PositivityError(
                    f"positivity violation: no individuals with x={level} in arm z={missing}"
                )
            probabilities.append(treated.trials / (treated.trials + control.trials))
        return cls(levels, tuple(probabilities))

    def probability(self, x):
        return self.probabilities[self.levels.index(x)]


def _arm_mean(cells, weight_of):
    """Hajek weighted mean of one arm and its variance with normalised weights."""
    weights = np.array([weight_of(c) for c in cells])
    events = np.array([c.events for c in cells], dtype=float)
    trials = np.array([c.trials for c in cells], dtype=float)

    total = float(weights @ trials)
    mean = float(weights @ events) / total
    w = weights / total
    squared = events * (1.0 - mean) ** 2 + (trials - events) * mean ** 2
    variance = float(np.sum(w * w * squared))
    return mean, variance


def iptw_risk_difference(table):
    """
    Weighted arm-mean difference with weights 1/e(x) in the experimental arm
    and 1/(1 - e(x)) in the control arm, weights normalised within arm.
    """
    propensity = PropensityModel.fit(table)

    treated = [c for c in table if c.z == 1]
    control = [c for c in table if c.z == 0]
    mean1, var1 = _arm_mean(treated, lambda c: 1.0 / propensity.probability(c.x))
    mean0, var0 = _arm_mean(control, lambda c: 1.0 / (1.0 - propensity.probability(c.x)))

    effect = MarginalEffect(mean1 - mean0, float(np.sqrt(var1 + var0)), 'iptw')
    logger.info(f"✓ {effect.summary()}")
    return effect
