"""
Marginal risk differences derived from fitted GLMs: standardization
(g-computation) with delta-method standard errors, and the raw identity-link
treatment coefficient.
"""

import logging
from dataclasses import dataclass

import numpy as np

from model.features import counterfactual_designs

logger = logging.getLogger(__name__)

METHODS = ('coefficient', 'standardization', 'iptw')


class EffectsError(ValueError):
    """Base class for marginal-effect errors."""


class NonConvergedFitError(EffectsError):
    """Effect requested from a fit that did not converge."""


class LinkMismatchError(EffectsError):
    """Method not valid for the fit's link."""


class PositivityError(EffectsError):
    """A covariate level is missing from one arm."""


@dataclass(frozen=True)
class MarginalEffect:
    """Risk difference (experimental minus control) with its standard error."""

    estimate: float
    std_error: float
    method: str
    link: str = None
    adjusted: bool = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise EffectsError(f"unknown method: {self.method}")
        if not -1.0 <= self.estimate <= 1.0:
            raise EffectsError(f"risk difference {self.estimate} outside [-1, 1]")
        if not self.std_error >= 0.0:
            raise EffectsError(f"standard error {self.std_error} is negative or undefined")

    def summary(self):
        """Human-readable line at 3 decimals, half-to-even."""
        label = self.method
        if self.link:
            label += f" ({self.link}, {'adjusted' if self.adjusted else 'unadjusted'})"
        return f"{label}: estimate {round3(self.estimate)}, SE {round3(self.std_error)}"


def round3(value):
    """Format to 3 decimals, rounding half-to-even, never printing -0.000."""
    return f"{round(value, 3) + 0.0:.3f}"


def _require_converged(fit):
    if not fit.converged:
        raise NonConvergedFitError(
            f"{fit.spec.label()} fit did not converge: {fit.diagnostic}"
        )


def standardized_risk_difference(fit, spec, table):
    """
    Average of h(eta | z=1) - h(eta | z=0) over all individuals.

    Cells are weighted by their trial counts. The standard error uses the
    delta method with covariates held fixed: sqrt(g' V g), g the gradient of
    the estimate with respect to the coefficients.
    """
    _require_converged(fit)
    if fit.spec != spec:
        raise LinkMismatchError(f"fit is {fit.spec.label()}, spec is {spec.label()}")

    weights = table.trials / table.trials.sum()
    treated, control = counterfactual_designs(spec, table.x)
    beta = fit.coefficients
    eta1, eta0 = treated @ beta, control @ beta

    link = spec.link
    estimate = float(weights @ (link.inverse(eta1) - link.inverse(eta0)))
    gradient = (weights * link.derivative(eta1)) @ treated - (weights * link.derivative(eta0)) @ control
    variance = float(gradient @ fit.covariance @ gradient)

    effect = MarginalEffect(estimate, float(np.sqrt(max(variance, 0.0))), 'standardization',
                            link.kind, spec.adjusted)
    logger.debug(f"✓ {effect.summary()}")
    return effect


def coefficient_risk_difference(fit, spec):
    """Treatment coefficient of an identity-link fit, with its model-based SE."""
    if spec.link.kind != 'identity':
        raise LinkMismatchError(
            f"coefficient risk difference needs the identity link, got {spec.link.kind}"
        )
    _require_converged(fit)
    return MarginalEffect(fit.treatment_coefficient, fit.treatment_se, 'coefficient',
                          spec.link.kind, spec.adjusted)
