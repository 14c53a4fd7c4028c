"""
Model specification and design matrices.
Unadjusted models use predictors {1, z}; adjusted models add x.
"""

from dataclasses import dataclass

import numpy as np

from model.exceptions import SpecMismatchError
from model.links import LinkFunction

UNADJUSTED_TERMS = ('intercept', 'treatment')
ADJUSTED_TERMS = ('intercept', 'treatment', 'covariate')
TREATMENT = 1


@dataclass(frozen=True)
class ModelSpec:
    """Binomial GLM: a link plus the adjustment set."""

    link: LinkFunction
    adjusted: bool

    @classmethod
    def create(cls, link, adjusted):
        if not isinstance(link, LinkFunction):
            link = LinkFunction.from_name(link)
        return cls(link, bool(adjusted))

    @property
    def terms(self):
        return ADJUSTED_TERMS if self.adjusted else UNADJUSTED_TERMS

    @property
    def n_coefficients(self):
        return len(self.terms)

    def label(self):
        return f"{self.link.kind} {'adjusted' if self.adjusted else 'unadjusted'}"

    def check(self, coefficients):
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (self.n_coefficients,):
            raise SpecMismatchError(
                f"{self.label()} model needs {self.n_coefficients} coefficients, "
                f"got shape {coefficients.shape}"
            )
        return coefficients


def design_matrix(spec, x, z):
    """Columns (1, z[, x]) for covariate and arm vectors."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    columns = [np.ones_like(z), z]
    if spec.adjusted:
        columns.append(x)
    return np.column_stack(columns)


def counterfactual_designs(spec, x):
    """Design matrices with every individual set to z=1 and to z=0."""
    x = np.asarray(x, dtype=float)
    return design_matrix(spec, x, np.ones_like(x)), design_matrix(spec, x, np.zeros_like(x))
