"""
Link functions for binomial GLMs.

Each link carries its inverse h, the derivative h' and the link g = h^-1.
Only logit is canonical for the binomial family.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from model.exceptions import GLMError, UnknownLinkError

EPSILON = 1e-10
LINK_NAMES = ('logit', 'probit', 'identity', 'log', 'cloglog')

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _logit_inverse(eta):
    return special.expit(eta)


def _logit_derivative(eta):
    mu = special.expit(eta)
    return mu * (1.0 - mu)


def _probit_derivative(eta):
    return _INV_SQRT_2PI * np.exp(-0.5 * eta * eta)


def _cloglog_inverse(eta):
    return -np.expm1(-np.exp(eta))


def _cloglog_derivative(eta):
    return np.exp(eta - np.exp(eta))


def _cloglog_link(mu):
    return np.log(-np.log1p(-mu))


_TABLE = {
    'logit': (_logit_inverse, _logit_derivative, special.logit),
    'probit': (special.ndtr, _probit_derivative, special.ndtri),
    'identity': (lambda eta: eta, lambda eta: np.ones_like(eta), lambda mu: mu),
    'log': (np.exp, np.exp, np.log),
    'cloglog': (_cloglog_inverse, _cloglog_derivative, _cloglog_link),
}


@dataclass(frozen=True)
class LinkFunction:
    """A named binomial link: h, h' and g evaluated elementwise."""

    kind: str

    def __post_init__(self):
        if self.kind not in _TABLE:
            raise UnknownLinkError(f"unknown link: {self.kind}")

    @classmethod
    def from_name(cls, name):
        return cls(str(name).strip().lower())

    @property
    def canonical(self):
        return self.kind == 'logit'

    def inverse(self, eta):
        """h(eta), unclamped."""
        return _TABLE[self.kind][0](np.asarray(eta, dtype=float))

    def derivative(self, eta):
        """h'(eta)."""
        return _TABLE[self.kind][1](np.asarray(eta, dtype=float))

    def link(self, mu):
        """g(mu) = h^-1(mu)."""
        return _TABLE[self.kind][2](np.asarray(mu, dtype=float))

    def __str__(self):
        return self.kind


def inverse_link(link, eta, epsilon=EPSILON):
    """
    Probability h(eta) clamped to [epsilon, 1 - epsilon].

    Raises GLMError for non-finite eta.
    """
    eta = np.asarray(eta, dtype=float)
    if not np.all(np.isfinite(eta)):
        raise GLMError("linear predictor must be finite")
    mu = np.clip(link.inverse(eta), epsilon, 1.0 - epsilon)
    return float(mu) if mu.ndim == 0 else mu
