"""
Likelihood quantities for binomial GLMs on aggregated data: score vector,
log-likelihood and expected Fisher information.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import special

from model.features import design_matrix
from model.links import EPSILON


@dataclass(frozen=True)
class ScoreVector:
    """Score components in predictor order; `clamped` flags fitted
    probabilities that fell outside (eps, 1 - eps) before clamping."""

    components: np.ndarray
    clamped: bool = False

    def norm(self):
        return float(np.max(np.abs(self.components)))

    def __len__(self):
        return len(self.components)


def binomial_arrays(data):
    """
    (x, z, events, trials) arrays from a CellTable or from individual rows.

    Individual rows (a DataFrame with x, z, y columns) become one-trial cells.
    """
    if isinstance(data, pd.DataFrame):
        x = data['x'].to_numpy(dtype=float)
        z = data['z'].to_numpy(dtype=float)
        y = data['y'].to_numpy(dtype=float)
        return x, z, y, np.ones_like(y)
    return data.x, data.z, data.events, data.trials


def _fitted(spec, data, coefficients):
    x, z, events, trials = binomial_arrays(data)
    X = design_matrix(spec, x, z)
    eta = X @ spec.check(coefficients)
    return X, eta, events, trials


def score(spec, table, coefficients, general=False, epsilon=EPSILON):
    """
    Score vector of the binomial log-likelihood.

    For the canonical (logit) link each component is sum d_ij (y_i - mu_i).
    Other links multiply every summand by h'(eta) / (mu (1 - mu)); passing
    general=True applies that factor to logit as well.
    """
    X, eta, events, trials = _fitted(spec, table, coefficients)
    raw = spec.link.inverse(eta)
    clamped = bool(np.any(~np.isfinite(raw)) or np.any(raw < epsilon) or np.any(raw > 1.0 - epsilon))
    mu = np.clip(raw, epsilon, 1.0 - epsilon)

    residual = events - trials * mu
    if spec.link.canonical and not general:
        return ScoreVector(X.T @ residual, clamped)

    factor = spec.link.derivative(eta) / (mu * (1.0 - mu))
    return ScoreVector(X.T @ (residual * factor), clamped)


def log_likelihood(spec, table, coefficients):
    """
    Binomial log-likelihood without the binomial-coefficient constant.

    Returns -inf when a fitted probability lies outside [0, 1] or sits on
    the boundary with a nonzero count on the losing side.
    """
    _, eta, events, trials = _fitted(spec, table, coefficients)
    with np.errstate(over='ignore', invalid='ignore'):
        mu = spec.link.inverse(eta)
    if not np.all(np.isfinite(mu)) or np.any(mu < 0.0) or np.any(mu > 1.0):
        return float('-inf')
    with np.errstate(divide='ignore'):
        value = np.sum(special.xlogy(events, mu) + special.xlogy(trials - events, 1.0 - mu))
    return float(value) if np.isfinite(value) else float('-inf')


def working_weights(link, eta, trials, epsilon=EPSILON):
    """IRLS weights n h'(eta)^2 / (mu (1 - mu))."""
    mu = np.clip(link.inverse(eta), epsilon, 1.0 - epsilon)
    d = link.derivative(eta)
    return trials * d * d / (mu * (1.0 - mu))


def fisher_information(spec, table, coefficients, epsilon=EPSILON):
    """Expected information X' W X at the given coefficients."""
    X, eta, _, trials = _fitted(spec, table, coefficients)
    W = working_weights(spec.link, eta, trials, epsilon)
    return X.T @ (W[:, None] * X)
