"""
Derivative-free maximum likelihood, independent of IRLS.
Used to cross-check fitted coefficients.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from model.evaluation import log_likelihood


@dataclass(frozen=True)
class OracleResult:
    coefficients: np.ndarray
    log_likelihood: float
    evaluations: int


def _intercept_start(spec, table):
    pooled = table.events.sum() / table.trials.sum()
    start = np.zeros(spec.n_coefficients)
    start[0] = float(spec.link.link(pooled))
    return start


def maximize_likelihood(spec, table, start=None, restarts=2):
    """
    Maximise log_likelihood with Nelder-Mead, restarting from each optimum
    with a shrinking simplex.
    """
    def objective(beta):
        value = log_likelihood(spec, table, beta)
        return -value if np.isfinite(value) else np.inf

    point = np.asarray(start, dtype=float) if start is not None else _intercept_start(spec, table)
    radius = 0.05
    evaluations = 0
    options = {'xatol': 1e-11, 'fatol': 1e-12, 'maxiter': 40000, 'maxfev': 80000, 'adaptive': True}

    for _ in range(restarts + 1):
        simplex = np.vstack([point] + [point + radius * np.eye(len(point))[i] for i in range(len(point))])
        result = optimize.minimize(objective, point, method='Nelder-Mead',
                                   options=dict(options, initial_simplex=simplex))
        point = result.x
        evaluations += result.nfev
        radius /= 10.0

    return OracleResult(point, -float(result.fun), evaluations)
