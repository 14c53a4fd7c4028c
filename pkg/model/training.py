"""
Maximum-likelihood fitting of binomial GLMs by iteratively reweighted
least squares (Fisher scoring) with step-halving.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from model.evaluation import binomial_arrays, log_likelihood, score, working_weights
from model.exceptions import BoundaryError, RankDeficientError
from model.features import TREATMENT, design_matrix
from model.links import EPSILON

logger = logging.getLogger(__name__)

BOUNDARY_MARGIN = 1e-6


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and limits for the IRLS solver."""

    epsilon: float = EPSILON
    max_iterations: int = 100
    coef_tolerance: float = 1e-10
    score_tolerance: float = 1e-8
    max_halvings: int = 20
    pivot_tolerance: float = 1e-12

    @classmethod
    def from_dict(cls, values):
        known = {k: v for k, v in (values or {}).items() if k in cls.__dataclass_fields__}
        return cls(**known)


DEFAULT_SETTINGS = SolverSettings()


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FitResult:
    """Outcome of one GLM fit, converged or not."""

    spec: object
    coefficients: np.ndarray
    covariance: np.ndarray
    converged: bool
    iterations: int
    final_score_norm: float
    log_likelihood: float
    diagnostic: str = None
    n_obs: int = field(default=0, compare=False)

    @property
    def link(self):
        return self.spec.link

    @property
    def adjusted(self):
        return self.spec.adjusted

    @property
    def terms(self):
        return self.spec.terms

    @property
    def standard_errors(self):
        with np.errstate(invalid='ignore'):
            return np.sqrt(np.diag(self.covariance))

    @property
    def treatment_coefficient(self):
        return float(self.coefficients[TREATMENT])

    @property
    def treatment_se(self):
        return float(self.standard_errors[TREATMENT])


def _check_rank(X, trials, tolerance):
    gram = X.T @ (trials[:, None] * X)
    _, R, _ = linalg.qr(gram, pivoting=True)
    pivots = np.abs(np.diag(R))
    rank = int(np.sum(pivots > tolerance * max(pivots[0], 1.0)))
    if rank < X.shape[1]:
        raise RankDeficientError(
            f"design matrix has rank {rank}, needs {X.shape[1]} (is every covariate level present?)"
        )


def _feasible(mu, epsilon):
    return bool(np.all(np.isfinite(mu)) and np.all(mu >= epsilon) and np.all(mu <= 1.0 - epsilon))


def _wls(X, W, target):
    return np.linalg.solve(X.T @ (W[:, None] * X), X.T @ (W * target))


def _starting_values(spec, X, events, trials, epsilon):
    link = spec.link
    mu0 = (events + 0.5) / (trials + 1.0)
    eta0 = link.link(mu0)
    d = link.derivative(eta0)
    beta = _wls(X, trials * d * d / (mu0 * (1.0 - mu0)), eta0)
    with np.errstate(over='ignore', invalid='ignore'):
        if _feasible(link.inverse(X @ beta), epsilon):
            return beta

    # Intercept-only start: always inside the parameter space.
    pooled = (events.sum() + 0.5) / (trials.sum() + 1.0)
    beta = np.zeros(X.shape[1])
    beta[0] = float(link.link(pooled))
    return beta


def _irls(spec, data, settings):
    x, z, events, trials = binomial_arrays(data)
    X = design_matrix(spec, x, z)
    link = spec.link
    eps = settings.epsilon

    _check_rank(X, trials, settings.pivot_tolerance)

    beta = _starting_values(spec, X, events, trials, eps)
    converged = False
    diagnostic = None
    score_norm = float('inf')
    iteration = 0

    for iteration in range(1, settings.max_iterations + 1):
        eta = X @ beta
        mu = link.inverse(eta)
        d = link.derivative(eta)
        W = trials * d * d / (mu * (1.0 - mu))
        working = eta + (events / trials - mu) / d
        step = _wls(X, W, working) - beta

        for halving in range(settings.max_halvings + 1):
            candidate = beta + step * 0.5 ** halving
            with np.errstate(over='ignore', invalid='ignore'):
                ok = _feasible(link.inverse(X @ candidate), eps)
            if ok:
                break
        else:
            if link.kind in ('identity', 'log'):
                raise BoundaryError(
                    f"{spec.label()} fit: step halving could not keep fitted "
                    f"probabilities inside ({eps:g}, 1 - {eps:g})"
                )
            diagnostic = "boundary: fitted probabilities approach 0 or 1 (separation)"
            break

        if halving:
            logger.debug(f"iteration {iteration}: step halved {halving} times")

        change = float(np.max(np.abs(candidate - beta)))
        beta = candidate
        score_norm = score(spec, data, beta, epsilon=eps).norm()
        logger.debug(f"iteration {iteration}: change {change:.3e}, score {score_norm:.3e}")

        if change <= settings.coef_tolerance and score_norm <= settings.score_tolerance:
            converged = True
            break

    mu = link.inverse(X @ beta)
    on_edge = bool(np.any(mu < BOUNDARY_MARGIN) or np.any(mu > 1.0 - BOUNDARY_MARGIN))
    if diagnostic is None and on_edge:
        # Step halving can creep onto the clamp and satisfy both tolerances there.
        converged = False
        diagnostic = "boundary: maximum likelihood lies on the edge of the parameter space"
    elif not converged and diagnostic is None:
        diagnostic = f"iteration limit ({settings.max_iterations}) reached"

    W = working_weights(link, X @ beta, trials, eps)
    information = X.T @ (W[:, None] * X)
    try:
        covariance = np.linalg.inv(information)
        covariance = 0.5 * (covariance + covariance.T)
    except np.linalg.LinAlgError:
        covariance = np.full_like(information, np.nan)

    result = FitResult(
        spec=spec,
        coefficients=_frozen(beta),
        covariance=_frozen(covariance),
        converged=converged,
        iterations=iteration,
        final_score_norm=score_norm,
        log_likelihood=log_likelihood(spec, data, beta),
        diagnostic=diagnostic,
        n_obs=int(trials.sum()),
    )

    if converged:
        logger.debug(f"✓ {spec.label()} fit converged in {iteration} iterations")
    else:
        logger.info(f"⚠️ {spec.label()} fit did not converge: {diagnostic}")
    return result


def fit_glm(spec, table, settings=None):
    """
    Fit a binomial GLM to aggregated cells by IRLS.

    Non-convergence is reported through FitResult.converged and
    FitResult.diagnostic. Rank deficiency raises RankDeficientError; an
    identity or log fit that cannot stay inside the parameter space raises
    BoundaryError.
    """
    return _irls(spec, table, settings or DEFAULT_SETTINGS)


def fit_glm_rows(spec, rows, settings=None):
    """Fit the same model to individual-level (x, z, y) rows."""
    return _irls(spec, rows, settings or DEFAULT_SETTINGS)
