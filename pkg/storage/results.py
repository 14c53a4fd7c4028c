"""
JSON documents for fits and marginal effects.

A document holds an optional `fit` and an `effects` array. Floats use the
shortest repr that round-trips exactly; non-finite numbers become null.
"""

import json
import math

import numpy as np

from effects.margins import MarginalEffect
from model.features import ModelSpec
from model.links import LinkFunction
from model.training import FitResult


def _number(value):
    value = float(value)
    return value if math.isfinite(value) else None


def _restore(value):
    return float('nan') if value is None else float(value)


def fit_to_dict(fit):
    return {
        'link': fit.link.kind,
        'adjusted': fit.adjusted,
        'terms': list(fit.terms),
        'coefficients': [_number(v) for v in fit.coefficients],
        'standard_errors': [_number(v) for v in fit.standard_errors],
        'covariance': [[_number(v) for v in row] for row in fit.covariance],
        'converged': fit.converged,
        'iterations': fit.iterations,
        'score_norm': _number(fit.final_score_norm),
        'log_likelihood': _number(fit.log_likelihood),
        'diagnostic': fit.diagnostic,
        'n_obs': fit.n_obs,
    }


def fit_from_dict(values):
    spec = ModelSpec(LinkFunction.from_name(values['link']), bool(values['adjusted']))
    coefficients = np.array([_restore(v) for v in values['coefficients']])
    covariance = np.array([[_restore(v) for v in row] for row in values['covariance']])
    spec.check(coefficients)
    coefficients.setflags(write=False)
    covariance.setflags(write=False)
    return FitResult(
        spec=spec,
        coefficients=coefficients,
        covariance=covariance,
        converged=bool(values['converged']),
        iterations=int(values['iterations']),
        final_score_norm=_restore(values['score_norm']),
        log_likelihood=_restore(values['log_likelihood']),
        diagnostic=values.get('diagnostic'),
        n_obs=int(values.get('n_obs', 0)),
    )


def effect_to_dict(effect):
    return {
        'method': effect.method,
        'link': effect.link,
        'adjusted': effect.adjusted,
        'estimate': _number(effect.estimate),
        'std_error': _number(effect.std_error),
    }


def effect_from_dict(values):
    return MarginalEffect(
        estimate=float(values['estimate']),
        std_error=float(values['std_error']),
        method=values['method'],
        link=values.get('link'),
        adjusted=values.get('adjusted'),
    )


def build_document(fit=None, effects=()):
    document = {}
    if fit is not None:
        document['fit'] = fit_to_dict(fit)
    if effects:
        document['effects'] = [effect_to_dict(e) for e in effects]
    return document


def read_document(values):
    """(fit or None, list of effects) from a parsed document."""
    fit = fit_from_dict(values['fit']) if 'fit' in values else None
    effects = [effect_from_dict(e) for e in values.get('effects', [])]
    return fit, effects


def dumps(document):
    return json.dumps(document, indent=2, allow_nan=False)
