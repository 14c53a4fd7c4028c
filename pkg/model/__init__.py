"""
Model package for canonlink.
Binomial GLMs with logit, probit, identity, log and cloglog links, fitted by
IRLS, with score, likelihood, information and null-preservation checks.
"""

from .exceptions import (
    BoundaryError,
    GLMError,
    NotApplicableError,
    RankDeficientError,
    SpecMismatchError,
    UnknownLinkError,
)
from .evaluation import ScoreVector, fisher_information, log_likelihood, score
from .features import ModelSpec, design_matrix
from .links import LINK_NAMES, LinkFunction, inverse_link
from .null_preservation import null_preservation_check
from .oracle import maximize_likelihood
from .training import FitResult, SolverSettings, fit_glm, fit_glm_rows

__all__ = [
    'LINK_NAMES',
    'LinkFunction',
    'inverse_link',
    'ModelSpec',
    'design_matrix',
    'ScoreVector',
    'score',
    'log_likelihood',
    'fisher_information',
    'FitResult',
    'SolverSettings',
    'fit_glm',
    'fit_glm_rows',
    'null_preservation_check',
    'maximize_likelihood',
    'GLMError',
    'UnknownLinkError',
    'RankDeficientError',
    'BoundaryError',
    'SpecMismatchError',
    'NotApplicableError',
]
