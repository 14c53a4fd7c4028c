"""
Effects package for canonlink.
Marginal risk differences by standardization, by the identity-link
coefficient and by inverse probability of treatment weighting.
"""

from .bootstrap import BootstrapResult, bootstrap_standard_error
from .comparison import LinkComparison, compare_links, format_comparison, marginal_effect
from .margins import (
    EffectsError,
    LinkMismatchError,
    MarginalEffect,
    NonConvergedFitError,
    PositivityError,
    coefficient_risk_difference,
    round3,
    standardized_risk_difference,
)
from .weighting import PropensityModel, iptw_risk_difference

__all__ = [
    'MarginalEffect',
    'PropensityModel',
    'standardized_risk_difference',
    'coefficient_risk_difference',
    'iptw_risk_difference',
    'bootstrap_standard_error',
    'BootstrapResult',
    'compare_links',
    'format_comparison',
    'marginal_effect',
    'LinkComparison',
    'round3',
    'EffectsError',
    'NonConvergedFitError',
    'LinkMismatchError',
    'PositivityError',
]
