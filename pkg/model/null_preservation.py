"""
Null preservation: under perfect covariate balance a canonical-link GLM
with a null unadjusted treatment effect also has a null adjusted effect.
"""

import logging

from model.exceptions import NotApplicableError
from model.features import ModelSpec
from model.training import fit_glm
from preprocessing.utils import check_balance

logger = logging.getLogger(__name__)

UNADJUSTED_NULL = 1e-8
ADJUSTED_NULL = 1e-6


def null_preservation_check(link, table, settings=None):
    """
    True iff the adjusted treatment coefficient is null (|beta| <= 1e-6).

    Raises NotApplicableError when the table is unbalanced, a fit does not
    converge, or the unadjusted coefficient is not null (|beta*| > 1e-8).
    """
    if not check_balance(table).balanced:
        raise NotApplicableError("covariate is not perfectly balanced across arms")

    unadjusted = fit_glm(ModelSpec(link, adjusted=False), table, settings)
    if not unadjusted.converged:
        raise NotApplicableError(f"unadjusted {link} fit did not converge: {unadjusted.diagnostic}")
    if abs(unadjusted.treatment_coefficient) > UNADJUSTED_NULL:
        raise NotApplicableError(
            f"unadjusted treatment effect is not null ({unadjusted.treatment_coefficient:.3g})"
        )

    adjusted = fit_glm(ModelSpec(link, adjusted=True), table, settings)
    if not adjusted.converged:
        raise NotApplicableError(f"adjusted {link} fit did not converge: {adjusted.diagnostic}")

    preserved = abs(adjusted.treatment_coefficient) <= ADJUSTED_NULL
    logger.info(
        f"{'✓' if preserved else '✗'} {link}: adjusted treatment coefficient "
        f"{adjusted.treatment_coefficient:.3g}"
    )
    return preserved
