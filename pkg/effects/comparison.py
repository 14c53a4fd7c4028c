"""
Side-by-side marginal risk differences for several links, unadjusted and
adjusted for the covariate.
"""

from dataclasses import dataclass

from effects.margins import coefficient_risk_difference, round3, standardized_risk_difference
from model.features import ModelSpec
from model.links import LinkFunction
from model.training import fit_glm

DEFAULT_LINKS = ('logit', 'identity', 'probit')


@dataclass(frozen=True)
class LinkComparison:
    link: str
    unadjusted: object
    adjusted: object


def marginal_effect(spec, table, settings=None):
    """Fit one model and derive its risk difference: the coefficient for the
    identity link, standardization for every other link."""
    fit = fit_glm(spec, table, settings)
    if spec.link.kind == 'identity':
        return fit, coefficient_risk_difference(fit, spec)
    return fit, standardized_risk_difference(fit, spec, table)


def compare_links(table, links=DEFAULT_LINKS, settings=None):
    rows = []
    for name in links:
        link = LinkFunction.from_name(name)
        _, unadjusted = marginal_effect(ModelSpec(link, False), table, settings)
        _, adjusted = marginal_effect(ModelSpec(link, True), table, settings)
        rows.append(LinkComparison(link.kind, unadjusted, adjusted))
    return rows


def format_comparison(rows):
    """Plain-text table at 3 decimals."""
    lines = [
        f"{'Link':<12}{'Unadjusted':>12}{'SE':>8}{'Adjusted':>12}{'SE':>8}",
        '-' * 52,
    ]
    for row in rows:
        lines.append(
            f"{row.link:<12}{round3(row.unadjusted.estimate):>12}{round3(row.unadjusted.std_error):>8}"
            f"{round3(row.adjusted.estimate):>12}{round3(row.adjusted.std_error):>8}"
        )
    return '\n'.join(lines)
