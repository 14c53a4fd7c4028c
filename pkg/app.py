#!/usr/bin/env python3
"""
canonlink - covariate adjustment in randomised trials with binomial GLMs.

Sub-commands:
    fit      Fit one GLM to a cell CSV and print the fit as JSON
    margins  Marginal risk difference (standardization or coefficient)
    iptw     Risk difference by inverse probability of treatment weighting
    compare  Unadjusted and adjusted risk differences for several links
    grid     Systematic exploration over balanced four-cell trials
    plot     Bland-Altman SVG from a grid records file

Usage:
    python app.py fit --data data/table1.csv --link identity --adjusted
    python app.py grid --out results/

Exit status: 0 success, 1 usage or input error, 2 numerical failure.
"""

import argparse
import json
import logging
import os
import sys

# Add project root to path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from effects import (
    EffectsError,
    NonConvergedFitError,
    coefficient_risk_difference,
    compare_links,
    format_comparison,
    iptw_risk_difference,
    standardized_risk_difference,
)
from effects.comparison import DEFAULT_LINKS
from explorer import GridSpec, NoPointsError, bland_altman, pattern_checks, render_bland_altman, run_grid
from explorer.plots import PANEL_ORDER
from model import BoundaryError, GLMError, ModelSpec, SolverSettings, fit_glm
from preprocessing import CellTableError, load_cell_csv, scale_table
from storage import (
    RecordsFormatError,
    SettingsError,
    build_document,
    dumps,
    effect_to_dict,
    load_settings,
    read_records_csv,
    write_grid_outputs,
)

logger = logging.getLogger('canonlink')

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    """Command-line usage error."""


class ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage errors with exit status 1."""

    def error(self, message):
        raise UsageError(message)


def _add_data_flags(parser):
    parser.add_argument('--data', required=True, help='Cell CSV (x,z,events,trials)')
    parser.add_argument('--scale', type=int, default=1,
                        help='Multiply every count by this positive integer')


def _add_model_flags(parser):
    _add_data_flags(parser)
    parser.add_argument('--link', required=True,
                        help='logit, probit, identity, log or cloglog')
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--adjusted', dest='adjusted', action='store_true',
                       help='Adjust for the covariate x')
    group.add_argument('--unadjusted', dest='adjusted', action='store_false',
                       help='Treatment only')


def build_parser():
    parser = ArgumentParser(prog='canonlink', description='Covariate adjustment with binomial GLMs')
    parser.add_argument('--verbose', '-v', action='store_true', help='Progress messages on stderr')
    parser.add_argument('--settings', default=None, help='Settings JSON (default config/settings.json)')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    fit = commands.add_parser('fit', help='Fit one GLM')
    _add_model_flags(fit)

    margins = commands.add_parser('margins', help='Marginal risk difference from a fitted GLM')
    _add_model_flags(margins)
    margins.add_argument('--method', choices=['standardization', 'coefficient'],
                         default='standardization')

    iptw = commands.add_parser('iptw', help='Inverse probability of treatment weighting')
    _add_data_flags(iptw)

    compare = commands.add_parser('compare', help='Risk differences across links')
    _add_data_flags(compare)
    compare.add_argument('--links', nargs='+', default=list(DEFAULT_LINKS))

    grid = commands.add_parser('grid', help='Systematic exploration over balanced trials')
    grid.add_argument('--out', required=True, help='Output directory')

    plot = commands.add_parser('plot', help='Bland-Altman SVG from grid records')
    plot.add_argument('--records', required=True, help='records.csv written by grid')
    plot.add_argument('--out', required=True, help='SVG path')

    return parser


def _load_table(args):
    table = load_cell_csv(args.data)
    return scale_table(table, args.scale) if args.scale != 1 else table


def cmd_fit(args, settings):
    spec = ModelSpec.create(args.link, args.adjusted)
    table = _load_table(args)
    fit = fit_glm(spec, table, SolverSettings.from_dict(settings['solver']))
    print(dumps(build_document(fit)))
    if not fit.converged:
        print(f"error: {spec.label()} fit did not converge: {fit.diagnostic}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_margins(args, settings):
    spec = ModelSpec.create(args.link, args.adjusted)
    if args.method == 'coefficient' and spec.link.kind != 'identity':
        raise EffectsError(f"--method coefficient needs the identity link, got {spec.link.kind}")

    table = _load_table(args)
    fit = fit_glm(spec, table, SolverSettings.from_dict(settings['solver']))
    if not fit.converged:
        print(dumps(build_document(fit)))
        print(f"error: {spec.label()} fit did not converge: {fit.diagnostic}", file=sys.stderr)
        return EXIT_NUMERICAL

    if args.method == 'coefficient':
        effect = coefficient_risk_difference(fit, spec)
    else:
        effect = standardized_risk_difference(fit, spec, table)

    print(dumps(build_document(fit, [effect])))
    print(effect.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_iptw(args, settings):
    effect = iptw_risk_difference(_load_table(args))
    print(dumps(build_document(effects=[effect])))
    print(effect.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_compare(args, settings):
    table = _load_table(args)
    rows = compare_links(table, args.links, SolverSettings.from_dict(settings['solver']))
    document = {'comparison': [
        {'link': row.link,
         'unadjusted': effect_to_dict(row.unadjusted),
         'adjusted': effect_to_dict(row.adjusted)}
        for row in rows
    ]}
    print(dumps(document))
    print(format_comparison(rows), file=sys.stderr)
    return EXIT_OK


def cmd_grid(args, settings):
    spec = GridSpec.from_dict(settings['grid'])
    os.makedirs(args.out, exist_ok=True)
    if not os.access(args.out, os.W_OK):
        raise PermissionError(f"output directory is not writable: {args.out}")
    logger.info("=" * 60)
    logger.info(f"GRID EXPLORATION: {spec.size} tables, links {', '.join(spec.links)}")
    logger.info("=" * 60)

    records = run_grid(spec, n_jobs=settings['threads'],
                       settings=SolverSettings.from_dict(settings['solver']))
    report = pattern_checks(records)
    points = {link: bland_altman(records, link) for link in spec.links}
    write_grid_outputs(records, report, points, args.out)

    if not report.passed:
        print(f"error: {report.extremeness_violations} logit records violate the "
              f"extremeness pattern", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_plot(args, settings):
    records = read_records_csv(args.records)
    points = {link: bland_altman(records, link) for link in PANEL_ORDER}
    render_bland_altman(points).save(args.out)
    return EXIT_OK


COMMANDS = {
    'fit': cmd_fit,
    'margins': cmd_margins,
    'iptw': cmd_iptw,
    'compare': cmd_compare,
    'grid': cmd_grid,
    'plot': cmd_plot,
}


def main(argv=None):
    """Run one sub-command and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_INPUT

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )

    try:
        settings = load_settings(args.settings)
        return COMMANDS[args.command](args, settings)
    except (NonConvergedFitError, BoundaryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CellTableError, GLMError, EffectsError, RecordsFormatError,
            SettingsError, NoPointsError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
