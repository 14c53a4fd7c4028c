"""
Tests for the command-line interface and the files it reads and writes.
"""

import unittest
import contextlib
import io
import json
import os
import sys
import tempfile
import shutil
import xml.etree.ElementTree as ET
from unittest import mock

import pandas as pd

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

import app
from explorer.grid import GridRecord, LinkEstimates
from model.features import ModelSpec
from model.training import fit_glm
from storage.records import RecordsFormatError, read_records_csv, write_records_csv
from storage.results import build_document, dumps, read_document
from storage.settings import SettingsError, load_settings
from effects.margins import standardized_risk_difference
from tests.fixtures import IPTW_CONTROL, IPTW_ROWS, IPTW_TREATED, TABLE1_CSV, TABLE1_PATH, table1

SVG_NS = '{http://www.w3.org/2000/svg}'


def run_cli(*argv):
    """Run app.main, returning (exit status, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = app.main(list(argv))
    return status, out.getvalue(), err.getvalue()


def write_cells(directory, name, rows):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='utf-8') as f:
        f.write("x,z,events,trials\n")
        f.writelines(f"{x},{z},{e},{n}\n" for x, z, e, n in rows)
    return path


def read_bytes(path):
    with open(path, 'rb') as f:
        return f.read()


class CLITestCase(unittest.TestCase):
    """Temporary directory and a clean thread override for every test."""

    def setUp(self):
        """Set up test environment."""
        self.temp_dir = tempfile.mkdtemp()
        patcher = mock.patch.dict(os.environ)
        patcher.start()
        self.addCleanup(patcher.stop)
        os.environ.pop('CANONLINK_THREADS', None)

    def tearDown(self):
        """Clean up test environment."""
        shutil.rmtree(self.temp_dir, ignore_errors=True)


class TestFitCommand(CLITestCase):
    """Test `fit`."""

    def test_identity_adjusted(self):
        """Test the identity adjusted treatment coefficient is -0.028."""
        status, out, _ = run_cli('fit', '--data', TABLE1_PATH, '--link', 'identity', '--adjusted')
        self.assertEqual(status, 0)
        fit = json.loads(out)['fit']
        self.assertEqual(fit['terms'], ['intercept', 'treatment', 'covariate'])
        self.assertAlmostEqual(fit['coefficients'][1], -0.028, delta=5e-4)
        self.assertAlmostEqual(fit['standard_errors'][1], 0.023, delta=5e-4)
        self.assertTrue(fit['converged'])
        self.assertEqual(len(fit['covariance']), 3)

    def test_logit_unadjusted(self):
        """Test the logit unadjusted treatment coefficient is 0."""
        status, out, _ = run_cli('fit', '--data', TABLE1_PATH, '--link', 'logit', '--unadjusted')
        self.assertEqual(status, 0)
        self.assertAlmostEqual(json.loads(out)['fit']['coefficients'][1], 0.0, delta=5e-4)

    def test_unknown_link(self):
        """Test an unknown link exits 1 naming the problem."""
        status, out, err = run_cli('fit', '--data', TABLE1_PATH, '--link', 'banana', '--adjusted')
        self.assertEqual(status, 1)
        self.assertEqual(out, '')
        self.assertIn('unknown link', err)
        self.assertEqual(len(err.strip().splitlines()), 1)

    def test_missing_file(self):
        """Test an unreadable file exits 1."""
        status, _, err = run_cli('fit', '--data', os.path.join(self.temp_dir, 'absent.csv'),
                                 '--link', 'logit', '--adjusted')
        self.assertEqual(status, 1)
        self.assertIn('error', err)

    def test_bad_csv(self):
        """Test a malformed CSV exits 1."""
        path = write_cells(self.temp_dir, 'bad.csv', [(0, 1, 300, 200), (0, 0, 20, 200)])
        status, _, err = run_cli('fit', '--data', path, '--link', 'logit', '--adjusted')
        self.assertEqual(status, 1)
        self.assertIn('events exceed trials', err)

    def test_usage_errors(self):
        """Test argparse errors exit 1."""
        self.assertEqual(run_cli()[0], 1)
        self.assertEqual(run_cli('fit', '--data', TABLE1_PATH, '--link', 'logit')[0], 1)
        self.assertEqual(run_cli('fit', '--data', TABLE1_PATH, '--link', 'logit',
                                 '--adjusted', '--unadjusted')[0], 1)
        self.assertEqual(run_cli('explode')[0], 1)

    def test_non_convergence(self):
        """Test separation exits 2 and still prints the diagnostics."""
        path = write_cells(self.temp_dir, 'separated.csv', [(0, 1, 0, 50), (0, 0, 10, 50)])
        status, out, err = run_cli('fit', '--data', path, '--link', 'logit', '--unadjusted')
        self.assertEqual(status, 2)
        fit = json.loads(out)['fit']
        self.assertFalse(fit['converged'])
        self.assertIn('boundary', fit['diagnostic'])
        self.assertIn('did not converge', err)

    def test_scale(self):
        """Test scaled counts keep the coefficient and shrink the SE."""
        _, base, _ = run_cli('fit', '--data', TABLE1_PATH, '--link', 'probit', '--adjusted')
        _, scaled, _ = run_cli('fit', '--data', TABLE1_PATH, '--link', 'probit', '--adjusted', '--scale', '100')
        base, scaled = json.loads(base)['fit'], json.loads(scaled)['fit']
        self.assertAlmostEqual(base['coefficients'][1], scaled['coefficients'][1], delta=1e-9)
        self.assertAlmostEqual(base['standard_errors'][1] / scaled['standard_errors'][1], 10.0, delta=0.1)
        self.assertEqual(scaled['n_obs'], 80000)
        self.assertEqual(run_cli('fit', '--data', TABLE1_PATH, '--link', 'logit',
                                 '--adjusted', '--scale', '0')[0], 1)

    def test_deterministic(self):
        """Test identical inputs give identical output bytes."""
        argv = ('fit', '--data', TABLE1_PATH, '--link', 'cloglog', '--adjusted')
        self.assertEqual(run_cli(*argv), run_cli(*argv))

    def test_json_round_trip(self):
        """Test output parses and re-serialises to the same text."""
        _, out, _ = run_cli('margins', '--data', TABLE1_PATH, '--link', 'log', '--adjusted')
        document = json.loads(out)
        self.assertEqual(dumps(document) + '\n', out)
        fit, effects = read_document(document)
        self.assertEqual(dumps(build_document(fit, effects)) + '\n', out)

    def test_invalid_thread_override(self):
        """Test a bad CANONLINK_THREADS exits 1."""
        os.environ['CANONLINK_THREADS'] = 'zero'
        status, _, err = run_cli('fit', '--data', TABLE1_PATH, '--link', 'logit', '--adjusted')
        self.assertEqual(status, 1)
        self.assertIn('CANONLINK_THREADS', err)


class TestMarginsCommand(CLITestCase):
    """Test `margins`."""

    def check(self, link, adjusted, estimate, se, method='standardization'):
        flag = '--adjusted' if adjusted else '--unadjusted'
        status, out, err = run_cli('margins', '--data', TABLE1_PATH, '--link', link, flag, '--method', method)
        self.assertEqual(status, 0)
        effect = json.loads(out)['effects'][0]
        self.assertEqual(effect['method'], method)
        self.assertAlmostEqual(effect['estimate'], estimate, delta=5e-4)
        self.assertAlmostEqual(effect['std_error'], se, delta=5e-4)
        return err

    def test_probit_adjusted(self):
        """Test probit adjusted: -0.006 (0.028)."""
        err = self.check('probit', True, -0.006, 0.028)
        self.assertIn('estimate -0.006, SE 0.028', err)

    def test_logit_adjusted(self):
        """Test logit adjusted: 0.000 (0.028)."""
        err = self.check('logit', True, 0.0, 0.028)
        self.assertIn('estimate 0.000, SE 0.028', err)

    def test_logit_unadjusted(self):
        """Test logit unadjusted: 0.000 (0.031)."""
        self.check('logit', False, 0.0, 0.031)

    def test_coefficient_method(self):
        """Test the identity coefficient: -0.028 (0.023)."""
        self.check('identity', True, -0.028, 0.023, method='coefficient')

    def test_coefficient_needs_identity(self):
        """Test --method coefficient with logit exits 1."""
        status, out, err = run_cli('margins', '--data', TABLE1_PATH, '--link', 'logit',
                                   '--adjusted', '--method', 'coefficient')
        self.assertEqual(status, 1)
        self.assertEqual(out, '')
        self.assertIn('identity', err)

    def test_unknown_method(self):
        """Test an unknown method is a usage error."""
        self.assertEqual(run_cli('margins', '--data', TABLE1_PATH, '--link', 'logit',
                                 '--adjusted', '--method', 'bayes')[0], 1)


class TestIptwCommand(CLITestCase):
    """Test `iptw`."""

    def test_table1(self):
        """Test the balanced trial gives 0.000."""
        status, out, _ = run_cli('iptw', '--data', TABLE1_PATH)
        self.assertEqual(status, 0)
        effect = json.loads(out)['effects'][0]
        self.assertEqual(effect['method'], 'iptw')
        self.assertAlmostEqual(effect['estimate'], 0.0, delta=1e-12)

    def test_hand_computed(self):
        """Test an unbalanced file against the hand-computed answer."""
        path = write_cells(self.temp_dir, 'unbalanced.csv', IPTW_ROWS)
        status, out, _ = run_cli('iptw', '--data', path)
        self.assertEqual(status, 0)
        self.assertAlmostEqual(json.loads(out)['effects'][0]['estimate'], IPTW_TREATED - IPTW_CONTROL, delta=1e-12)

    def test_positivity(self):
        """Test a missing cell exits 1."""
        path = write_cells(self.temp_dir, 'missing.csv', IPTW_ROWS[:3])
        status, _, err = run_cli('iptw', '--data', path)
        self.assertEqual(status, 1)
        self.assertIn('positivity', err)


class TestCompareCommand(CLITestCase):
    """Test `compare`."""

    def test_default_links(self):
        """Test the three-link comparison document and table."""
        status, out, err = run_cli('compare', '--data', TABLE1_PATH)
        self.assertEqual(status, 0)
        rows = json.loads(out)['comparison']
        self.assertEqual([row['link'] for row in rows], ['logit', 'identity', 'probit'])
        self.assertEqual(rows[1]['adjusted']['method'], 'coefficient')
        self.assertAlmostEqual(rows[2]['adjusted']['estimate'], -0.006, delta=5e-4)
        self.assertIn('-0.028', err)

    def test_chosen_links(self):
        """Test a custom link list."""
        status, out, _ = run_cli('compare', '--data', TABLE1_PATH, '--links', 'cloglog', 'log')
        self.assertEqual(status, 0)
        self.assertEqual([row['link'] for row in json.loads(out)['comparison']], ['cloglog', 'log'])


class TestGridAndPlotCommands(CLITestCase):
    """Test `grid` and `plot` end to end."""

    OUTPUTS = ['records.csv', 'ba_identity.csv', 'ba_log.csv', 'ba_logit.csv', 'pattern_report.json']

    @classmethod
    def setUpClass(cls):
        cls.shared_dir = tempfile.mkdtemp()
        cls.first = os.path.join(cls.shared_dir, 'first')
        cls.second = os.path.join(cls.shared_dir, 'second')
        settings = os.path.join(cls.shared_dir, 'settings.json')
        with open(settings, 'w', encoding='utf-8') as f:
            json.dump({'threads': 2}, f)
        with mock.patch.dict(os.environ):
            os.environ.pop('CANONLINK_THREADS', None)
            cls.first_status = run_cli('grid', '--out', cls.first)[0]
            cls.second_status = run_cli('--settings', settings, 'grid', '--out', cls.second)[0]

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.shared_dir, ignore_errors=True)

    def test_exit_status(self):
        """Test both runs pass the extremeness check."""
        self.assertEqual(self.first_status, 0)
        self.assertEqual(self.second_status, 0)

    def test_outputs_written(self):
        """Test every output file exists."""
        self.assertEqual(sorted(os.listdir(self.first)), sorted(self.OUTPUTS))

    def test_record_rows(self):
        """Test 1296 tables x 3 links."""
        frame = pd.read_csv(os.path.join(self.first, 'records.csv'))
        self.assertEqual(len(frame), 1296 * 3)
        self.assertEqual(list(frame.columns),
                         ['e00', 'e01', 'e10', 'e11', 'link', 'unadjusted', 'adjusted', 'converged'])
        ba = pd.read_csv(os.path.join(self.first, 'ba_logit.csv'))
        self.assertEqual(list(ba.columns), ['mean', 'diff'])
        self.assertEqual(len(ba), 1296)

    def test_pattern_report(self):
        """Test the report shows the identity/log null band and no logit violations."""
        with open(os.path.join(self.first, 'pattern_report.json'), encoding='utf-8') as f:
            report = json.load(f)
        self.assertEqual(report['records'], 1296)
        self.assertEqual(report['logit_extremeness_violations'], 0)
        self.assertEqual(report['logit_null_preservation_violations'], 0)
        self.assertEqual(sorted(report['sign_flips']), ['identity', 'log'])
        self.assertGreater(report['null_band']['identity'], 0)
        self.assertGreater(report['null_band']['log'], 0)
        self.assertEqual(report['null_band']['logit'], 0)
        self.assertTrue(report['passed'])

    def test_rerun_identical(self):
        """Test a second run with two workers writes identical bytes."""
        for name in self.OUTPUTS:
            self.assertEqual(read_bytes(os.path.join(self.first, name)),
                             read_bytes(os.path.join(self.second, name)), name)

    def test_plot(self):
        """Test the plot has three panels and is byte-identical across runs."""
        records = os.path.join(self.first, 'records.csv')
        first_svg = os.path.join(self.temp_dir, 'first.svg')
        second_svg = os.path.join(self.temp_dir, 'second.svg')
        self.assertEqual(run_cli('plot', '--records', records, '--out', first_svg)[0], 0)
        self.assertEqual(run_cli('plot', '--records', records, '--out', second_svg)[0], 0)
        self.assertEqual(read_bytes(first_svg), read_bytes(second_svg))

        root = ET.parse(first_svg).getroot()
        ids = [g.get('id') for g in root.iter(f'{SVG_NS}g') if (g.get('id') or '').startswith('panel-')]
        self.assertEqual(ids, ['panel-logit', 'panel-identity', 'panel-log'])

    def test_plot_empty_records(self):
        """Test a header-only records file exits 1 with "no points"."""
        path = os.path.join(self.temp_dir, 'empty.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('e00,e01,e10,e11,link,unadjusted,adjusted,converged\n')
        status, _, err = run_cli('plot', '--records', path, '--out', os.path.join(self.temp_dir, 'x.svg'))
        self.assertEqual(status, 1)
        self.assertIn('no points', err)

    def test_plot_malformed_records(self):
        """Test a malformed records file exits 1."""
        path = os.path.join(self.temp_dir, 'bad.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('a,b\n1,2\n')
        status, _, _ = run_cli('plot', '--records', path, '--out', os.path.join(self.temp_dir, 'x.svg'))
        self.assertEqual(status, 1)

    def test_grid_unwritable(self):
        """Test an output path under a regular file exits 1."""
        blocker = os.path.join(self.temp_dir, 'file')
        with open(blocker, 'w', encoding='utf-8') as f:
            f.write('x')
        status, _, _ = run_cli('grid', '--out', os.path.join(blocker, 'out'))
        self.assertEqual(status, 1)

    def test_grid_read_only_dir(self):
        """Test an existing read-only directory exits 1 before any table is fitted."""
        out = os.path.join(self.temp_dir, 'readonly')
        os.makedirs(out)
        with mock.patch('app.os.access', return_value=False), \
                mock.patch('app.run_grid') as grid:
            status, _, err = run_cli('grid', '--out', out)
        self.assertEqual(status, 1)
        self.assertIn('not writable', err)
        grid.assert_not_called()


class TestStorage(unittest.TestCase):
    """Test documents, record files and settings."""

    def setUp(self):
        """Set up test environment."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test environment."""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_document_round_trip(self):
        """Test a fit and its effect survive serialisation."""
        spec = ModelSpec.create('probit', True)
        fit = fit_glm(spec, table1())
        effect = standardized_risk_difference(fit, spec, table1())
        text = dumps(build_document(fit, [effect]))
        restored_fit, restored_effects = read_document(json.loads(text))
        self.assertEqual(restored_fit.spec, fit.spec)
        self.assertEqual(restored_fit.coefficients.tolist(), fit.coefficients.tolist())
        self.assertEqual(restored_fit.covariance.tolist(), fit.covariance.tolist())
        self.assertEqual((restored_fit.converged, restored_fit.iterations, restored_fit.n_obs),
                         (fit.converged, fit.iterations, fit.n_obs))
        self.assertEqual(restored_fit.log_likelihood, fit.log_likelihood)
        self.assertEqual(restored_effects, [effect])

    def test_records_round_trip(self):
        """Test grid records survive the CSV file, failures included."""
        records = [
            GridRecord(10, 12, 14, 16, (('logit', LinkEstimates(0.1 / 3, 2 / 30)),
                                        ('log', LinkEstimates(None, None)))),
            GridRecord(20, 20, 20, 20, (('logit', LinkEstimates(-1e-17, 0.0)),
                                        ('log', LinkEstimates(0.5, -0.25)))),
        ]
        path = os.path.join(self.temp_dir, 'records.csv')
        write_records_csv(records, path)
        self.assertEqual(read_records_csv(path), records)

    def test_records_bad_header(self):
        """Test a wrong header is rejected."""
        path = os.path.join(self.temp_dir, 'bad.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('e00,e01\n1,2\n')
        with self.assertRaises(RecordsFormatError):
            read_records_csv(path)

    def test_settings_defaults(self):
        """Test the shipped settings file matches the built-in defaults."""
        settings = load_settings(environ={})
        self.assertEqual(settings['grid']['trials'], 200)
        self.assertEqual(settings['solver']['max_halvings'], 20)
        self.assertEqual(settings['bootstrap']['seed'], 20210714)
        self.assertEqual(settings['threads'], 1)

    def test_settings_fallback(self):
        """Test an unreadable settings file falls back to defaults."""
        path = os.path.join(self.temp_dir, 'settings.json')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('{not json')
        with self.assertLogs('storage.settings', level='WARNING'):
            settings = load_settings(path, environ={})
        self.assertEqual(settings['threads'], 1)

    def test_thread_override(self):
        """Test CANONLINK_THREADS overrides the file."""
        self.assertEqual(load_settings(environ={'CANONLINK_THREADS': '4'})['threads'], 4)
        for value in ('0', '-3', 'many'):
            with self.assertRaises(SettingsError):
                load_settings(environ={'CANONLINK_THREADS': value})

if __name__ == '__main__':
    unittest.main()
