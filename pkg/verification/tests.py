# verification/tests.py

import csv
import io
import json
import math
import tempfile
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from .runner import EXIT_CONFIG, EXIT_OK, EXIT_TOLERANCE, plain, run
from .serializers import RunConfigSerializer, parse_grid


def csv_rows(content):
    lines = [line for line in content.splitlines() if not line.startswith('#')]
    reader = csv.reader(io.StringIO('\n'.join(lines)))
    header = next(reader)
    return header, [[float(v) for v in row] for row in reader]


class RunConfigTests(SimpleTestCase):

    def validated(self, **data):
        serializer = RunConfigSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        return serializer.validated_data

    def test_defaults(self):
        cfg = self.validated(command='params')
        self.assertEqual(cfg['regime'], 'II')
        self.assertEqual(cfg['tau_angle'], 60.0)
        self.assertEqual(cfg['n'], 2)
        self.assertEqual(cfg['format'], 'json')
        self.assertEqual(cfg['nx'], settings.MODDOUBLE_SETTINGS['QUAD_NX'])
        self.assertEqual(cfg['nodes'], settings.MODDOUBLE_SETTINGS['CONTOUR_NODES'])

    def test_continuous_defaults_to_regime_one(self):
        cfg = self.validated(command='continuous-check')
        self.assertEqual(cfg['regime'], 'I')
        self.assertAlmostEqual(cfg['params'].tau, 4, places=14)

    def test_complex_tau_string(self):
        cfg = self.validated(command='params', tau='1j')
        self.assertAlmostEqual(cfg['params'].omega_pp.imag, 2 ** -0.5, places=14)

    def test_middle_domain_default(self):
        cfg = self.validated(command='herm-check', n=5)
        self.assertEqual(cfg['domain'], 3)

    def test_kernel_check_accepts_csv(self):
        self.assertEqual(self.validated(command='kernel-check', format='csv')['format'], 'csv')
        self.assertEqual(self.validated(command='kernel-check')['format'], 'json')

    def test_generic_spin_selects_gamma_weight(self):
        cfg = self.validated(command='kernel-check', spin_a='1.5')
        self.assertEqual(cfg['weight'], 'gamma')
        self.assertIsNone(cfg['n'])

    def test_rejections(self):
        cases = [
            {'command': 'nope'},
            {'command': 'params', 'tau': '1j', 'tau_angle': 60},
            {'command': 'params', 'tau': '2', 'regime': 'II'},
            {'command': 'params', 'tau_angle': 0},
            {'command': 'params', 'n': 2, 'spin_a': '1.5'},
            {'command': 'kernel-check', 'spin_a': '1.5', 'weight': 'product'},
            {'command': 'herm-check', 'n': 2, 'domain': 3},
            {'command': 'gram', 'nx': 4},
            {'command': 'params', 'format': 'csv'},
            {'command': 'phi-eval', 'grid': 'imag:3:-3:10'},
            {'command': 'phi-eval', 'grid': 'diag:0:1:10'},
            {'command': 'phi-eval', 'format': 'json'},
            {'command': 'gamma-eval', 'format': 'json'},
            {'command': 'gamma-eval', 'grid': 'y:0:1:5'},
        ]
        for data in cases:
            self.assertFalse(RunConfigSerializer(data=data).is_valid(), data)

    def test_parse_grid(self):
        self.assertEqual(parse_grid('imag:-3:3:1000'), ('imag', -3.0, 3.0, 1000))
        self.assertEqual(parse_grid('y:0:2:5'), ('y', 0.0, 2.0, 5))
        with self.assertRaises(ValueError):
            parse_grid('imag:0:1')


class PlainTests(SimpleTestCase):

    def test_conversions(self):
        self.assertEqual(plain({'z': 1 + 2j, 'x': float('inf'), 't': (1, 2)}), {'z': [1.0, 2.0], 'x': None, 't': [1, 2]})


class RunTests(SimpleTestCase):

    def test_params_report(self):
        result = run({'command': 'params', 'tau': '1j', 'n': 1})
        self.assertEqual(result.exit_code, EXIT_OK)
        report = json.loads(result.content)
        self.assertEqual(report['check'], 'params')
        self.assertTrue(report['converged'])
        self.assertEqual(report['params']['regime'], 'II')
        self.assertEqual(report['config']['tau'], [0.0, 1.0])
        re_c, im_c = report['details']['central_charge']
        self.assertAlmostEqual(re_c, 13.0, places=12)
        self.assertAlmostEqual(im_c, 0.0, places=12)

    def test_output_is_reproducible(self):
        first = run({'command': 'params', 'tau_angle': 72})
        second = run({'command': 'params', 'tau_angle': 72})
        self.assertEqual(first.content, second.content)

    def test_symbolic_check(self):
        result = run({'command': 'symbolic-check'})
        self.assertEqual(result.exit_code, EXIT_OK)
        report = json.loads(result.content)
        self.assertEqual(report['details']['summary'], 'residuals: exact zero')

    def test_zeros_on_level_three(self):
        result = run({'command': 'zeros', 'tau_angle': 60, 'level': 3})
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(json.loads(result.content)['details']['count'], 3)

    def test_zeros_record_each_winding(self):
        result = run({'command': 'zeros', 'tau_angle': 90, 'level': 2})
        self.assertEqual(result.exit_code, EXIT_OK)
        report = json.loads(result.content)
        self.assertEqual([w['winding'] for w in report['details']['windings']], [1, 1])
        names = [r['name'] for r in report['residuals']]
        self.assertEqual(names, ['count', 'winding p=0', 'winding p=1'])
        self.assertTrue(all(r['residual'] == 0 for r in report['residuals']))

    def test_zeros_need_regime_two(self):
        result = run({'command': 'zeros', 'tau': '2', 'regime': 'I'})
        self.assertEqual(result.exit_code, EXIT_CONFIG)

    def test_phi_eval_grid(self):
        result = run({'command': 'phi-eval', 'n': 2, 'grid': 'imag:-3:3:1000'})
        self.assertEqual(result.exit_code, EXIT_OK)
        header, rows = csv_rows(result.content)
        self.assertEqual(header, ['re_t', 'im_t', 're_phi', 'im_phi'])
        self.assertEqual(len(rows), 1000)
        self.assertGreaterEqual(min(r[2] for r in rows), -1e-12)
        self.assertTrue(result.content.startswith('# config: '))

    def test_phi_profile_grid(self):
        result = run({'command': 'phi-eval', 'n': 2, 'grid': 'y:-1.5:1.5:61'})
        self.assertEqual(result.exit_code, EXIT_OK, result.content)
        header, rows = csv_rows(result.content)
        self.assertEqual(header, ['y', 're_phi', 'im_phi'])
        self.assertEqual(len(rows), 61)
        self.assertGreaterEqual(min(r[1] for r in rows), -1e-12)

    def test_json_tabulation_is_a_config_error(self):
        result = run({'command': 'gamma-eval', 'format': 'json'})
        self.assertEqual(result.exit_code, EXIT_CONFIG)

    def test_kernel_check_passes(self):
        result = run({'command': 'kernel-check', 'tau': '1j', 'n': 2})
        self.assertEqual(result.exit_code, EXIT_OK, result.content)

    def test_kernel_check_residual_grid(self):
        result = run({'command': 'kernel-check', 'tau': '1j', 'n': 2, 'format': 'csv'})
        self.assertEqual(result.exit_code, EXIT_OK, result.content)
        lines = [line for line in result.content.splitlines() if not line.startswith('#')]
        rows = list(csv.reader(io.StringIO('\n'.join(lines))))
        self.assertEqual(rows[0], ['identity', 're_w', 'im_w', 're_z', 'im_z', 'residual'])
        self.assertEqual(len(rows) - 1, 4 * 400)
        self.assertEqual({row[0] for row in rows[1:]}, {'k', 'e', 'k_dual', 'e_dual'})
        residuals = [float(row[5]) for row in rows[1:]]
        self.assertLess(max(v for v in residuals if not math.isnan(v)), 1e-8)

    def test_wrong_convention_violates_tolerance(self):
        result = run({'command': 'kernel-check', 'tau': '1j', 'n': 2, 'convention': 'Sec2'})
        self.assertEqual(result.exit_code, EXIT_TOLERANCE)
        report = json.loads(result.content)
        failed = {r['name'] for r in report['residuals'] if not r['passed']}
        self.assertIn('e_identity', failed)

    def test_herm_check_regime_one_is_a_config_error(self):
        result = run({'command': 'herm-check', 'tau': '4', 'regime': 'I', 'n': 3})
        self.assertEqual(result.exit_code, EXIT_CONFIG)

    def test_continuous_check(self):
        result = run({'command': 'continuous-check', 'seed': 3})
        self.assertEqual(result.exit_code, EXIT_OK, result.content)
        self.assertTrue(json.loads(result.content)['details']['u_positive'])

    def test_writes_under_output_dir(self):
        with tempfile.TemporaryDirectory() as tmp:
            overridden = dict(settings.MODDOUBLE_SETTINGS, OUTPUT_DIR=tmp)
            with override_settings(MODDOUBLE_SETTINGS=overridden):
                result = run({'command': 'params', 'out': 'reports/params.json'})
            target = Path(tmp) / 'reports' / 'params.json'
            self.assertEqual(result.path, str(target))
            self.assertEqual(target.read_text(), result.content)

    def test_unwritable_output(self):
        with tempfile.NamedTemporaryFile() as blocker:
            result = run({'command': 'params', 'out': str(Path(blocker.name) / 'report.json')})
        self.assertEqual(result.exit_code, EXIT_CONFIG)


class VerifyCommandTests(SimpleTestCase):

    def test_prints_report(self):
        out = io.StringIO()
        call_command('verify', 'params', tau_angle=90.0, stdout=out, stderr=io.StringIO())
        self.assertEqual(json.loads(out.getvalue())['check'], 'params')

    def test_configuration_error_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('verify', 'params', tau='3', regime='II', stdout=io.StringIO(), stderr=io.StringIO())
        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)

    def test_tolerance_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                'verify', 'kernel-check', tau='1j', n=2, convention='Sec2',
                stdout=io.StringIO(), stderr=io.StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, EXIT_TOLERANCE)
