"""
Tests pour l'interface en ligne de commande
"""

import io
import json
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

from src.cli import main
from src.evaluation import CheckResult


def run_cli(*argv):
    """Exécute la CLI et renvoie (code de sortie, sortie standard)"""
    out = io.StringIO()
    with redirect_stdout(out), redirect_stderr(io.StringIO()):
        code = main(list(argv))
    return code, out.getvalue()


class TestCli(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.ad_file = str(Path(self.temp_dir) / 'ad.json')

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_model_then_validate(self):
        code, _ = run_cli('model', 'ad', '--gamma', '0.3', '-o', self.ad_file)
        self.assertEqual(code, 0)
        document = json.loads(Path(self.ad_file).read_text(encoding='utf-8'))
        self.assertEqual(document['schema'], 1)
        self.assertEqual(document['dim_in'], 2)

        code, out = run_cli('validate', self.ad_file)
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)['passed'])

    def test_validate_failure(self):
        run_cli('model', 'ad', '--gamma', '0.3', '-o', self.ad_file)
        document = json.loads(Path(self.ad_file).read_text(encoding='utf-8'))
        document['kraus'] = document['kraus'][:1]
        Path(self.ad_file).write_text(json.dumps(document), encoding='utf-8')
        code, out = run_cli('validate', self.ad_file)
        self.assertEqual(code, 2)
        self.assertFalse(json.loads(out)['passed'])

    def test_exit_codes(self):
        self.assertEqual(run_cli('validate', 'absent.json')[0], 1)
        self.assertEqual(run_cli('model', 'ad')[0], 3)
        self.assertEqual(run_cli('capacity', '--epsilon', '2')[0], 3)
        self.assertEqual(run_cli('inconnu')[0], 1)

    def test_unexpected_error_exit_code(self):
        """Une erreur hors du domaine donne le code 3, pas une trace brute"""
        with mock.patch('src.cli.run_demo_checks', side_effect=RuntimeError("panne")):
            self.assertEqual(run_cli('paper-demo')[0], 3)

    def test_paper_demo_failure_exit_code(self):
        checks = [CheckResult(name='ok', passed=True), CheckResult(name='ko', passed=False, detail='x')]
        with mock.patch('src.cli.run_demo_checks', return_value=checks):
            code, out = run_cli('paper-demo')
        self.assertEqual(code, 4)
        self.assertIn('ko', out)

    def test_spectral(self):
        run_cli('model', 'ad', '--gamma', '0.19', '-o', self.ad_file)
        code, out = run_cli('spectral', self.ad_file, '--nmax', '4')
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertAlmostEqual(document['mu'], 0.9)
        self.assertEqual([r['n'] for r in document['rows']], [1, 2, 3, 4])

    def test_spectral_identity_is_domain_error(self):
        run_cli('model', 'identity', '-o', self.ad_file)
        self.assertEqual(run_cli('spectral', self.ad_file)[0], 3)

    def test_capacity(self):
        code, out = run_cli('capacity', '--epsilon', '0.0005', '--nmax', '44')
        self.assertEqual(code, 0)
        lines = out.strip().split('\n')
        self.assertEqual(lines[0], 'n,epsilon,capacity_lower,distance_upper,feasible')
        self.assertEqual(len(lines), 46)
        self.assertTrue(lines[-1].startswith('44,0.0005,0.8027'))

    def test_find_horizon(self):
        code, out = run_cli('capacity', '--epsilon', '0.0005', '--find-horizon')
        self.assertEqual(code, 0)
        self.assertGreater(int(out.strip()), 44)

    def test_pureloss(self):
        code, out = run_cli('pureloss', '--eta', '0.9', '--cutoff', '4', '--k', '1')
        self.assertEqual(code, 0)
        self.assertIn('0.0523', out)
        code, out = run_cli('pureloss', '--eta', '0.9', '--cutoff', '4', '--k', '1', '--format', 'json')
        self.assertAlmostEqual(json.loads(out)['exact_norm'], 0.0523, places=10)

    def test_pureloss_no_loss(self):
        code, out = run_cli('pureloss', '--eta', '1', '--cutoff', '4', '--k', '0', '--format', 'json')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['exact_norm'], 0.0)

    def test_errbound_cly(self):
        code, out = run_cli('errbound', '--model', 'bosonic-ad', '--gamma', '0.01', '--cly')
        self.assertEqual(code, 0)
        header, row = out.strip().split('\n')
        values = dict(zip(header.split(','), row.split(',')))
        self.assertEqual(values['bound_49g2'], '0.0049')

    def test_errbound_model(self):
        code, out = run_cli('errbound', '--model', 'ad', '--gamma', '0.3', '--k', '1', '--format', 'json')
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(out)['rows'][0]['exact_norm'], 0.3)

    def test_node_trivial(self):
        code, out = run_cli('node', '--code', 'trivial', '--noise', 'ad', '--gamma', '0.2')
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(document['epsilon_source'], 'diamond')
        self.assertTrue(document['knill_laflamme']['satisfied'])

    def test_sweep(self):
        code, out = run_cli('sweep', '--model', 'bosonic-ad', '--params', '0.01', '0.02',
                            '--nmin', '0', '--nmax', '3')
        self.assertEqual(code, 0)
        lines = out.strip().split('\n')
        self.assertEqual(len(lines), 9)
        self.assertTrue(lines[0].startswith('model,param,n,epsilon'))

    def test_deterministic_output(self):
        args = ('sweep', '--model', 'ad', '--param-range', '0.1', '0.3', '0.1',
                '--nmax', '5', '--threads', '2')
        self.assertEqual(run_cli(*args), run_cli(*args))


if __name__ == '__main__':
    unittest.main()
