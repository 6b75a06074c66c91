"""
Tests pour l'exportation des résultats
"""

import json
import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from src.evaluation import CheckResult
from src.export_results import (
    export_results,
    frame_to_csv,
    generate_summary_report,
    normalize,
    round_significant,
    to_json,
)


class TestFormatting(unittest.TestCase):

    def test_round_significant(self):
        self.assertEqual(round_significant(0.1 + 0.2), 0.3)
        self.assertEqual(round_significant(0.0), 0.0)
        self.assertEqual(round_significant(123456.7891234567, 6), 123457.0)

    def test_normalize_numpy(self):
        payload = {'a': np.float64(0.5), 'b': np.int64(3), 'c': np.array([1.0, 2.0]),
                   'd': np.bool_(True), 'e': 1 + 2j, 'f': float('nan'), 'g': None}
        out = normalize(payload)
        self.assertEqual(out, {'a': 0.5, 'b': 3, 'c': [1.0, 2.0], 'd': True,
                               'e': [1.0, 2.0], 'f': None, 'g': None})
        self.assertIsInstance(out['b'], int)

    def test_schema_first(self):
        text = to_json({'value': 1.0})
        self.assertTrue(text.startswith('{\n  "schema": 1'))
        self.assertEqual(json.loads(text), {'schema': 1, 'value': 1.0})

    def test_csv(self):
        df = pd.DataFrame({'n': [1, 2], 'x': [1.0 / 3.0, None]})
        self.assertEqual(frame_to_csv(df), "n,x\n1,0.333333333333\n2,\n")


class TestExport(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_export_results(self):
        df = pd.DataFrame({'n': [0, 1], 'capacity_lower': [1.0, 0.9]})
        paths = export_results(df, 'capacity', self.temp_dir)
        self.assertTrue(Path(paths['csv']).exists())
        document = json.loads(Path(paths['json']).read_text(encoding='utf-8'))
        self.assertEqual(document['rows'][1], {'n': 1, 'capacity_lower': 0.9})

    def test_summary_report(self):
        checks = [CheckResult('a', True, 0.5, 'ok'), CheckResult('b', False, detail='échec')]
        output = Path(self.temp_dir) / 'report.txt'
        text = generate_summary_report(checks, str(output))
        self.assertIn('[PASS] a = 0.5  ok', text)
        self.assertIn('[FAIL] b  échec', text)
        self.assertIn('1/2 vérifications réussies', text)
        self.assertEqual(output.read_text(encoding='utf-8'), text)


if __name__ == '__main__':
    unittest.main()
