from django.test import SimpleTestCase

from core.sampling import MonteCarloEstimate
from diagnostics.reports import DiagnosticsReport


class DiagnosticsReportTests(SimpleTestCase):

    def test_entries(self):
        report = DiagnosticsReport(channel='cz')
        report.add_analytic('e_L', 2 / 9)
        report.add_estimate('e_C', MonteCarloEstimate(mean=0.61, stderr=0.002, n=1000, seed=3, stream_id=1))
        self.assertEqual(report.get('e_L').value, 2 / 9)
        self.assertIsNone(report.get('e_L').stderr)
        self.assertEqual(report.get('e_C').n, 1000)
        with self.assertRaises(KeyError):
            report.get('e_N')

    def test_as_dict(self):
        report = DiagnosticsReport(channel='cz', metadata={'seed': 3})
        report.add_analytic('e_L', 0.25).add_estimate('e_C', MonteCarloEstimate(mean=0.5, stderr=0.01, n=100, seed=3))
        data = report.as_dict()
        self.assertEqual(data['channel'], 'cz')
        self.assertEqual(data['diagnostics'][0], {'name': 'e_L', 'value': 0.25})
        self.assertEqual(data['diagnostics'][1], {'name': 'e_C', 'value': 0.5, 'stderr': 0.01, 'n': 100, 'seed': 3})
        self.assertEqual(data['metadata'], {'seed': 3})
