import csv
import io
import json
import math
import os
import tempfile

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.exceptions import ChannelValidationError
from core.sampling import SampleStream
from diagnostics.providers.channels import KrausChannel, controlled_phase, random_stinespring_channel
from diagnostics.serializers import SweepTableSerializer, ValidationReportSerializer, channel_to_data
from diagnostics.services.validation_service import ValidationReport, ValidationService, _StreamPool


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write_json(self, name, data):
        path = self.path(name)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        return path

    def run_command(self, *args):
        out, err = io.StringIO(), io.StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue(), err.getvalue()

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception

    def read_csv(self, path):
        with open(path, encoding='utf-8', newline='') as f:
            return list(csv.reader(f))


class ExperimentCommandTests(CommandTestCase):

    def test_fidelity_csv(self):
        out = self.path('cp.csv')
        self.run_command('fidelity', '--channel', 'controlled-phase', '--param', '0:pi:3',
                         '--analytic-only', '--out', out)
        rows = self.read_csv(out)
        self.assertEqual(rows[0], ['param', 'f_avg', 'f_prod', 'chi_F', 'f_maxent'])
        self.assertEqual(len(rows), 4)
        self.assertAlmostEqual(float(rows[3][1]), 0.4, places=12)

    def test_json_to_stdout(self):
        stdout, stderr = self.run_command('bounds', '--channel', 'cz-correlated-dephasing', '--param', '0:1:2',
                                          '--analytic-only', '--format', 'json', '--seed', '3')
        data = json.loads(stdout)
        self.assertTrue(SweepTableSerializer(data=data).is_valid())
        self.assertEqual(data['metadata']['seed'], 3)
        self.assertAlmostEqual(data['rows'][1][2], 2 / 3, places=10)
        self.assertIn('✅', stderr)

    def test_repeated_runs_are_byte_identical(self):
        args = ('entpower', '--channel', 'cz-phase-damping', '--option', 'g=1.5', '--param', '0:3:2',
                '--samples', '300', '--seed', '11')
        first, second = self.path('a.csv'), self.path('b.csv')
        self.run_command(*args, '--out', first)
        self.run_command(*args, '--out', second)
        with open(first, 'rb') as a, open(second, 'rb') as b:
            self.assertEqual(a.read(), b.read())

    def test_parallel_run_matches_serial(self):
        args = ('variation', '--channel', 'phase-damping', '--param', '0:2:2', '--theta', '0:pi/4:2',
                '--samples', '200', '--seed', '5')
        serial, parallel = self.path('s.csv'), self.path('p.csv')
        self.run_command(*args, '--out', serial)
        self.run_command(*args, '--workers', '2', '--out', parallel)
        self.assertEqual(self.read_csv(serial), self.read_csv(parallel))
        self.assertEqual(self.read_csv(serial)[0][:3], ['t', 'theta', 'mu'])

    def test_target_unitary(self):
        out = self.path('rel.csv')
        self.run_command('fidelity', '--channel', 'controlled-phase', '--param', 'pi', '--target', 'cz',
                         '--analytic-only', '--out', out)
        self.assertAlmostEqual(float(self.read_csv(out)[1][1]), 1.0, places=12)

    def test_usage_errors(self):
        self.assertExitCode(2, 'fidelity', '--channel', 'teleporter')
        self.assertExitCode(2, 'fidelity', '--channel', 'controlled-phase', '--param', '1:0:3')
        self.assertExitCode(2, 'fidelity', '--channel', 'controlled-phase', '--samples', '10')
        self.assertExitCode(2, 'fidelity', '--channel', 'controlled-phase', '--format', 'xml')
        self.assertExitCode(2, 'fidelity', '--channel', 'phase-damping', '--option', 'Gamma')
        self.assertExitCode(2, 'fidelity', '--channel', 'phase-damping', '--option', 'g=1')
        self.assertExitCode(2, 'fidelity', '--channel', 'controlled-phase', '--target', 'toffoli')
        self.assertExitCode(2, 'variation', '--channel', 'phase-damping', '--theta', '0:1:3')
        self.assertExitCode(2, 'fidelity', '--channel', 'correlated-dephasing', '--param', '0:2:3',
                            '--analytic-only')

    def test_malformed_channel_file(self):
        path = self.path('broken.json')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('{"dA": 2,')
        self.assertExitCode(2, 'fidelity', '--channel', path)
        wrong_shape = self.write_json('shape.json', {'dA': 2, 'dB': 2, 'kraus': [[[1, 0]]]})
        self.assertExitCode(2, 'bounds', '--channel', wrong_shape)

    def test_non_cptp_channel_file(self):
        path = self.write_json('half.json', channel_to_data(KrausChannel(np.eye(4) / 2, 2, 2)))
        self.assertExitCode(3, 'fidelity', '--channel', path, '--analytic-only')
        self.assertExitCode(3, 'entpower', '--channel', path)

    def test_qutrit_channel_file(self):
        ch = random_stinespring_channel(3, 3, SampleStream(seed=6))
        path = self.write_json('qutrits.json', channel_to_data(ch))
        out = self.path('q.csv')
        self.run_command('fidelity', '--channel', path, '--analytic-only', '--out', out)
        self.assertEqual(len(self.read_csv(out)), 2)
        self.assertExitCode(2, 'entpower', '--channel', path)


class ChannelCommandTests(CommandTestCase):

    def test_list(self):
        stdout, _ = self.run_command('channel', '--list')
        self.assertIn('controlled-phase', stdout)
        self.assertIn('cz-phase-damping', stdout)

    def test_export_then_sweep(self):
        exported = self.path('cp.json')
        self.run_command('channel', 'export', '--channel', 'controlled-phase', '--value', 'pi/2', '--out', exported)
        out = self.path('cp.csv')
        self.run_command('fidelity', '--channel', exported, '--analytic-only', '--out', out)
        rows = self.read_csv(out)
        self.assertEqual(len(rows), 2)
        self.assertAlmostEqual(float(rows[1][1]), (14 + 6 * math.cos(math.pi / 2)) / 20, places=12)

    def test_inspect(self):
        stdout, _ = self.run_command('channel', 'inspect', '--channel', 'cz-correlated-dephasing', '--value', '0.5')
        data = json.loads(stdout)
        self.assertTrue(data['validation']['passed'])
        entries = {entry['name']: entry for entry in data['entangling_power']['diagnostics']}
        self.assertAlmostEqual(entries['e_L']['value'], 1 / 3 - 0.25 / 9, places=12)
        self.assertNotIn('e_C', entries)
        self.assertAlmostEqual(data['reference']['e_C'], 0.5 * math.pi ** 2 / 16, places=12)
        self.assertEqual(len(data['fidelity']['orbit_curve']), 9)

    def test_inspect_with_monte_carlo(self):
        stdout, _ = self.run_command('channel', 'inspect', '--channel', 'cz-correlated-dephasing', '--value', '0.5',
                                     '--samples', '20000', '--seed', '9')
        entries = {entry['name']: entry for entry in json.loads(stdout)['entangling_power']['diagnostics']}
        e_c = entries['e_C']
        self.assertEqual((e_c['n'], e_c['seed']), (20000, 9))
        self.assertLessEqual(abs(e_c['value'] - 0.5 * math.pi ** 2 / 16), 4 * e_c['stderr'] + 1e-12)
        self.assertLessEqual(entries['e_N']['value'], e_c['value'] / 2 + 1e-12)
        self.assertExitCode(2, 'channel', 'inspect', '--channel', 'controlled-phase', '--samples', '10')

    def test_inspect_non_cptp_file(self):
        path = self.write_json('half.json', channel_to_data(KrausChannel(np.eye(4) / 2, 2, 2)))
        with self.assertRaises(CommandError) as ctx:
            self.run_command('channel', 'inspect', '--channel', path, '--out', self.path('inspect.json'))
        self.assertEqual(ctx.exception.returncode, 3)
        with open(self.path('inspect.json'), encoding='utf-8') as f:
            self.assertFalse(json.load(f)['validation']['passed'])

    def test_bad_value(self):
        self.assertExitCode(2, 'channel', 'inspect', '--channel', 'controlled-phase', '--value', 'tau')


class ValidateCommandTests(CommandTestCase):

    def test_exact_groups_pass(self):
        out = self.path('report.json')
        self.run_command('validate', '--quick', '--group', 'linalg', '--group', 'channels',
                         '--samples', '1000', '--seed', '1', '--out', out)
        with open(out, encoding='utf-8') as f:
            data = json.load(f)
        self.assertTrue(ValidationReportSerializer(data=data).is_valid())
        self.assertTrue(data['passed'])
        self.assertEqual({check['group'] for check in data['checks']}, {'linalg', 'channels'})
        self.assertTrue(data['metadata']['quick'])

    def test_non_cptp_channel(self):
        path = self.write_json('half.json', channel_to_data(KrausChannel(np.eye(4) / 2, 2, 2)))
        out = self.path('report.json')
        error = self.assertExitCode(3, 'validate', '--channel', path, '--samples', '1000', '--out', out)
        self.assertIn('1.0', str(error))
        with open(out, encoding='utf-8') as f:
            data = json.load(f)
        self.assertFalse(data['passed'])
        self.assertAlmostEqual(data['checks'][0]['value'], 1.0)

    def test_invalid_configuration(self):
        self.assertExitCode(2, 'validate', '--samples', '5')

    def test_unknown_group(self):
        out = self.path('report.json')
        error = self.assertExitCode(2, 'validate', '--quick', '--group', 'linlag', '--out', out)
        self.assertIn('linlag', str(error))
        self.assertIn('linalg', str(error))
        self.assertFalse(os.path.exists(out))
        self.assertExitCode(2, 'validate', '--quick', '--group', 'linalg', '--group', 'fidelty')


class ValidationServiceTests(SimpleTestCase):

    def test_channel_checks(self):
        service = ValidationService(seed=4, samples=2_000, quick=True)
        report = service.run_channel(controlled_phase(1.0), source='cp')
        names = [check.name for check in report.checks]
        self.assertEqual(names[0], 'completeness')
        self.assertTrue(report.checks[0].passed)
        self.assertIn('e_L_mc', names)
        self.assertEqual(report.metadata['channel'], 'cp')

    def test_non_cptp_channel_carries_report(self):
        service = ValidationService(seed=4, samples=2_000, quick=True)
        with self.assertRaises(ChannelValidationError) as ctx:
            service.run_channel(KrausChannel(np.eye(4) / 2, 2, 2))
        self.assertFalse(ctx.exception.report.passed)
        self.assertEqual(len(ctx.exception.report.checks), 1)

    def test_report_is_reproducible(self):
        first = ValidationService(seed=8, samples=2_000, quick=True).run(groups=['sampling']).as_dict()
        second = ValidationService(seed=8, samples=2_000, quick=True).run(groups=['sampling']).as_dict()
        self.assertEqual(first, second)

    def test_unknown_group_is_rejected(self):
        service = ValidationService(seed=8, samples=2_000, quick=True)
        with self.assertRaises(ValueError):
            service.run(groups=['linlag'])

    def test_empty_report_does_not_pass(self):
        self.assertFalse(ValidationReport(checks=[], metadata={}).passed)

    def test_separable_families_follow_registry(self):
        service = ValidationService(seed=8, samples=2_000, quick=True)
        expected = [name for name, provider in service.manager.providers.items() if provider.separable]
        self.assertEqual(service.separable_families(), expected)
        self.assertIn('global-depolarizing', expected)
        self.assertIn('identity', expected)
        self.assertNotIn('controlled-phase', expected)

    def test_separable_checks_cover_every_separable_family(self):
        service = ValidationService(seed=8, samples=2_000, quick=True)
        names = {check.name for check in service.check_entangling_power(_StreamPool(SampleStream(seed=8)))}
        for family in service.separable_families():
            self.assertIn(f"separable_concurrence_{family}", names)
            self.assertIn(f"separable_e_L_{family}", names)

    def test_property_checks(self):
        service = ValidationService(seed=9, samples=2_000, quick=True)
        checks = {check.name: check for check in service.check_properties(_StreamPool(SampleStream(seed=9)))}
        for family in service.manager.get_available_providers():
            for measure in ('concurrence', 'negativity'):
                self.assertTrue(checks[f"local_depolarizing_{measure}_{family}"].passed)
        self.assertTrue(checks['e_L_local_postprocessing_counterexample'].passed)
        for k in (1, 2, 4):
            self.assertTrue(checks[f"tangle_lower_bound_rank{k}"].passed)
            self.assertTrue(checks[f"tangle_upper_bound_rank{k}"].passed)
        self.assertTrue(checks['pure_tangle_mixed_path'].passed)
