import json
import math
import os

from django.test import SimpleTestCase

from core.exceptions import DimensionError
from core.sampling import SampleStream
from diagnostics.config import OUTPUT_CONFIG
from diagnostics.providers.channels import CZ, identity_channel, random_stinespring_channel
from diagnostics.serializers import RunConfigSerializer, SweepTableSerializer
from diagnostics.services.sweep_service import (
    ChannelSpec,
    Column,
    GridSpec,
    RunConfig,
    SweepService,
    SweepTable,
    mc_columns,
    parse_number,
)


class GridParsingTests(SimpleTestCase):

    def test_pi_tokens(self):
        self.assertAlmostEqual(parse_number('pi/4'), math.pi / 4)
        self.assertAlmostEqual(parse_number('2pi'), 2 * math.pi)
        self.assertAlmostEqual(parse_number('0.5*pi'), math.pi / 2)
        self.assertAlmostEqual(parse_number('-pi'), -math.pi)
        self.assertEqual(parse_number(' 0.25 '), 0.25)

    def test_invalid_numbers(self):
        for token in ('abc', 'inf', 'nan', 'pi/'):
            with self.subTest(token=token):
                with self.assertRaises(ValueError):
                    parse_number(token)

    def test_grid(self):
        grid = GridSpec.parse('0:2pi:9')
        values = grid.values()
        self.assertEqual(len(values), 9)
        self.assertEqual(values[0], 0.0)
        self.assertAlmostEqual(values[-1], 2 * math.pi)
        self.assertAlmostEqual(values[2], math.pi / 2)

    def test_single_point(self):
        self.assertEqual(GridSpec.parse('0.3').values(), [0.3])

    def test_invalid_grids(self):
        for text in ('1:0:3', '0:1', '0:1:0', '0:1:x'):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    GridSpec.parse(text)

    def test_run_config_serializer(self):
        serializer = RunConfigSerializer(data={'seed': 1, 'samples': 1000, 'param_grid': '0:1:3',
                                               'theta_grid': '0:pi/4:5'})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['param_grid'], GridSpec(0.0, 1.0, 3))
        for bad in ({'seed': -1, 'samples': 1000}, {'seed': 1, 'samples': 10},
                    {'seed': 1, 'samples': 1000, 'format': 'xml'},
                    {'seed': 1, 'samples': 1000, 'theta_grid': '0:1:3'},
                    {'seed': 1, 'samples': 1000, 'workers': 0}):
            with self.subTest(data=bad):
                self.assertFalse(RunConfigSerializer(data=bad).is_valid())


class SweepTableTests(SimpleTestCase):

    def test_columns_must_be_unique(self):
        with self.assertRaises(ValueError):
            SweepTable(columns=[Column('a'), Column('a')])

    def test_monte_carlo_columns_need_stderr(self):
        with self.assertRaises(ValueError):
            SweepTable(columns=[Column('x', kind='param'), Column('e_C', kind='mc')])
        table = SweepTable(columns=[Column('x', kind='param')] + mc_columns('e_C'))
        self.assertEqual(table.names, ['x', 'e_C', 'e_C_err'])

    def test_row_width(self):
        table = SweepTable(columns=[Column('a'), Column('b')])
        with self.assertRaises(ValueError):
            table.append((1.0,))

    def test_csv_format(self):
        table = SweepTable(columns=[Column('a'), Column('b')])
        table.append((0.1, 1))
        table.append((1e-20, -2.5))
        self.assertEqual(table.to_csv(), 'a,b\n0.1,1.0\n1e-20,-2.5\n')

    def test_json_format(self):
        table = SweepTable(columns=[Column('a', unit='rad', kind='param')], metadata={'seed': 3})
        table.append((0.5,))
        data = json.loads(table.to_json())
        self.assertEqual(data['columns'], [{'name': 'a', 'unit': 'rad', 'kind': 'param'}])
        self.assertEqual(data['rows'], [[0.5]])
        self.assertEqual(data['metadata'], {'seed': 3})
        self.assertTrue(table.to_json().endswith('\n'))

    def test_non_finite_values_are_not_serialized_as_json(self):
        table = SweepTable(columns=[Column('a')])
        table.append((float('nan'),))
        with self.assertRaises(ValueError):
            table.to_json()

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            SweepTable(columns=[Column('a')]).render('xml')


class SweepServiceTests(SimpleTestCase):

    def setUp(self):
        self.service = SweepService()
        self.config = RunConfig(seed=2024, samples=400)

    def test_fidelity_sweep_closed_forms(self):
        spec = ChannelSpec(name='controlled-phase')
        table = self.service.fidelity_sweep(spec, GridSpec.parse('0:2pi:5'),
                                            RunConfig(seed=1, samples=400, analytic_only=True))
        self.assertEqual(table.names, ['param', 'f_avg', 'f_prod', 'chi_F', 'f_maxent'])
        self.assertEqual(table.columns[0].unit, 'rad')
        for phi, f_avg, f_prod in zip(table.column('param'), table.column('f_avg'), table.column('f_prod')):
            self.assertAlmostEqual(f_avg, (14 + 6 * math.cos(phi)) / 20, places=12)
            self.assertAlmostEqual(f_prod, (26 + 10 * math.cos(phi)) / 36, places=12)
        self.assertEqual(table.metadata['command'], 'fidelity')
        self.assertEqual(table.metadata['channel']['name'], 'controlled-phase')

    def test_fidelity_sweep_relative_to_target(self):
        spec = ChannelSpec(name='cz-correlated-dephasing')
        table = self.service.fidelity_sweep(spec, GridSpec.parse('0:1:3'), self.config, target=CZ,
                                            target_name='cz')
        for u, f_avg in zip(table.column('param'), table.column('f_avg')):
            self.assertAlmostEqual(f_avg, 0.6 + 0.4 * u, places=12)
        self.assertIn('f_avg_mc_err', table.names)
        self.assertEqual(table.metadata['target'], 'cz')

    def test_sweep_is_reproducible(self):
        spec = ChannelSpec(name='cz-phase-damping', options={'g': 1.5, 'Gamma': 1.0})
        grid = GridSpec.parse('0:3:3')
        first = self.service.entpower_sweep(spec, grid, self.config).to_csv()
        second = self.service.entpower_sweep(spec, grid, self.config).to_csv()
        self.assertEqual(first, second)
        other = self.service.entpower_sweep(spec, grid, RunConfig(seed=2025, samples=400)).to_csv()
        self.assertNotEqual(first, other)

    def test_parallel_sweep_matches_serial(self):
        spec = ChannelSpec(name='mixed-unitary', options={'unitary_seed': 7.0})
        grid = GridSpec.parse('0:1:3')
        serial = self.service.bounds_sweep(spec, grid, self.config)
        parallel = self.service.bounds_sweep(spec, grid, RunConfig(seed=2024, samples=400, workers=2))
        self.assertEqual(serial.to_csv(), parallel.to_csv())

    def test_fixed_channel_has_single_row(self):
        ch = random_stinespring_channel(2, 2, SampleStream(seed=4))
        spec = ChannelSpec(channel=ch, source='canal.json')
        table = self.service.bounds_sweep(spec, GridSpec.parse('0:1:5'),
                                          RunConfig(seed=1, samples=400, analytic_only=True))
        self.assertEqual(len(table.rows), 1)
        self.assertEqual(table.rows[0][0], 0.0)
        self.assertEqual(table.metadata['channel']['source'], 'canal.json')

    def test_two_qubit_sweeps_reject_other_dimensions(self):
        spec = ChannelSpec(channel=identity_channel(3, 3), source='qutrits.json')
        with self.assertRaises(DimensionError):
            self.service.entpower_sweep(spec, GridSpec.parse('0'), self.config)
        table = self.service.fidelity_sweep(spec, GridSpec.parse('0'),
                                            RunConfig(seed=1, samples=400, analytic_only=True))
        self.assertAlmostEqual(table.rows[0][1], 1.0)

    def test_variation_sweep_layout(self):
        spec = ChannelSpec(name='phase-damping', options={'Gamma': 1.0})
        table = self.service.variation_sweep(spec, GridSpec.parse('0:2:2'), GridSpec.parse('0:pi/4:3'),
                                             RunConfig(seed=5, samples=400))
        self.assertEqual(len(table.rows), 6)
        self.assertEqual(table.names[:3], ['t', 'theta', 'mu'])
        self.assertEqual(table.column('t'), [0.0, 0.0, 0.0, 2.0, 2.0, 2.0])
        for theta, mu in zip(table.column('theta'), table.column('mu')):
            self.assertAlmostEqual(mu, 1 - 0.5 * math.sin(2 * theta) ** 2, places=12)
        self.assertEqual(table.metadata['theta_grid'], GridSpec.parse('0:pi/4:3').describe())

    def test_table_matches_its_serializer(self):
        spec = ChannelSpec(name='controlled-phase')
        table = self.service.entpower_sweep(spec, GridSpec.parse('0:pi:2'), self.config)
        serializer = SweepTableSerializer(data=json.loads(table.to_json()))
        self.assertTrue(serializer.is_valid(), serializer.errors)

    def test_table_carries_schema_required_keys(self):
        with open(os.path.join(OUTPUT_CONFIG['schema_dir'], 'sweep_table.schema.json'), encoding='utf-8') as f:
            schema = json.load(f)
        spec = ChannelSpec(name='cz-phase-damping', options={'g': 1.5, 'Gamma': 1.0})
        data = json.loads(self.service.bounds_sweep(spec, GridSpec.parse('0:3:2'), self.config).to_json())
        self.assertLessEqual(set(schema['required']), set(data))
        metadata_schema = schema['properties']['metadata']
        self.assertLessEqual(set(metadata_schema['required']), set(data['metadata']))
        self.assertIn(data['metadata']['command'], metadata_schema['properties']['command']['enum'])
        kinds = set(schema['properties']['columns']['items']['properties']['kind']['enum'])
        self.assertLessEqual({column['kind'] for column in data['columns']}, kinds)
