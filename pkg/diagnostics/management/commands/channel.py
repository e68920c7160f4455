"""
Comando de Django para inspeccionar y exportar canales.
Ejecutar: python manage.py channel inspect --channel cz-correlated-dephasing --value 0.5 --samples 20000
          python manage.py channel export --channel controlled-phase --value 3.14159 --out cp.json
          python manage.py channel --list
"""

import json
from typing import Optional

from django.core.management.base import CommandError

from core.config import get_default_seed
from core.sampling import SampleStream
from diagnostics.config import EXIT_CODES, MC_CONFIG
from diagnostics.management.experiment_command import ExperimentCommand, is_channel_file, load_channel
from diagnostics.providers.channels import ChannelManager
from diagnostics.reports import DiagnosticsReport
from diagnostics.serializers import channel_to_data
from diagnostics.services.entangling_power_service import EntanglingPowerService
from diagnostics.services.fidelity_service import FidelityService
from diagnostics.services.sweep_service import ChannelSpec, parse_number


class Command(ExperimentCommand):
    help = 'Inspecciona un canal (invariantes, validación, diagnósticos analíticos) o lo exporta a JSON'

    command_name = 'channel'

    def add_arguments(self, parser):
        parser.add_argument(
            'action',
            nargs='?',
            choices=['inspect', 'export'],
            default='inspect',
            help='inspect (default) o export'
        )
        parser.add_argument(
            '--list',
            action='store_true',
            help='Listar las familias registradas'
        )
        parser.add_argument(
            '--channel',
            type=str,
            default=None,
            help='Familia registrada o ruta a un canal JSON'
        )
        parser.add_argument(
            '--value',
            type=str,
            default='0',
            help='Valor del parámetro de la familia (admite pi)'
        )
        parser.add_argument(
            '--option',
            action='append',
            default=[],
            metavar='KEY=VALUE',
            help='Opción de la familia (repetible)'
        )
        parser.add_argument('--samples', type=int, default=None,
                            help='Añadir e_C y e_N Monte Carlo con este número de muestras')
        parser.add_argument('--seed', type=int, default=None,
                            help='Semilla de las estimaciones (default: BIQ_SEED o la semilla del proyecto)')
        parser.add_argument('--out', type=str, default=None,
                            help='Fichero de salida (default: salida estándar)')

    def _list(self) -> None:
        manager = ChannelManager.get_instance()
        self.stdout.write(self.style.SUCCESS("📊 Familias de canales registradas:"))
        for name, info in manager.get_all_providers_status().items():
            start, stop, count = info['default_grid']
            unit = f" [{info['unit']}]" if info['unit'] else ''
            self.stdout.write(f"   {name}: {info['description']}")
            self.stdout.write(f"      parámetro {info['parameter']}{unit}, rejilla {start}:{stop}:{count}, "
                              f"opciones {info['options']}, separable={info['separable']}")

    def _entangling_power(self, channel, samples: Optional[int], seed: Optional[int]) -> DiagnosticsReport:
        power = EntanglingPowerService()
        lower, upper = power.e_C_bounds(channel)
        delta_p = power.delta_P_product_analytic(channel)
        report = DiagnosticsReport(channel=channel.label)
        report.add_analytic('e_L', power.e_L_analytic(channel))
        report.add_analytic('global_impurity', power.global_impurity_analytic(channel))
        report.add_analytic('delta_P_A', delta_p.traced_A)
        report.add_analytic('delta_P_B', delta_p.traced_B)
        report.add_analytic('e_C_lower', lower)
        report.add_analytic('e_C_upper', upper)
        report.add_analytic('e_N_upper', 0.5 * upper)
        if samples is not None:
            if samples < MC_CONFIG['min_samples']:
                raise CommandError(f"--samples debe ser ≥ {MC_CONFIG['min_samples']}",
                                   returncode=EXIT_CODES['usage'])
            stream = SampleStream(seed=seed if seed is not None else get_default_seed())
            estimates = power.output_estimates(channel, ('concurrence', 'negativity'), samples, stream)
            report.add_estimate('e_C', estimates['concurrence'])
            report.add_estimate('e_N', estimates['negativity'])
        return report

    def _inspection(self, channel, spec, value, samples=None, seed=None) -> dict:
        fidelity = FidelityService()
        report = channel.validate()
        data = {
            'channel': spec.describe(),
            'value': value,
            'validation': report.as_dict(),
        }
        if not report.passed:
            return data
        profile = fidelity.profile(channel)
        data['fidelity'] = profile.as_dict()
        if (channel.dA, channel.dB) == (2, 2):
            data['entangling_power'] = self._entangling_power(channel, samples, seed).as_dict()
        if spec.is_family:
            provider = ChannelManager.get_instance().require_provider(spec.name)
            data['reference'] = provider.reference_values(value, **spec.options)
        return data

    def run(self, options):
        if options['list']:
            self._list()
            return
        if not options['channel']:
            raise CommandError('Indique --channel o --list', returncode=EXIT_CODES['usage'])

        value = self.parse_value(options['value'])
        if is_channel_file(options['channel']):
            channel = load_channel(options['channel'])
            spec = ChannelSpec(channel=channel, source=options['channel'])
        else:
            spec = self.resolve_channel(options['channel'], self.parse_options(options['option']))
            channel = spec.build(value)

        if options['action'] == 'export':
            channel.require_valid()
            text = json.dumps(channel_to_data(channel), indent=2, ensure_ascii=False) + '\n'
            self.emit(text, options['out'], f"Canal '{channel.label}' exportado")
            return

        data = self._inspection(channel, spec, value, options['samples'], options['seed'])
        text = json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + '\n'
        self.emit(text, options['out'], f"Canal '{channel.label}' inspeccionado")
        if not data['validation']['passed']:
            raise CommandError(f"❌ El canal no es CPTP: residuo de completitud "
                               f"{data['validation']['completeness_residual']!r}",
                               returncode=EXIT_CODES['validation'])

    def parse_value(self, text: str) -> float:
        try:
            return parse_number(text)
        except ValueError as e:
            raise CommandError(f"Valor '{text}' no válido: {e}", returncode=EXIT_CODES['usage'])
