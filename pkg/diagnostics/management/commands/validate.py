"""
Comando de Django para ejecutar la batería de validación numérica.
Ejecutar: python manage.py validate [--quick] [--channel canal.json]
"""

import json
import logging

from django.core.management.base import BaseCommand, CommandError

from core.config import get_default_samples, get_default_seed, get_default_workers
from core.exceptions import ChannelValidationError, ConvergenceError
from diagnostics.config import EXIT_CODES, OUTPUT_CONFIG, SYSTEM_MESSAGES
from diagnostics.management.experiment_command import load_channel
from diagnostics.serializers import RunConfigSerializer
from diagnostics.services.validation_service import ValidationReport, ValidationService


class Command(BaseCommand):
    help = 'Ejecuta las comprobaciones numéricas y emite un informe JSON (código 3 si alguna falla)'

    def add_arguments(self, parser):
        parser.add_argument(
            '--quick',
            action='store_true',
            help='Modo rápido: 10⁴ muestras por estimación y corpus reducidos'
        )
        parser.add_argument(
            '--channel',
            type=str,
            default=None,
            help='Validar solo un canal JSON en lugar de la batería completa'
        )
        parser.add_argument(
            '--group',
            action='append',
            default=[],
            help=f"Limitar a un grupo de comprobaciones (repetible): {', '.join(ValidationService.GROUPS)}"
        )
        parser.add_argument('--samples', type=int, default=None,
                            help='Muestras Monte Carlo (default: BIQ_SAMPLES o 100000)')
        parser.add_argument('--seed', type=int, default=None,
                            help='Semilla (default: BIQ_SEED o la semilla del proyecto)')
        parser.add_argument('--workers', type=int, default=None,
                            help='Procesos del pool para la comprobación serie/paralelo')
        parser.add_argument('--out', type=str, default=None,
                            help='Fichero del informe JSON (default: salida estándar)')

    def _config(self, options):
        serializer = RunConfigSerializer(data={
            'seed': options['seed'] if options['seed'] is not None else get_default_seed(),
            'samples': options['samples'] if options['samples'] is not None else get_default_samples(),
            'workers': options['workers'] if options['workers'] is not None else get_default_workers(),
            'format': 'json',
            'out': options['out'],
        })
        if not serializer.is_valid():
            raise CommandError(f"Configuración no válida: {serializer.errors}", returncode=EXIT_CODES['usage'])
        return serializer.validated_data

    def _write(self, report: ValidationReport, out: str) -> None:
        text = json.dumps(report.as_dict(), indent=2, ensure_ascii=False, allow_nan=False) + '\n'
        if out:
            with open(out, 'w', encoding=OUTPUT_CONFIG['encoding'], newline='') as f:
                f.write(text)
        else:
            self.stdout.write(text, ending='')

    def handle(self, *args, **options):
        logger = logging.getLogger(__name__)
        config = self._config(options)
        unknown = sorted(set(options['group']) - set(ValidationService.GROUPS))
        if unknown:
            raise CommandError(f"Grupos desconocidos {unknown}. Disponibles: {', '.join(ValidationService.GROUPS)}",
                               returncode=EXIT_CODES['usage'])
        service = ValidationService(seed=config['seed'], samples=config['samples'],
                                    quick=options['quick'], workers=config['workers'])
        try:
            if options['channel']:
                channel = load_channel(options['channel'])
                report = service.run_channel(channel, source=options['channel'])
            else:
                report = service.run(groups=options['group'] or None)
        except ChannelValidationError as e:
            self._write(e.report, options['out'])
            raise CommandError(f"❌ {SYSTEM_MESSAGES['not_cptp']}: residuo de completitud {e.residual!r}",
                               returncode=EXIT_CODES['validation'])
        except ConvergenceError as e:
            logger.error(f"{SYSTEM_MESSAGES['no_convergence']}: {e}")
            raise CommandError(f"❌ {e}", returncode=EXIT_CODES['numerical'])

        self._write(report, options['out'])
        if not report.passed:
            for check in report.failures:
                self.stderr.write(self.style.ERROR(f"❌ {check.group}/{check.name}: "
                                                   f"{check.value!r} (esperado {check.expected!r})"))
            raise CommandError(f"{SYSTEM_MESSAGES['validation_fail']}: {len(report.failures)}/{len(report.checks)}",
                               returncode=EXIT_CODES['validation'])
        self.stderr.write(self.style.SUCCESS(f"✅ {SYSTEM_MESSAGES['validation_pass']} ({len(report.checks)})"))
