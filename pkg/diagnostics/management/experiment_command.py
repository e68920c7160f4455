"""
Base común de los comandos de experimentos.

Resuelve el canal (familia registrada o fichero JSON), valida la
configuración de ejecución con RunConfigSerializer, escribe la tabla y
traduce las excepciones a códigos de salida.
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional

import numpy as np
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from core.config import get_default_samples, get_default_seed, get_default_workers
from core.exceptions import ChannelValidationError, ConvergenceError
from diagnostics.config import EXIT_CODES, OUTPUT_CONFIG, SYSTEM_MESSAGES
from diagnostics.providers.channels import CZ, ChannelManager, KrausChannel
from diagnostics.serializers import ChannelSerializer, RunConfigSerializer, UnitarySerializer
from diagnostics.services.sweep_service import ChannelSpec, GridSpec, RunConfig, SweepTable


def read_json(path: str) -> Any:
    """
    Raises:
        CommandError: Si el fichero no existe o no es JSON (código de uso)
    """
    try:
        with open(path, 'r', encoding=OUTPUT_CONFIG['encoding']) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CommandError(f"{SYSTEM_MESSAGES['malformed_channel']} '{path}': {e}",
                           returncode=EXIT_CODES['usage'])


def _first_error(errors) -> str:
    if isinstance(errors, dict):
        key, value = next(iter(errors.items()))
        return f"{key}: {_first_error(value)}"
    if isinstance(errors, list) and errors:
        return _first_error(errors[0])
    return str(errors)


def load_channel(path: str) -> KrausChannel:
    """
    Lee un canal JSON (sin validar CPTP).

    Raises:
        CommandError: Si el JSON no sigue el esquema de canales
    """
    serializer = ChannelSerializer(data=read_json(path))
    if not serializer.is_valid():
        raise CommandError(f"{SYSTEM_MESSAGES['malformed_channel']} '{path}': {_first_error(serializer.errors)}",
                           returncode=EXIT_CODES['usage'])
    return serializer.to_channel()


def is_channel_file(value: str) -> bool:
    return value.lower().endswith('.json') or os.path.isfile(value)


class ExperimentCommand(BaseCommand):
    """Comando con las opciones compartidas de los experimentos."""

    command_name = ''
    uses_grid = True
    uses_target = False
    uses_analytic_only = False
    uses_theta = False

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.logger = logging.getLogger(__name__)

    def add_arguments(self, parser):
        parser.add_argument(
            '--channel',
            type=str,
            required=True,
            help='Familia registrada (ver `channel --list`) o ruta a un canal JSON'
        )
        if self.uses_grid:
            parser.add_argument(
                '--param',
                type=str,
                default=None,
                help="Rejilla del parámetro 'a:b:n' (admite pi, p. ej. 0:2pi:9)"
            )
        if self.uses_theta:
            parser.add_argument(
                '--theta',
                type=str,
                default=None,
                help="Rejilla de ángulos de Schmidt 'a:b:n' en [0, pi/4] (default: 0:pi/4:33)"
            )
        parser.add_argument(
            '--option',
            action='append',
            default=[],
            metavar='KEY=VALUE',
            help='Opción de la familia (repetible), p. ej. g=1.5 o Gamma=1'
        )
        if self.uses_target:
            parser.add_argument(
                '--target',
                type=str,
                default=None,
                help='Unitaria objetivo: identity, cz o ruta a un JSON {"matrix": ...}'
            )
        if self.uses_analytic_only:
            parser.add_argument(
                '--analytic-only',
                action='store_true',
                help='Omitir las columnas Monte Carlo'
            )
        parser.add_argument('--samples', type=int, default=None,
                            help='Muestras Monte Carlo (default: BIQ_SAMPLES o 100000)')
        parser.add_argument('--seed', type=int, default=None,
                            help='Semilla (default: BIQ_SEED o la semilla del proyecto)')
        parser.add_argument('--workers', type=int, default=None,
                            help='Procesos del pool (default: BIQ_WORKERS o 1)')
        parser.add_argument('--format', type=str, default=OUTPUT_CONFIG['default_format'],
                            help='Formato de salida: csv o json')
        parser.add_argument('--out', type=str, default=None,
                            help='Fichero de salida (default: salida estándar)')

    # ------------------------------------------------------------------
    # Resolución de argumentos
    # ------------------------------------------------------------------

    def parse_options(self, items: List[str]) -> Dict[str, float]:
        options = {}
        for item in items:
            key, sep, value = item.partition('=')
            if not sep or not key.strip():
                raise CommandError(f"Opción '{item}' mal formada, use clave=valor", returncode=EXIT_CODES['usage'])
            try:
                options[key.strip()] = float(value)
            except ValueError:
                raise CommandError(f"Valor no numérico en la opción '{item}'", returncode=EXIT_CODES['usage'])
        return options

    def resolve_channel(self, value: str, options: Dict[str, float]) -> ChannelSpec:
        if is_channel_file(value):
            if options:
                raise CommandError('--option solo se admite con familias registradas', returncode=EXIT_CODES['usage'])
            channel = load_channel(value).require_valid()
            return ChannelSpec(channel=channel, source=value)
        provider = ChannelManager.get_instance().get_provider(value)
        if provider is None:
            available = ChannelManager.get_instance().get_available_providers()
            raise CommandError(f"{SYSTEM_MESSAGES['unknown_channel']} '{value}'. Disponibles: {available}",
                               returncode=EXIT_CODES['usage'])
        return ChannelSpec(name=value, options=provider.resolve_options(options), source=value)

    def resolve_target(self, value: Optional[str], dim: int = 4):
        """Devuelve (unitaria, nombre) o (None, None)."""
        if value is None:
            return None, None
        if value == 'identity':
            return np.eye(dim, dtype=np.complex128), value
        if value == 'cz':
            return CZ, value
        if not is_channel_file(value):
            raise CommandError(f"Objetivo '{value}' desconocido: use identity, cz o un fichero JSON",
                               returncode=EXIT_CODES['usage'])
        serializer = UnitarySerializer(data=read_json(value))
        if not serializer.is_valid():
            raise CommandError(f"Unitaria objetivo no válida '{value}': {_first_error(serializer.errors)}",
                               returncode=EXIT_CODES['usage'])
        return serializer.to_matrix(), value

    def resolve_config(self, options) -> Dict[str, Any]:
        data = {
            'seed': options['seed'] if options['seed'] is not None else get_default_seed(),
            'samples': options['samples'] if options['samples'] is not None else get_default_samples(),
            'workers': options['workers'] if options['workers'] is not None else get_default_workers(),
            'format': options['format'],
            'out': options['out'],
            'param_grid': options.get('param'),
            'theta_grid': options.get('theta'),
            'analytic_only': options.get('analytic_only', False),
        }
        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"Configuración no válida: {_first_error(serializer.errors)}",
                               returncode=EXIT_CODES['usage'])
        return serializer.validated_data

    def default_grid(self, spec: ChannelSpec, grid: Optional[GridSpec]) -> GridSpec:
        if grid is not None:
            return grid
        if not spec.is_family:
            return GridSpec(0.0, 0.0, 1)
        return GridSpec.from_tuple(ChannelManager.get_instance().require_provider(spec.name).default_grid)

    def run_config(self, validated: Dict[str, Any]) -> RunConfig:
        return RunConfig(
            seed=validated['seed'],
            samples=validated['samples'],
            workers=validated['workers'],
            format=validated['format'],
            out=validated['out'],
            analytic_only=validated['analytic_only'],
        )

    # ------------------------------------------------------------------
    # Salida
    # ------------------------------------------------------------------

    def emit(self, text: str, out: Optional[str], summary: str) -> None:
        if out:
            with open(out, 'w', encoding=OUTPUT_CONFIG['encoding'], newline='') as f:
                f.write(text)
            self.stdout.write(self.style.SUCCESS(f"✅ {summary} → {out}"))
        else:
            self.stdout.write(text, ending='')
            self.stderr.write(self.style.SUCCESS(f"✅ {summary}"))

    def emit_table(self, table: SweepTable, config: RunConfig) -> None:
        self.emit(table.render(config.format), config.out,
                  f"Tabla '{self.command_name}' con {len(table.rows)} filas")

    # ------------------------------------------------------------------
    # Ejecución
    # ------------------------------------------------------------------

    def run(self, options) -> None:
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            self.run(options)
        except CommandError:
            raise
        except ChannelValidationError as e:
            self.logger.error(f"{SYSTEM_MESSAGES['not_cptp']}: {e}")
            raise CommandError(f"❌ {e}", returncode=EXIT_CODES['validation'])
        except ConvergenceError as e:
            self.logger.error(f"{SYSTEM_MESSAGES['no_convergence']}: {e}")
            raise CommandError(f"❌ {e}", returncode=EXIT_CODES['numerical'])
        except (ValueError, serializers.ValidationError) as e:
            raise CommandError(f"❌ {e}", returncode=EXIT_CODES['usage'])
