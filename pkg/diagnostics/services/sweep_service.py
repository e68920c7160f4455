"""
Servicio de barridos: evalúa diagnósticos sobre una rejilla de parámetros
y ensambla tablas CSV/JSON reproducibles.

Cada punto de la rejilla usa la corriente hija `root.child(índice)`, de modo
que el resultado no depende del orden de evaluación ni del número de
procesos; la tabla se ensambla en orden de rejilla.
"""

import csv
import io
import json
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from biqkit import __version__
from core.exceptions import DimensionError
from core.sampling import SampleStream
from diagnostics.config import OUTPUT_CONFIG, SYSTEM_MESSAGES
from diagnostics.providers.channels import ChannelManager, KrausChannel, error_channel
from .entangling_power_service import EntanglingPowerService
from .fidelity_service import FidelityService
from .orbit_variation_service import OrbitVariationService

logger = logging.getLogger(__name__)

_PI_TOKEN = re.compile(r'^([+-]?[0-9.]*(?:e[+-]?[0-9]+)?)\*?pi(?:/([0-9.]+))?$')


def parse_number(token: str) -> float:
    """Número real admitiendo múltiplos de pi ('pi/4', '2pi', '0.5*pi')."""
    text = token.strip().lower()
    match = _PI_TOKEN.match(text)
    if match:
        factor = match.group(1)
        factor = 1.0 if factor in ('', '+') else (-1.0 if factor == '-' else float(factor))
        divisor = float(match.group(2)) if match.group(2) else 1.0
        return factor * math.pi / divisor
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"Valor no finito en la rejilla: '{token}'")
    return value


@dataclass(frozen=True)
class GridSpec:
    """Rejilla uniforme 'a:b:n' (n puntos de a a b, ambos incluidos)."""
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"La rejilla necesita al menos un punto, se pidieron {self.count}")
        if self.count > 1 and not self.stop > self.start:
            raise ValueError(f"La rejilla debe ser estrictamente creciente: {self.start} → {self.stop}")

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        """
        Raises:
            ValueError: Si el texto no tiene la forma 'a:b:n'
        """
        parts = text.split(':')
        if len(parts) == 1:
            value = parse_number(parts[0])
            return cls(value, value, 1)
        if len(parts) != 3:
            raise ValueError(f"Rejilla '{text}' mal formada, use 'a:b:n'")
        return cls(parse_number(parts[0]), parse_number(parts[1]), int(parts[2]))

    @classmethod
    def from_tuple(cls, values: Tuple[float, float, int]) -> 'GridSpec':
        return cls(float(values[0]), float(values[1]), int(values[2]))

    def values(self) -> List[float]:
        if self.count == 1:
            return [float(self.start)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]

    def describe(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.count}"


@dataclass(frozen=True)
class ChannelSpec:
    """
    Canal de un barrido: una familia registrada o un canal fijo leído de JSON.

    Attributes:
        name: Nombre de la familia (None si el canal es fijo)
        options: Opciones de la familia
        channel: Canal fijo (None si es una familia)
        source: Descriptor para metadatos (nombre o ruta del fichero)
    """
    name: Optional[str] = None
    options: Dict[str, float] = field(default_factory=dict)
    channel: Optional[KrausChannel] = None
    source: str = ''

    @property
    def is_family(self) -> bool:
        return self.channel is None

    def build(self, value: float) -> KrausChannel:
        if self.channel is not None:
            return self.channel
        return ChannelManager.get_instance().build(self.name, value, **self.options)

    def describe(self) -> Dict[str, Any]:
        return {'name': self.name or self.source, 'options': dict(self.options), 'source': self.source or self.name}


@dataclass(frozen=True)
class RunConfig:
    """Configuración de una ejecución (ya validada por RunConfigSerializer)."""
    seed: int
    samples: int
    workers: int = 1
    format: str = 'csv'
    out: Optional[str] = None
    analytic_only: bool = False


@dataclass(frozen=True)
class Column:
    """
    Columna de una tabla.

    Attributes:
        name: Nombre en la cabecera
        unit: Unidad ('' para adimensional)
        kind: 'param', 'analytic', 'mc', 'stderr' o 'derived'
        stderr_of: Columna MC a la que acompaña (solo kind='stderr')
    """
    name: str
    unit: str = ''
    kind: str = 'analytic'
    stderr_of: Optional[str] = None

    def as_dict(self) -> Dict[str, Any]:
        data = {'name': self.name, 'unit': self.unit, 'kind': self.kind}
        if self.stderr_of:
            data['stderr_of'] = self.stderr_of
        return data


def mc_columns(name: str, stderr_name: str = None) -> List[Column]:
    """Columna MC y su error estándar hermano."""
    stderr_name = stderr_name or f"{name}_err"
    return [Column(name, kind='mc'), Column(stderr_name, kind='stderr', stderr_of=name)]


@dataclass
class SweepTable:
    """Filas numéricas de un barrido con sus metadatos de reproducción."""
    columns: List[Column]
    rows: List[Tuple[float, ...]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"Columnas duplicadas: {names}")
        paired = {c.stderr_of for c in self.columns if c.kind == 'stderr'}
        missing = [c.name for c in self.columns if c.kind == 'mc' and c.name not in paired]
        if missing:
            raise ValueError(f"Columnas MC sin error estándar: {missing}")

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.columns]

    def append(self, row: Sequence[float]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"Fila de {len(row)} valores para {len(self.columns)} columnas")
        self.rows.append(tuple(float(v) for v in row))

    def column(self, name: str) -> List[float]:
        index = self.names.index(name)
        return [row[index] for row in self.rows]

    def as_dict(self) -> Dict[str, Any]:
        return {
            'columns': [c.as_dict() for c in self.columns],
            'rows': [list(row) for row in self.rows],
            'metadata': self.metadata,
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator=OUTPUT_CONFIG['line_terminator'])
        writer.writerow(self.names)
        for row in self.rows:
            writer.writerow([repr(value) for value in row])
        return buffer.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False, allow_nan=False) + '\n'

    def render(self, fmt: str) -> str:
        if fmt not in OUTPUT_CONFIG['formats']:
            raise ValueError(f"Formato '{fmt}' no soportado, opciones: {OUTPUT_CONFIG['formats']}")
        return self.to_csv() if fmt == 'csv' else self.to_json()


@dataclass(frozen=True)
class PointTask:
    """Trabajo de un punto de rejilla (serializable para el pool de procesos)."""
    spec: ChannelSpec
    value: float
    samples: int
    seed: int
    stream_id: int
    analytic_only: bool = False
    target: Optional[np.ndarray] = None
    theta: Optional[float] = None

    @property
    def stream(self) -> SampleStream:
        return SampleStream(seed=self.seed, stream_id=self.stream_id)

    def channel(self) -> KrausChannel:
        ch = self.spec.build(self.value)
        if self.target is not None:
            ch = error_channel(ch, self.target)
        return ch


def fidelity_point(task: PointTask) -> Tuple[float, ...]:
    service = FidelityService()
    ch = task.channel()
    f_avg = service.favg_analytic(ch)
    f_prod = service.fprod_analytic(ch)
    row = [task.value, f_avg, f_prod, f_avg - f_prod]
    if ch.dA == ch.dB >= 2:
        row.append(service.maximally_entangled_fidelity(ch))
    if not task.analytic_only:
        stream = task.stream
        avg = service.favg_mc(ch, task.samples, stream.child(0))
        prod = service.fprod_mc(ch, task.samples, stream.child(1))
        row.extend([avg.mean, avg.stderr, prod.mean, prod.stderr])
    return tuple(row)


def entpower_point(task: PointTask) -> Tuple[float, ...]:
    report = EntanglingPowerService().report(task.channel(), task.samples, task.stream)
    return (
        task.value,
        report.e_C.mean, report.e_C.stderr,
        report.e_N.mean, report.e_N.stderr,
        report.e_L.mean, report.e_L.stderr,
        report.e_C2.mean, report.e_C2.stderr,
        report.lower, report.upper, report.e_N_upper,
    )


def bounds_point(task: PointTask) -> Tuple[float, ...]:
    service = EntanglingPowerService()
    ch = task.channel()
    lower, upper = service.e_C_bounds(ch)
    row = [task.value, lower, upper, 0.5 * upper, service.e_L_analytic(ch), service.global_impurity_analytic(ch)]
    if not task.analytic_only:
        estimates = service.output_estimates(ch, ('concurrence', 'concurrence_sq'), task.samples, task.stream)
        c, c2 = estimates['concurrence'], estimates['concurrence_sq']
        row.extend([c.mean, c.stderr, c2.mean, c2.stderr])
    return tuple(row)


def variation_point(task: PointTask) -> Tuple[float, ...]:
    report = OrbitVariationService().report(task.channel(), task.theta, task.samples, task.stream)
    c = report.delta_eC
    return (
        task.value, report.theta, report.mu,
        c.mean, c.stderr,
        report.lower, report.upper,
        c.mean - report.lower, report.upper - c.mean,
        report.delta_eN.mean, report.delta_eN.stderr, report.eN_upper,
        report.delta_eL.mean, report.delta_eL.stderr, report.delta_eL_analytic,
        report.deltaP_orbit, report.global_impurity,
    )


class SweepService:

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def _run(self, point: Callable[[PointTask], Tuple[float, ...]], tasks: List[PointTask],
             workers: int) -> List[Tuple[float, ...]]:
        if workers > 1 and len(tasks) > 1:
            self.logger.info(f"{SYSTEM_MESSAGES['sweep_start']}: {len(tasks)} puntos en {workers} procesos")
            with ProcessPoolExecutor(max_workers=workers) as executor:
                return list(executor.map(point, tasks))
        self.logger.info(f"{SYSTEM_MESSAGES['sweep_start']}: {len(tasks)} puntos en serie")
        return [point(task) for task in tasks]

    def _values(self, spec: ChannelSpec, grid: GridSpec) -> List[float]:
        # Un canal fijo no tiene parámetro: una sola fila con param = 0
        return grid.values() if spec.is_family else [0.0]

    def _param_column(self, spec: ChannelSpec, name: str = 'param') -> Column:
        unit = ''
        if spec.is_family:
            unit = ChannelManager.get_instance().require_provider(spec.name).unit
        return Column(name, unit=unit, kind='param')

    def _tasks(self, spec: ChannelSpec, values: Sequence[float], config: RunConfig,
               target: Optional[np.ndarray] = None) -> List[PointTask]:
        root = SampleStream(seed=config.seed)
        return [
            PointTask(spec=spec, value=value, samples=config.samples, seed=config.seed,
                      stream_id=root.child(index).stream_id, analytic_only=config.analytic_only,
                      target=target)
            for index, value in enumerate(values)
        ]

    def _metadata(self, command: str, spec: ChannelSpec, config: RunConfig, **extra) -> Dict[str, Any]:
        metadata = {
            'command': command,
            'tool_version': __version__,
            'seed': config.seed,
            'samples': config.samples,
            'analytic_only': config.analytic_only,
            'channel': spec.describe(),
        }
        metadata.update(extra)
        return metadata

    def _table(self, columns: List[Column], rows, metadata) -> SweepTable:
        table = SweepTable(columns=columns, metadata=metadata)
        for row in rows:
            table.append(row)
        self.logger.info(f"{SYSTEM_MESSAGES['sweep_done']}: {len(table.rows)} filas")
        return table

    def _require_two_qubit(self, spec: ChannelSpec, value: float) -> None:
        ch = spec.build(value)
        if (ch.dA, ch.dB) != (2, 2):
            raise DimensionError(f"Este experimento requiere canales de dos qubits, canal {ch.dA}×{ch.dB}")

    def fidelity_sweep(self, spec: ChannelSpec, grid: GridSpec, config: RunConfig,
                       target: Optional[np.ndarray] = None, target_name: str = None) -> SweepTable:
        """
        Columnas: param, f_avg, f_prod, chi_F, [f_maxent], [f_avg_mc, f_avg_mc_err, f_prod_mc, f_prod_mc_err].
        """
        values = self._values(spec, grid)
        sample = spec.build(values[0])
        columns = [self._param_column(spec), Column('f_avg'), Column('f_prod'), Column('chi_F')]
        if sample.dA == sample.dB >= 2:
            columns.append(Column('f_maxent'))
        if not config.analytic_only:
            columns += mc_columns('f_avg_mc') + mc_columns('f_prod_mc')
        rows = self._run(fidelity_point, self._tasks(spec, values, config, target), config.workers)
        metadata = self._metadata('fidelity', spec, config, grid=grid.describe(), target=target_name)
        return self._table(columns, rows, metadata)

    def entpower_sweep(self, spec: ChannelSpec, grid: GridSpec, config: RunConfig) -> SweepTable:
        """
        Columnas: param, e_C, e_C_err, e_N, e_N_err, e_L, e_L_err, e_C2, e_C2_err, lower, upper, e_N_upper.
        """
        values = self._values(spec, grid)
        self._require_two_qubit(spec, values[0])
        columns = (
            [self._param_column(spec)]
            + mc_columns('e_C') + mc_columns('e_N') + mc_columns('e_L') + mc_columns('e_C2')
            + [Column('lower'), Column('upper'), Column('e_N_upper')]
        )
        rows = self._run(entpower_point, self._tasks(spec, values, config), config.workers)
        return self._table(columns, rows, self._metadata('entpower', spec, config, grid=grid.describe()))

    def bounds_sweep(self, spec: ChannelSpec, grid: GridSpec, config: RunConfig) -> SweepTable:
        """
        Columnas: param, lower, upper, e_N_upper, e_L_analytic, global_impurity,
        [e_C_mc, e_C_err, e_C2_mc, e_C2_err].
        """
        values = self._values(spec, grid)
        self._require_two_qubit(spec, values[0])
        columns = [
            self._param_column(spec), Column('lower'), Column('upper'), Column('e_N_upper'),
            Column('e_L_analytic'), Column('global_impurity'),
        ]
        if not config.analytic_only:
            columns += mc_columns('e_C_mc', 'e_C_err') + mc_columns('e_C2_mc', 'e_C2_err')
        rows = self._run(bounds_point, self._tasks(spec, values, config), config.workers)
        return self._table(columns, rows, self._metadata('bounds', spec, config, grid=grid.describe()))

    def variation_sweep(self, spec: ChannelSpec, grid: GridSpec, theta_grid: GridSpec,
                        config: RunConfig) -> SweepTable:
        """
        Formato largo sobre (t, θ): una fila por par, recorriendo θ dentro de cada t.
        """
        values = self._values(spec, grid)
        self._require_two_qubit(spec, values[0])
        thetas = theta_grid.values()
        root = SampleStream(seed=config.seed)
        tasks = []
        for i, value in enumerate(values):
            for j, theta in enumerate(thetas):
                index = i * len(thetas) + j
                tasks.append(PointTask(spec=spec, value=value, samples=config.samples, seed=config.seed,
                                       stream_id=root.child(index).stream_id, theta=theta))
        columns = (
            [self._param_column(spec, 't'), Column('theta', unit='rad', kind='param'), Column('mu', kind='param')]
            + mc_columns('delta_eC')
            + [Column('lower'), Column('upper'),
               Column('gap_lower', kind='derived'), Column('gap_upper', kind='derived')]
            + mc_columns('delta_eN') + [Column('eN_upper')]
            + mc_columns('delta_eL') + [Column('delta_eL_analytic'), Column('deltaP_orbit'),
                                        Column('global_impurity')]
        )
        rows = self._run(variation_point, tasks, config.workers)
        metadata = self._metadata('variation', spec, config, grid=grid.describe(),
                                  theta_grid=theta_grid.describe())
        return self._table(columns, rows, metadata)
