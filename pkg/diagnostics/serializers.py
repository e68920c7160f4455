import math
from typing import Any, Dict, List

import numpy as np
from rest_framework import serializers

from core.sampling import SampleStream
from diagnostics.config import MC_CONFIG, OUTPUT_CONFIG
from diagnostics.providers.channels import KrausChannel, require_unitary
from diagnostics.services.sweep_service import GridSpec

U64_MAX = 2 ** 64 - 1


def matrix_to_data(matrix: np.ndarray) -> List[List[List[float]]]:
    """Matriz compleja → filas de pares [re, im]."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def data_to_matrix(rows, label: str = 'matriz') -> np.ndarray:
    """Filas de pares [re, im] → matriz compleja cuadrada."""
    try:
        array = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise serializers.ValidationError(f"{label}: las entradas deben ser pares numéricos [re, im]")
    if array.ndim != 3 or array.shape[2] != 2 or array.shape[0] != array.shape[1]:
        raise serializers.ValidationError(
            f"{label}: se esperaba una matriz cuadrada de pares [re, im], forma {array.shape}"
        )
    if not np.all(np.isfinite(array)):
        raise serializers.ValidationError(f"{label}: entradas no finitas")
    return array[..., 0] + 1j * array[..., 1]


def channel_to_data(channel: KrausChannel) -> Dict[str, Any]:
    data = {
        'dA': channel.dA,
        'dB': channel.dB,
        'kraus': [matrix_to_data(k) for k in channel.kraus],
    }
    if channel.label:
        data['label'] = channel.label
    return data


class ChannelSerializer(serializers.Serializer):
    """Canal en JSON: {"dA": 2, "dB": 2, "kraus": [[[ [re, im], ... ]]]}."""
    dA = serializers.IntegerField(min_value=1)
    dB = serializers.IntegerField(min_value=1)
    kraus = serializers.ListField(child=serializers.ListField(), allow_empty=False)
    label = serializers.CharField(required=False, allow_blank=True, default='')

    def validate(self, data):
        D = data['dA'] * data['dB']
        matrices = []
        for index, rows in enumerate(data['kraus']):
            matrix = data_to_matrix(rows, label=f"kraus[{index}]")
            if matrix.shape != (D, D):
                raise serializers.ValidationError(
                    f"kraus[{index}] tiene forma {matrix.shape}, se esperaba ({D}, {D})"
                )
            matrices.append(matrix)
        data['matrices'] = np.stack(matrices)
        return data

    def to_channel(self) -> KrausChannel:
        """Canal sin validar CPTP (la validación la decide quien llama)."""
        data = self.validated_data
        return KrausChannel(data['matrices'], data['dA'], data['dB'], label=data['label'])


class UnitarySerializer(serializers.Serializer):
    """Unitaria objetivo en JSON: {"matrix": [[ [re, im], ... ]]}."""
    matrix = serializers.ListField(child=serializers.ListField(), allow_empty=False)

    def validate_matrix(self, value):
        matrix = data_to_matrix(value, label='matrix')
        try:
            require_unitary(matrix)
        except ValueError as e:
            raise serializers.ValidationError(str(e))
        return matrix

    def to_matrix(self) -> np.ndarray:
        return self.validated_data['matrix']


class RunConfigSerializer(serializers.Serializer):
    seed = serializers.IntegerField(min_value=0, max_value=U64_MAX)
    samples = serializers.IntegerField(min_value=MC_CONFIG['min_samples'])
    workers = serializers.IntegerField(min_value=1, default=1)
    format = serializers.ChoiceField(choices=OUTPUT_CONFIG['formats'], default=OUTPUT_CONFIG['default_format'])
    out = serializers.CharField(required=False, allow_null=True, default=None)
    param_grid = serializers.CharField(required=False, allow_null=True, default=None)
    theta_grid = serializers.CharField(required=False, allow_null=True, default=None)
    analytic_only = serializers.BooleanField(default=False)

    def _grid(self, value):
        if value is None:
            return None
        try:
            return GridSpec.parse(value)
        except ValueError as e:
            raise serializers.ValidationError(str(e))

    def validate_param_grid(self, value):
        return self._grid(value)

    def validate_theta_grid(self, value):
        grid = self._grid(value)
        if grid is not None and (grid.start < 0.0 or grid.stop > math.pi / 4 + 1e-12):
            raise serializers.ValidationError("θ debe estar en [0, π/4]")
        return grid

    def validate_seed(self, value):
        # Garantiza que la semilla cabe en el flujo Philox
        SampleStream(seed=value)
        return value


class ColumnSerializer(serializers.Serializer):
    name = serializers.CharField()
    unit = serializers.CharField(allow_blank=True)
    kind = serializers.ChoiceField(choices=('param', 'analytic', 'mc', 'stderr', 'derived'))
    stderr_of = serializers.CharField(required=False)


class SweepTableSerializer(serializers.Serializer):
    columns = ColumnSerializer(many=True)
    rows = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()))
    metadata = serializers.DictField()

    def validate(self, data):
        width = len(data['columns'])
        for index, row in enumerate(data['rows']):
            if len(row) != width:
                raise serializers.ValidationError(f"Fila {index} con {len(row)} valores para {width} columnas")
        paired = {c.get('stderr_of') for c in data['columns'] if c['kind'] == 'stderr'}
        missing = [c['name'] for c in data['columns'] if c['kind'] == 'mc' and c['name'] not in paired]
        if missing:
            raise serializers.ValidationError(f"Columnas MC sin error estándar: {missing}")
        for key in ('command', 'seed', 'samples', 'channel', 'tool_version'):
            if key not in data['metadata']:
                raise serializers.ValidationError(f"Falta '{key}' en los metadatos")
        return data


class CheckResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    group = serializers.CharField()
    passed = serializers.BooleanField()
    value = serializers.FloatField(allow_null=True, required=False)
    expected = serializers.FloatField(allow_null=True, required=False)
    tolerance = serializers.FloatField(allow_null=True, required=False)
    detail = serializers.CharField(allow_blank=True, required=False)


class ValidationReportSerializer(serializers.Serializer):
    passed = serializers.BooleanField()
    total = serializers.IntegerField(min_value=0)
    failed = serializers.IntegerField(min_value=0)
    checks = CheckResultSerializer(many=True)
    metadata = serializers.DictField()
