"""
Excepciones del núcleo numérico.
Todas heredan de las excepciones estándar que ya se usan en el proyecto
(ValueError / RuntimeError) para que el código cliente pueda capturarlas igual.
"""


class DiagnosticsError(Exception):
    """Raíz común de los errores de diagnóstico."""


class DimensionError(DiagnosticsError, ValueError):
    """Dimensiones incompatibles o fuera del máximo configurado."""


class NonHermitianError(DiagnosticsError, ValueError):
    """Se esperaba una matriz hermítica."""


class NonPhysicalStateError(DiagnosticsError, ValueError):
    """El estado no es una matriz densidad válida (traza, positividad)."""


class ParameterDomainError(DiagnosticsError, ValueError):
    """Parámetro de canal u órbita fuera de su dominio."""


class ChannelValidationError(DiagnosticsError, ValueError):
    """El canal no supera la validación CPTP."""

    def __init__(self, message: str, residual: float = None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(DiagnosticsError, RuntimeError):
    """El diagonalizador de Jacobi agotó su presupuesto de barridos."""
