"""
Configuración de los diagnósticos de canales bipartitos.
Define tolerancias de validación, parámetros Monte Carlo, rejillas por defecto,
formato de salida y códigos de salida de los comandos.
"""

import math
import os

# Validación de canales
CHANNEL_CONFIG = {
    'completeness_tolerance': 1e-9,  # ‖Σ K†K − I‖_F admitida
    'state_tolerance': 1e-10,        # Hermiticidad, positividad y traza de estados
    'unitary_tolerance': 1e-10,      # ‖U U† − I‖_F admitida en unitarias objetivo
    'equality_tolerance': 1e-9,      # Igualdad extensional vía matriz de Choi
    'contraction_imaginary': 1e-10,  # Residuo imaginario en contracciones de dos copias
    'stinespring_env_dim': 4,        # Dimensión del entorno en canales aleatorios
}

# Estimación Monte Carlo
MC_CONFIG = {
    'sigmas': 3.0,                   # Holgura de las comprobaciones MC
    'quick_samples': 10_000,         # Muestras en `validate --quick`
    'min_samples': 100,              # Mínimo admitido en la línea de comandos
    'spectral_floor': 1e-12,         # Autovalores de √ρ ρ̃ √ρ por debajo se tratan como 0
    'separable_tolerance': 1e-9,     # Concurrencia/negatividad máxima por muestra en canales separables
}

# Rejillas por defecto
GRID_CONFIG = {
    'theta': (0.0, math.pi / 4, 33),
    't': (0.0, 3.0, 41),
    'unit': (0.0, 1.0, 11),
    'phi': (0.0, 2 * math.pi, 9),
}

# Formato de salida
OUTPUT_CONFIG = {
    'formats': ('csv', 'json'),
    'default_format': 'csv',
    'encoding': 'utf-8',
    'line_terminator': '\n',
    'schema_dir': os.path.join(os.path.dirname(os.path.abspath(__file__)), 'schemas'),
}

# Códigos de salida de los comandos
EXIT_CODES = {
    'success': 0,
    'usage': 2,
    'validation': 3,
    'numerical': 4,
}

# Mensajes del sistema
SYSTEM_MESSAGES = {
    'sweep_start': 'Iniciando barrido',
    'sweep_done': 'Barrido completado',
    'validation_pass': 'Todas las comprobaciones superadas',
    'validation_fail': 'Comprobaciones fallidas',
    'unknown_channel': 'Canal desconocido',
    'malformed_channel': 'JSON de canal mal formado',
    'not_cptp': 'El canal no es CPTP',
    'no_convergence': 'El diagonalizador no convergió',
}

