"""
Configuración del núcleo numérico.
Define tolerancias del álgebra lineal y parámetros del muestreo Monte Carlo.
"""

import os

# Configuración del álgebra lineal densa
LINALG_CONFIG = {
    'max_dimension': 256,          # Tamaño máximo de un producto tensorial
    'jacobi_tolerance': 1e-13,     # Norma fuera de la diagonal para converger
    'jacobi_max_sweeps': 100,      # Barridos cíclicos antes de abortar
    'hermitian_tolerance': 1e-9,   # ‖H − H†‖_F relativa admitida
    'psd_clip': 1e-10,             # Autovalores negativos tolerados (se recortan a 0)
    'imaginary_tolerance': 1e-12,  # Residuo imaginario admitido en trazas reales
}

# Configuración del muestreo
SAMPLING_CONFIG = {
    'default_seed': 20260601,
    'default_samples': 100_000,
    'min_samples': 2,
    'block_size': 4096,            # Muestras por bloque (unidad de paralelismo)
    'normalization_tolerance': 1e-12,
    'schmidt_tolerance': 1e-12,
}


def get_default_seed() -> int:
    """Obtiene la semilla por defecto (variable BIQ_SEED si existe)."""
    value = os.getenv('BIQ_SEED')
    if value is None or value.strip() == '':
        return SAMPLING_CONFIG['default_seed']
    return int(value)


def get_default_samples() -> int:
    """Obtiene el número de muestras por defecto (variable BIQ_SAMPLES si existe)."""
    value = os.getenv('BIQ_SAMPLES')
    if value is None or value.strip() == '':
        return SAMPLING_CONFIG['default_samples']
    return int(value)


def get_default_workers() -> int:
    """Obtiene el tamaño del pool de procesos (variable BIQ_WORKERS si existe)."""
    value = os.getenv('BIQ_WORKERS')
    if value is None or value.strip() == '':
        return 1
    return max(1, int(value))
