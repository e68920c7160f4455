"""
Álgebra lineal compleja densa para espacios de Hilbert pequeños.

Todas las operaciones aceptan matrices sueltas (n, n) o pilas (..., n, n):
los bloques Monte Carlo se procesan como pilas para no iterar en Python
muestra a muestra. El único núcleo espectral es el Jacobi cíclico hermítico.

Convención de subsistemas en el espacio de dos copias: A, B, A', B'.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from core.config import LINALG_CONFIG
from core.exceptions import (
    ConvergenceError,
    DimensionError,
    NonHermitianError,
    NonPhysicalStateError,
)

logger = logging.getLogger(__name__)

SUBSYSTEMS = ('A', 'B')
SWAP_PAIRS = ("AA'", "BB'", 'both')


@dataclass(frozen=True)
class HermitianEigenDecomposition:
    """
    Descomposición espectral de una matriz (o pila de matrices) hermítica.

    Attributes:
        eigenvalues: Autovalores reales en orden descendente, forma (..., n)
        eigenvectors: Autovectores ortonormales en columnas, forma (..., n, n)
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Devuelve V Λ V†."""
        v = self.eigenvectors
        return (v * self.eigenvalues[..., None, :]) @ dagger(v)


def as_complex_matrix(a) -> np.ndarray:
    """
    Convierte la entrada en una matriz compleja (o pila) validada.

    Raises:
        DimensionError: Si la entrada tiene menos de dos ejes
        ValueError: Si contiene NaN o infinitos
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim < 2:
        raise DimensionError(f"Se esperaba una matriz, se recibió forma {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("La matriz contiene entradas no finitas")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    """Traspuesta conjugada sobre los dos últimos ejes."""
    return np.conj(np.swapaxes(a, -1, -2))


def _require_square(m: np.ndarray, dim: int = None) -> int:
    rows, cols = m.shape[-2], m.shape[-1]
    if rows != cols:
        raise DimensionError(f"Se esperaba una matriz cuadrada, forma {m.shape}")
    if dim is not None and rows != dim:
        raise DimensionError(f"Dimensión {rows} incompatible con dA·dB = {dim}")
    return rows


def tensor_product(a, b) -> np.ndarray:
    """
    Producto de Kronecker A ⊗ B.

    Raises:
        DimensionError: Si el resultado supera la dimensión máxima configurada
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    rows = a.shape[-2] * b.shape[-2]
    cols = a.shape[-1] * b.shape[-1]
    limit = LINALG_CONFIG['max_dimension']
    if rows > limit or cols > limit:
        raise DimensionError(
            f"Producto tensorial de {rows}×{cols} supera el máximo {limit}×{limit}"
        )
    if a.ndim == 2 and b.ndim == 2:
        return np.kron(a, b)
    out = a[..., :, None, :, None] * b[..., None, :, None, :]
    return out.reshape(out.shape[:-4] + (rows, cols))


def partial_trace(rho, dA: int, dB: int, keep: str = 'A') -> np.ndarray:
    """
    Traza parcial de un operador sobre C^dA ⊗ C^dB.

    Args:
        rho: Operador (o pila) de dimensión dA·dB
        dA, dB: Dimensiones locales
        keep: Subsistema que se conserva ('A' o 'B')

    Returns:
        np.ndarray: Operador reducido dA×dA (keep='A') o dB×dB (keep='B')
    """
    m = as_complex_matrix(rho)
    _require_square(m, dA * dB)
    if keep not in SUBSYSTEMS:
        raise ValueError(f"Subsistema '{keep}' no válido, use 'A' o 'B'")
    t = m.reshape(m.shape[:-2] + (dA, dB, dA, dB))
    if keep == 'A':
        return np.einsum('...ijkj->...ik', t)
    return np.einsum('...ijil->...jl', t)


def partial_transpose_B(rho, dA: int, dB: int) -> np.ndarray:
    """Traspuesta parcial sobre el subsistema B (involutiva, sin redondeo)."""
    m = as_complex_matrix(rho)
    _require_square(m, dA * dB)
    t = m.reshape(m.shape[:-2] + (dA, dB, dA, dB))
    t = np.swapaxes(t, -3, -1)
    return np.ascontiguousarray(t).reshape(m.shape)


def hermitian_residual(h: np.ndarray) -> np.ndarray:
    """‖H − H†‖_F relativo a max(1, ‖H‖_F), por elemento de la pila."""
    diff = np.linalg.norm(h - dagger(h), axis=(-2, -1))
    scale = np.maximum(1.0, np.linalg.norm(h, axis=(-2, -1)))
    return diff / scale


def _require_hermitian(h: np.ndarray) -> None:
    residual = np.max(hermitian_residual(h))
    if residual > LINALG_CONFIG['hermitian_tolerance']:
        raise NonHermitianError(f"Matriz no hermítica (residuo relativo {residual:.3e})")


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, floor: np.ndarray) -> None:
    # Rotación compleja que anula a[:, p, q] en toda la pila; |a_pq| ≤ floor cuenta como 0.
    apq = a[:, p, q]
    r = np.abs(apq)
    nonzero = r > floor
    phase = np.ones_like(apq)
    phase[nonzero] = apq[nonzero] / r[nonzero]
    app = a[:, p, p].real.copy()
    aqq = a[:, q, q].real.copy()

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        theta = (aqq - app) / (2.0 * np.where(nonzero, r, 1.0))
        huge = np.abs(theta) > 1e150
        t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
        t = np.where(huge, 0.5 / np.where(huge, theta, 1.0), t)
    t = np.where(nonzero, t, 0.0)
    r = np.where(nonzero, r, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    c_ = c[:, None]
    s_ = s[:, None]
    ph = phase[:, None]
    phc = np.conj(ph)

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = c_ * col_p - s_ * phc * col_q
    a[:, :, q] = s_ * col_p + c_ * phc * col_q

    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = c_ * row_p - s_ * ph * row_q
    a[:, q, :] = s_ * row_p + c_ * ph * row_q

    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    a[:, p, p] = app - t * r
    a[:, q, q] = aqq + t * r

    vec_p = v[:, :, p].copy()
    vec_q = v[:, :, q].copy()
    v[:, :, p] = c_ * vec_p - s_ * phc * vec_q
    v[:, :, q] = s_ * vec_p + c_ * phc * vec_q


def _cyclic_jacobi(a: np.ndarray, tolerance: float, max_sweeps: int) -> Tuple[np.ndarray, np.ndarray]:
    count, n = a.shape[0], a.shape[-1]
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (count, n, n)).copy()
    if n == 1:
        return a[:, :, 0].real.copy(), v

    scale = np.maximum(1.0, np.linalg.norm(a, axis=(1, 2)))
    floor = np.finfo(float).tiny * scale
    off_mask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for sweep in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(a[:, off_mask]) ** 2, axis=1))
        if not np.all(np.isfinite(off)):
            raise ConvergenceError(f"Jacobi produjo valores no finitos en el barrido {sweep}")
        # Los miembros ya convergidos de la pila no se vuelven a rotar
        active = np.flatnonzero(off > tolerance * scale)
        if active.size == 0:
            break
        if sweep == max_sweeps:
            worst = float(np.max(off / scale))
            raise ConvergenceError(
                f"Jacobi no convergió en {max_sweeps} barridos (norma fuera de diagonal {worst:.3e})"
            )
        sub_a, sub_v = a[active], v[active]
        for p, q in pairs:
            _jacobi_rotate(sub_a, sub_v, p, q, floor[active])
        a[active] = sub_a
        v[active] = sub_v

    return np.real(np.diagonal(a, axis1=1, axis2=2)).copy(), v



def hermitian_eig(h, tolerance: float = None, max_sweeps: int = None) -> HermitianEigenDecomposition:
    """
    Descomposición espectral por Jacobi cíclico.

    Args:
        h: Matriz hermítica o pila (..., n, n)
        tolerance: Umbral de la norma fuera de la diagonal (relativo a max(1, ‖H‖_F))
        max_sweeps: Presupuesto de barridos

    Returns:
        HermitianEigenDecomposition: autovalores descendentes y autovectores en columnas

    Raises:
        NonHermitianError: Si la entrada no es hermítica
        ConvergenceError: Si se agota el presupuesto de barridos
    """
    m = as_complex_matrix(h)
    _require_square(m)
    _require_hermitian(m)
    tolerance = LINALG_CONFIG['jacobi_tolerance'] if tolerance is None else tolerance
    max_sweeps = LINALG_CONFIG['jacobi_max_sweeps'] if max_sweeps is None else max_sweeps

    batch_shape = m.shape[:-2]
    n = m.shape[-1]
    work = (0.5 * (m + dagger(m))).reshape((-1, n, n)).copy()
    values, vectors = _cyclic_jacobi(work, tolerance, max_sweeps)

    order = np.argsort(-values, axis=-1, kind='stable')
    values = np.take_along_axis(values, order, axis=-1)
    vectors = np.take_along_axis(vectors, order[:, None, :], axis=-1)
    return HermitianEigenDecomposition(
        eigenvalues=values.reshape(batch_shape + (n,)),
        eigenvectors=vectors.reshape(batch_shape + (n, n)),
    )


def hermitian_eigenvalues(h) -> np.ndarray:
    """Autovalores descendentes de una matriz (o pila) hermítica."""
    return hermitian_eig(h).eigenvalues


def psd_sqrt(h) -> np.ndarray:
    """
    Raíz cuadrada hermítica semidefinida positiva.

    Raises:
        NonPhysicalStateError: Si algún autovalor es menor que −psd_clip
    """
    decomposition = hermitian_eig(h)
    values = decomposition.eigenvalues
    clip = LINALG_CONFIG['psd_clip']
    lowest = float(np.min(values))
    if lowest < -clip:
        raise NonPhysicalStateError(f"Autovalor negativo {lowest:.3e} en raíz semidefinida")
    root = np.sqrt(np.clip(values, 0.0, None))
    v = decomposition.eigenvectors
    return (v * root[..., None, :]) @ dagger(v)


def trace_norm_hermitian(h) -> Union[float, np.ndarray]:
    """Norma traza de una matriz hermítica: suma de |autovalores|."""
    norm = np.sum(np.abs(hermitian_eigenvalues(h)), axis=-1)
    return float(norm) if np.ndim(norm) == 0 else norm


def real_trace(m: np.ndarray) -> Union[float, np.ndarray]:
    """Traza con verificación de que la parte imaginaria es despreciable."""
    value = np.trace(m, axis1=-2, axis2=-1)
    scale = np.maximum(1.0, np.abs(value))
    residue = float(np.max(np.abs(value.imag) / scale))
    if residue > LINALG_CONFIG['imaginary_tolerance']:
        raise ValueError(f"Traza con parte imaginaria {residue:.3e}")
    real = np.real(value)
    return float(real) if np.ndim(real) == 0 else real


def require_density_matrix(rho, tolerance: float = 1e-10) -> np.ndarray:
    """
    Valida una matriz densidad (o pila): hermítica, semidefinida y de traza 1.

    Raises:
        NonPhysicalStateError: Si falla alguna de las tres condiciones
    """
    m = as_complex_matrix(rho)
    _require_square(m)
    if np.max(hermitian_residual(m)) > tolerance:
        raise NonPhysicalStateError("La matriz densidad no es hermítica")
    trace = np.trace(m, axis1=-2, axis2=-1)
    if np.max(np.abs(trace - 1.0)) > tolerance:
        raise NonPhysicalStateError(f"Traza distinta de 1: {np.max(np.abs(trace - 1.0)):.3e}")
    lowest = float(np.min(hermitian_eigenvalues(m)))
    if lowest < -tolerance:
        raise NonPhysicalStateError(f"Autovalor negativo {lowest:.3e} en la matriz densidad")
    return m


def purity(rho) -> Union[float, np.ndarray]:
    """Tr(ρ²) (parte real; el residuo imaginario debe ser < 1e-12)."""
    m = as_complex_matrix(rho)
    _require_square(m)
    return real_trace(m @ m)


@lru_cache(maxsize=None)
def _swap_permutation(d: int, which: str) -> np.ndarray:
    identity = np.eye(d ** 4, dtype=np.complex128).reshape((d,) * 8)
    if which == "AA'":
        axes = (2, 1, 0, 3)
    elif which == "BB'":
        axes = (0, 3, 2, 1)
    else:
        axes = (2, 3, 0, 1)
    swap = identity.transpose(axes + (4, 5, 6, 7)).reshape(d ** 4, d ** 4)
    swap = np.ascontiguousarray(swap)
    swap.setflags(write=False)
    return swap


def swap_operator(d: int, which: str) -> np.ndarray:
    """
    Operador de intercambio sobre (C^d ⊗ C^d)^{⊗2} ordenado como A, B, A', B'.

    Args:
        d: Dimensión local
        which: "AA'", "BB'" o 'both' (S_AA'·S_BB')

    Returns:
        np.ndarray: Matriz de permutación de solo lectura
    """
    if which not in SWAP_PAIRS:
        raise ValueError(f"Par de intercambio '{which}' no válido, opciones: {SWAP_PAIRS}")
    if d < 1:
        raise DimensionError(f"Dimensión local inválida: {d}")
    return _swap_permutation(int(d), which)
