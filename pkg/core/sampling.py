"""
Muestreo reproducible respecto a la medida de Haar.

Las corrientes de muestras (SampleStream) son valores: la semilla y el
identificador de corriente forman la clave de un generador Philox basado en
contador, y cada bloque Monte Carlo usa su propio contador. Así un estimador
con n muestras produce exactamente los mismos bloques en serie o en un pool
de procesos, y la fusión ordenada de los parciales es idéntica bit a bit.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from core.config import SAMPLING_CONFIG
from core.exceptions import DimensionError, ParameterDomainError

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SampleStream:
    """
    Corriente de números aleatorios direccionable.

    Attributes:
        seed: Semilla de 64 bits
        stream_id: Identificador de corriente de 64 bits
        counter: Índice de bloque (palabra alta del contador Philox)
    """
    seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self):
        for name in ('seed', 'stream_id', 'counter'):
            value = getattr(self, name)
            if value < 0 or value > _MASK64:
                raise ValueError(f"{name} fuera del rango de 64 bits: {value}")

    def generator(self) -> np.random.Generator:
        """Generador numpy para esta posición de la corriente."""
        key = (self.stream_id << 64) | self.seed
        bit_generator = np.random.Philox(key=key, counter=self.counter << 192)
        return np.random.Generator(bit_generator)

    def child(self, index: int) -> 'SampleStream':
        """Corriente hija independiente (p. ej. un punto de la rejilla o un diagnóstico)."""
        derived = _splitmix64(self.stream_id ^ _splitmix64(int(index) + 1))
        return SampleStream(seed=self.seed, stream_id=derived, counter=0)

    def block(self, index: int) -> 'SampleStream':
        """Misma corriente desplazada al bloque `index`."""
        return SampleStream(seed=self.seed, stream_id=self.stream_id, counter=int(index))

    def split(self, count: int) -> List['SampleStream']:
        """Divide la corriente en `count` hijas independientes."""
        return [self.child(i) for i in range(count)]


@dataclass(frozen=True)
class SchmidtOrbit:
    """
    Órbita local-unitaria de un vector de Schmidt.

    Attributes:
        coefficients: Coeficientes de Schmidt λ_i (suman 1)
    """
    coefficients: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(x) for x in self.coefficients)
        if len(values) < 1:
            raise ParameterDomainError("El vector de Schmidt no puede estar vacío")
        tolerance = SAMPLING_CONFIG['schmidt_tolerance']
        if any(x < -tolerance or x > 1.0 + tolerance for x in values):
            raise ParameterDomainError(f"Coeficientes de Schmidt fuera de [0, 1]: {values}")
        if abs(math.fsum(values) - 1.0) > tolerance:
            raise ParameterDomainError(f"Los coeficientes de Schmidt no suman 1: {values}")
        object.__setattr__(self, 'coefficients', tuple(min(max(x, 0.0), 1.0) for x in values))

    @classmethod
    def from_theta(cls, theta: float) -> 'SchmidtOrbit':
        """Órbita de dos qubits cos θ|00⟩ + sin θ|11⟩, θ ∈ [0, π/4]."""
        if theta < -1e-15 or theta > math.pi / 4 + 1e-15:
            raise ParameterDomainError(f"θ = {theta} fuera de [0, π/4]")
        return cls((math.cos(theta) ** 2, math.sin(theta) ** 2))

    @classmethod
    def product(cls, d: int) -> 'SchmidtOrbit':
        return cls((1.0,) + (0.0,) * (d - 1))

    @classmethod
    def maximally_entangled(cls, d: int) -> 'SchmidtOrbit':
        return cls((1.0 / d,) * d)

    @property
    def d(self) -> int:
        return len(self.coefficients)

    @property
    def purity(self) -> float:
        """μ = Σ λ_i² (pureza del estado reducido)."""
        return math.fsum(x * x for x in self.coefficients)

    @property
    def theta(self) -> float:
        """Ángulo de Schmidt para dos qubits."""
        if self.d != 2:
            raise DimensionError("El ángulo de Schmidt solo está definido para d = 2")
        return math.asin(math.sqrt(min(self.coefficients)))


def _complex_gaussian(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


def sample_haar_unitaries(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Pila (count, d, d) de unitarias de Haar: Ginibre + QR + corrección de fase de R."""
    if d < 1:
        raise DimensionError(f"Dimensión inválida: {d}")
    ginibre = _complex_gaussian(rng, (count, d, d))
    q, r = np.linalg.qr(ginibre)
    diagonal = np.diagonal(r, axis1=-2, axis2=-1)
    magnitude = np.abs(diagonal)
    phases = np.where(magnitude > 0.0, diagonal / np.where(magnitude > 0.0, magnitude, 1.0), 1.0)
    return q * phases[:, None, :]


def sample_haar_states(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Pila (count, d) de estados puros de Haar (gaussiana compleja normalizada)."""
    if d < 1:
        raise DimensionError(f"Dimensión inválida: {d}")
    z = _complex_gaussian(rng, (count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass(frozen=True)
class HaarStateSampler:
    """Estados puros de Haar en C^dim."""
    dim: int

    def __call__(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return sample_haar_states(self.dim, count, rng)


@dataclass(frozen=True)
class ProductStateSampler:
    """Estados producto |ψ_A⟩ ⊗ |ψ_B⟩ con factores de Haar independientes."""
    dA: int
    dB: int

    def __call__(self, count: int, rng: np.random.Generator) -> np.ndarray:
        psi_a = sample_haar_states(self.dA, count, rng)
        psi_b = sample_haar_states(self.dB, count, rng)
        return (psi_a[:, :, None] * psi_b[:, None, :]).reshape(count, self.dA * self.dB)


@dataclass(frozen=True)
class OrbitStateSampler:
    """Estados (U_A ⊗ U_B) Σ √λ_i |ii⟩ con U_A, U_B de Haar independientes."""
    orbit: SchmidtOrbit

    def __call__(self, count: int, rng: np.random.Generator) -> np.ndarray:
        d = self.orbit.d
        u_a = sample_haar_unitaries(d, count, rng)
        u_b = sample_haar_unitaries(d, count, rng)
        weights = np.sqrt(np.asarray(self.orbit.coefficients))
        psi = np.einsum('i,nai,nbi->nab', weights, u_a, u_b)
        return psi.reshape(count, d * d)


def haar_unitary(d: int, stream: SampleStream) -> np.ndarray:
    """Unitaria d×d distribuida según Haar."""
    return sample_haar_unitaries(d, 1, stream.generator())[0]


def haar_pure_state(d: int, stream: SampleStream) -> np.ndarray:
    """Vector columna de norma 1 distribuido según Haar."""
    return sample_haar_states(d, 1, stream.generator()).reshape(d, 1)


def product_state(dA: int, dB: int, stream: SampleStream) -> np.ndarray:
    """Vector columna |ψ_A⟩ ⊗ |ψ_B⟩ con factores de Haar independientes."""
    return ProductStateSampler(dA, dB)(1, stream.generator()).reshape(dA * dB, 1)


def orbit_state(orbit: SchmidtOrbit, stream: SampleStream) -> np.ndarray:
    """Vector columna de la órbita local-unitaria de Σ √λ_i |ii⟩."""
    d = orbit.d
    return OrbitStateSampler(orbit)(1, stream.generator()).reshape(d * d, 1)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """
    Estimación Monte Carlo con error estándar.

    Attributes:
        mean: Media muestral (escalar o arreglo)
        stderr: Desviación poblacional / √n (misma forma que mean)
        n: Número de muestras
        seed, stream_id: Corriente usada
    """
    mean: Any
    stderr: Any
    n: int
    seed: int = 0
    stream_id: int = 0

    def deviation(self, expected) -> Any:
        """|media − esperado| en unidades de error estándar (inf si stderr = 0 y difieren)."""
        diff = np.abs(np.asarray(self.mean) - np.asarray(expected))
        err = np.asarray(self.stderr, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore'):
            sigmas = np.where(err > 0.0, diff / np.where(err > 0.0, err, 1.0),
                              np.where(diff <= 1e-12, 0.0, np.inf))
        return float(sigmas) if np.ndim(sigmas) == 0 else sigmas

    def agrees_with(self, expected, sigmas: float = 3.0, atol: float = 1e-12) -> bool:
        diff = np.abs(np.asarray(self.mean) - np.asarray(expected))
        return bool(np.all(diff <= sigmas * np.asarray(self.stderr) + atol))

    def as_dict(self) -> Dict[str, Any]:
        return {
            'mean': float(self.mean) if np.ndim(self.mean) == 0 else np.asarray(self.mean).tolist(),
            'stderr': float(self.stderr) if np.ndim(self.stderr) == 0 else np.asarray(self.stderr).tolist(),
            'n': self.n,
            'seed': self.seed,
            'stream_id': self.stream_id,
        }


@dataclass(frozen=True)
class _BlockPartial:
    count: int
    mean: Any
    m2: Any


def _block_sizes(n: int, block_size: int) -> List[int]:
    full, rest = divmod(n, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _evaluate_block(task) -> np.ndarray:
    integrand, sampler, size, stream = task
    states = sampler(size, stream.generator())
    return np.asarray(integrand(states))


def _summarize_block(values: np.ndarray) -> _BlockPartial:
    mean = values.mean(axis=0)
    m2 = np.sum(np.abs(values - mean) ** 2, axis=0)
    return _BlockPartial(count=values.shape[0], mean=mean, m2=m2)


def _merge(a: _BlockPartial, b: _BlockPartial) -> _BlockPartial:
    total = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.count / total)
    m2 = a.m2 + b.m2 + np.abs(delta) ** 2 * (a.count * b.count / total)
    return _BlockPartial(count=total, mean=mean, m2=m2)


def _run_blocks(integrand, sampler, n: int, stream: SampleStream,
                workers: int, block_size: Optional[int]) -> List[np.ndarray]:
    if n < SAMPLING_CONFIG['min_samples']:
        raise ValueError(f"Se necesitan al menos {SAMPLING_CONFIG['min_samples']} muestras, se pidieron {n}")
    block_size = block_size or SAMPLING_CONFIG['block_size']
    tasks = [
        (integrand, sampler, size, stream.block(index))
        for index, size in enumerate(_block_sizes(n, block_size))
    ]
    if workers > 1 and len(tasks) > 1:
        logger.debug(f"Evaluando {len(tasks)} bloques en un pool de {workers} procesos")
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_evaluate_block, tasks))
    return [_evaluate_block(task) for task in tasks]


def mc_mean(integrand: Callable[[np.ndarray], np.ndarray],
            sampler: Callable[[int, np.random.Generator], np.ndarray],
            n: int,
            stream: SampleStream,
            workers: int = 1,
            block_size: int = None) -> MonteCarloEstimate:
    """
    Estimador Monte Carlo de la media de un integrando vectorizado.

    Args:
        integrand: Función (count, D) -> (count,) o (count, ...) de valores
        sampler: Función (count, rng) -> estados (count, D)
        n: Número de muestras (n ≥ 2)
        stream: Corriente de muestras
        workers: Procesos del pool (1 = serie; el resultado es idéntico)
        block_size: Muestras por bloque

    Returns:
        MonteCarloEstimate: media y error estándar (desviación poblacional / √n)
    """
    blocks = _run_blocks(integrand, sampler, n, stream, workers, block_size)
    merged = _summarize_block(blocks[0])
    for values in blocks[1:]:
        merged = _merge(merged, _summarize_block(values))
    stderr = np.sqrt(merged.m2 / merged.count) / math.sqrt(merged.count)
    mean = merged.mean
    if np.ndim(mean) == 0:
        mean = mean.item()
        stderr = float(stderr)
    return MonteCarloEstimate(mean=mean, stderr=stderr, n=merged.count,
                              seed=stream.seed, stream_id=stream.stream_id)


def mc_samples(integrand: Callable[[np.ndarray], np.ndarray],
               sampler: Callable[[int, np.random.Generator], np.ndarray],
               n: int,
               stream: SampleStream,
               workers: int = 1,
               block_size: int = None) -> np.ndarray:
    """Valores por muestra del integrando (mismos bloques que mc_mean)."""
    return np.concatenate(_run_blocks(integrand, sampler, n, stream, workers, block_size), axis=0)
