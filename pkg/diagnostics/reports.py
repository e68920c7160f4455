"""
Informe de diagnósticos de un canal: resultados escalares con nombre.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.sampling import MonteCarloEstimate


@dataclass(frozen=True)
class DiagnosticEntry:
    """Resultado escalar; stderr, n y seed solo existen para estimaciones Monte Carlo."""
    name: str
    value: float
    stderr: Optional[float] = None
    n: Optional[int] = None
    seed: Optional[int] = None

    def as_dict(self) -> Dict[str, Any]:
        data = {'name': self.name, 'value': self.value}
        if self.stderr is not None:
            data.update({'stderr': self.stderr, 'n': self.n, 'seed': self.seed})
        return data


@dataclass
class DiagnosticsReport:
    """Resultados con nombre para un par canal/diagnóstico."""
    channel: str
    entries: List[DiagnosticEntry] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add_analytic(self, name: str, value: float) -> 'DiagnosticsReport':
        self.entries.append(DiagnosticEntry(name=name, value=float(value)))
        return self

    def add_estimate(self, name: str, estimate: MonteCarloEstimate) -> 'DiagnosticsReport':
        self.entries.append(DiagnosticEntry(
            name=name,
            value=float(estimate.mean),
            stderr=float(estimate.stderr),
            n=estimate.n,
            seed=estimate.seed,
        ))
        return self

    def get(self, name: str) -> DiagnosticEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(f"Diagnóstico '{name}' no encontrado. Disponibles: {[e.name for e in self.entries]}")

    def as_dict(self) -> Dict[str, Any]:
        return {
            'channel': self.channel,
            'diagnostics': [entry.as_dict() for entry in self.entries],
            'metadata': dict(self.metadata),
        }
