from typing import Dict

from diagnostics.config import GRID_CONFIG
from diagnostics.tools import reference_curves as curves
from .channel_family_provider import ChannelFamilyProvider
from .channel_zoo import global_depolarizing, local_amplitude_damping, local_depolarizing
from .kraus_channel import KrausChannel


class LocalAmplitudeDampingProvider(ChannelFamilyProvider):
    name = 'local-amplitude-damping'
    parameter = 'gamma'
    description = 'Amortiguamiento de amplitud independiente en cada qubit'
    default_grid = GRID_CONFIG['unit']
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        return local_amplitude_damping(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        return {
            'chi_F': curves.amplitude_damping_chi_F(value),
            'e_C': 0.0,
            'e_N': 0.0,
            'e_L': curves.amplitude_damping_e_L(value),
        }


class LocalDepolarizingProvider(ChannelFamilyProvider):
    name = 'local-depolarizing'
    parameter = 'p'
    description = 'Despolarización independiente en cada qubit'
    default_grid = GRID_CONFIG['unit']
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        return local_depolarizing(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        return {
            'chi_F': curves.local_depolarizing_chi_F(value),
            'e_C': 0.0,
            'e_N': 0.0,
            'e_L': curves.local_depolarizing_e_L(value),
        }


class GlobalDepolarizingProvider(ChannelFamilyProvider):
    name = 'global-depolarizing'
    parameter = 'p'
    description = 'Despolarización global ρ ↦ (1−p)ρ + p·I/4'
    default_grid = GRID_CONFIG['unit']
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        return global_depolarizing(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        fidelity = curves.global_depolarizing_f_avg(value)
        return {
            'f_avg': fidelity,
            'f_prod': fidelity,
            'chi_F': 0.0,
            'e_C': 0.0,
            'e_N': 0.0,
            'e_L': curves.local_depolarizing_e_L(value),
        }
