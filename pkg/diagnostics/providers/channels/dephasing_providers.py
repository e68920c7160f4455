from typing import Dict

from diagnostics.config import GRID_CONFIG
from diagnostics.tools import reference_curves as curves
from .channel_algebra import identity_channel
from .channel_family_provider import ChannelFamilyProvider
from .channel_zoo import correlated_dephasing, local_phase_flip, phase_damping
from .kraus_channel import KrausChannel


class IdentityProvider(ChannelFamilyProvider):
    name = 'identity'
    parameter = 'x'
    description = 'Canal identidad (el parámetro se ignora)'
    default_grid = GRID_CONFIG['unit']
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        return identity_channel(2, 2)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        return {'f_avg': 1.0, 'f_prod': 1.0, 'chi_F': 0.0, 'e_C': 0.0, 'e_N': 0.0, 'e_L': 0.0}


class CorrelatedDephasingProvider(ChannelFamilyProvider):
    name = 'correlated-dephasing'
    parameter = 'gamma'
    description = 'Mezcla de I y Z⊗Z con probabilidad γ'
    default_grid = GRID_CONFIG['unit']
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        return correlated_dephasing(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        return {
            'f_avg': curves.correlated_dephasing_f_avg(value),
            'f_prod': curves.correlated_dephasing_f_prod(value),
            'chi_F': curves.correlated_dephasing_chi_F(value),
            'e_C': 0.0,
            'e_N': 0.0,
            'e_L': curves.correlated_dephasing_e_L(value),
        }


class LocalPhaseFlipProvider(ChannelFamilyProvider):
    name = 'local-phase-flip'
    parameter = 'gamma'
    description = 'Inversión de fase independiente en cada qubit'
    default_grid = GRID_CONFIG['unit']
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        return local_phase_flip(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        return {
            'chi_F': curves.local_phase_flip_chi_F(value),
            'e_C': 0.0,
            'e_N': 0.0,
            'e_L': curves.local_phase_flip_e_L(value),
        }


class PhaseDampingProvider(ChannelFamilyProvider):
    name = 'phase-damping'
    parameter = 't'
    unit = 'time'
    description = 'Desfase de dos qubits con u(t) = exp(−Γt²/2)'
    default_grid = GRID_CONFIG['t']
    default_options = {'Gamma': 1.0}
    separable = True

    def build(self, value: float, **options) -> KrausChannel:
        opts = self.resolve_options(options)
        return phase_damping(opts['Gamma'], value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        opts = self.resolve_options(options)
        gamma = (1.0 - curves.phase_damping_u(opts['Gamma'], value)) / 2.0
        return {
            'f_avg': curves.correlated_dephasing_f_avg(gamma),
            'f_prod': curves.correlated_dephasing_f_prod(gamma),
            'chi_F': curves.correlated_dephasing_chi_F(gamma),
            'e_C': 0.0,
            'e_N': 0.0,
            'e_L': curves.phase_damping_e_L(opts['Gamma'], value),
        }
