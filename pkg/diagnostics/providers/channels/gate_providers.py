import math
from typing import Dict

from core.sampling import SampleStream, haar_unitary
from diagnostics.config import GRID_CONFIG
from diagnostics.tools import reference_curves as curves
from .channel_family_provider import ChannelFamilyProvider
from .channel_zoo import controlled_phase, cz_correlated_dephasing, cz_phase_damping, mixed_unitary
from .kraus_channel import KrausChannel


class ControlledPhaseProvider(ChannelFamilyProvider):
    name = 'controlled-phase'
    parameter = 'phi'
    unit = 'rad'
    description = 'Puerta unitaria CP(φ) = diag(1, 1, 1, e^{iφ})'
    default_grid = GRID_CONFIG['phi']

    def build(self, value: float, **options) -> KrausChannel:
        return controlled_phase(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        c = math.cos(value)
        return {
            'f_avg': (14.0 + 6.0 * c) / 20.0,
            'f_prod': (26.0 + 10.0 * c) / 36.0,
            'chi_F': curves.controlled_phase_chi_F(value),
            'e_C': curves.controlled_phase_e_C(value),
            'e_N': curves.controlled_phase_e_N(value),
            'e_L': curves.controlled_phase_e_L(value),
        }


class CZCorrelatedDephasingProvider(ChannelFamilyProvider):
    name = 'cz-correlated-dephasing'
    parameter = 'u'
    description = 'CZ ideal seguida de desfase correlacionado de parámetro u'
    default_grid = GRID_CONFIG['unit']

    def build(self, value: float, **options) -> KrausChannel:
        return cz_correlated_dephasing(value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        return {
            'e_C': curves.noisy_cz_e_C(value),
            'e_L': curves.noisy_cz_e_L(value),
        }


class CZPhaseDampingProvider(ChannelFamilyProvider):
    name = 'cz-phase-damping'
    parameter = 't'
    unit = 'time'
    description = 'CZ generada con acoplamiento g bajo desfase Γ'
    default_grid = GRID_CONFIG['t']
    default_options = {'g': 1.5, 'Gamma': 1.0}

    def build(self, value: float, **options) -> KrausChannel:
        opts = self.resolve_options(options)
        return cz_phase_damping(opts['g'], opts['Gamma'], value)

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        opts = self.resolve_options(options)
        return {'e_C': curves.cz_phase_damping_e_C(opts['g'], opts['Gamma'], value)}


class MixedUnitaryProvider(ChannelFamilyProvider):
    name = 'mixed-unitary'
    parameter = 'p'
    description = 'Mezcla p·Ad_{U1} + (1−p)·Ad_{U2} con U1, U2 de Haar sembradas'
    default_grid = GRID_CONFIG['unit']
    default_options = {'unitary_seed': 7.0}

    def build(self, value: float, **options) -> KrausChannel:
        opts = self.resolve_options(options)
        stream = SampleStream(seed=int(opts['unitary_seed']))
        u1 = haar_unitary(4, stream.child(1))
        u2 = haar_unitary(4, stream.child(2))
        return mixed_unitary(value, u1, u2)
