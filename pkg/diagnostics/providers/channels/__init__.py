# Canales bipartitos en forma de Kraus
from .kraus_channel import ChannelReport, KrausChannel
from .channel_algebra import (
    channels_equal,
    compose,
    error_channel,
    identity_channel,
    local_unitary_channel,
    mix,
    product_channel,
    random_local_kraus,
    random_stinespring_channel,
    require_unitary,
    unitary_channel,
)
from .channel_zoo import (
    CZ,
    controlled_phase,
    correlated_dephasing,
    cz_correlated_dephasing,
    cz_phase_damping,
    global_depolarizing,
    local_amplitude_damping,
    local_depolarizing,
    local_phase_flip,
    mixed_unitary,
    phase_damping,
)
from .channel_manager import ChannelManager
