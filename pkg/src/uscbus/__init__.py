"""Quantum state transfer through a d-level interconnect in the ultrastrong
coupling regime: QB and CTAP protocols, channel capacity and leakage."""

from .backend import BACKEND
from .channel import (ChannelResult, LeakageResult, apply_channel, choi_matrix,
                      coherent_information_unpolarized, leakage,
                      von_neumann_entropy)
from .dynamics import (IntegrationError, IntegratorOptions, NumericError,
                       PropagationResult, propagate, propagate_unitary)
from .hilbert import HilbertLayout, StateVector, basis_state
from .model import PulseSchedule, SystemConfig

__all__ = [
    "BACKEND", "ChannelResult", "LeakageResult", "apply_channel", "choi_matrix",
    "coherent_information_unpolarized", "leakage", "von_neumann_entropy",
    "IntegrationError", "IntegratorOptions", "NumericError", "PropagationResult",
    "propagate", "propagate_unitary", "HilbertLayout", "StateVector",
    "basis_state", "PulseSchedule", "SystemConfig",
]
