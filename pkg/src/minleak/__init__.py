"""Key rates and eavesdropper bounds for minimum-leakage CV QKD protocols.

The package computes asymptotic secret key rates for continuous-variable
quantum key distribution protocols built around squeezed states that are
modulated in a single quadrature, including the heralded symmetrization of
that idea, together with the attack models that bound the eavesdropper's
information when the unmodulated quadrature is only partially known.
"""

from ._version import __version__
from . import backend, gaussian, params, protocols, security, selfcheck, sweeps
from .gaussian import CovarianceMatrix, Quadrature
from .params import ChannelParams, EbParams, PmParams
from .protocols import ProtocolKind
from .security import AttackModel, KeyRateResult

__all__ = [
    "__version__",
    "backend",
    "gaussian",
    "params",
    "protocols",
    "security",
    "selfcheck",
    "sweeps",
    "CovarianceMatrix",
    "Quadrature",
    "ChannelParams",
    "EbParams",
    "PmParams",
    "ProtocolKind",
    "AttackModel",
    "KeyRateResult",
]
