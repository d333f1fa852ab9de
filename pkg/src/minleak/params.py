"""Protocol and channel parameter types.

All variances are in shot-noise units (vacuum variance = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PmParams:
    """Prepare-and-measure parameterization.

    Attributes
    ----------
    v_sig : float
        Modulation variance of the Gaussian displacement alphabet.
    v_sqz : float
        Variance of the squeezed quadrature of the prepared states.
        Values in (0, 1] describe squeezing; values in (1, 2) are the
        antisqueezing branch of the heralded zero-leakage condition.
    """

    v_sig: float
    v_sqz: float

    def __post_init__(self):
        if not math.isfinite(self.v_sig) or self.v_sig < 0.0:
            raise ValueError(f"v_sig must be a finite value >= 0, got {self.v_sig!r}")
        if not math.isfinite(self.v_sqz) or not 0.0 < self.v_sqz < 2.0:
            raise ValueError(f"v_sqz must lie in (0, 2), got {self.v_sqz!r}")


@dataclass(frozen=True)
class EbParams:
    """Entanglement-based parameterization.

    Attributes
    ----------
    mu : float
        Variance of the EPR (two-mode squeezed vacuum) source, >= 1.
    r : float
        Auxiliary squeezing parameter applied to the outgoing mode;
        positive r squeezes x.
    """

    mu: float
    r: float

    def __post_init__(self):
        if not math.isfinite(self.mu) or self.mu < 1.0:
            raise ValueError(f"mu must be a finite value >= 1, got {self.mu!r}")
        if not math.isfinite(self.r):
            raise ValueError(f"r must be finite, got {self.r!r}")


@dataclass(frozen=True)
class ChannelParams:
    """Per-quadrature thermal-loss channel.

    Transmittances ``t_x, t_p`` lie in [0, 1]; excess noise ``xi_x, xi_p``
    is non-negative and referred to the channel input, so a quadrature
    variance v maps to ``T*(v + xi) + 1 - T``.
    """

    t_x: float
    t_p: float
    xi_x: float
    xi_p: float

    def __post_init__(self):
        for name in ("t_x", "t_p"):
            t = getattr(self, name)
            if not math.isfinite(t) or not 0.0 <= t <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {t!r}")
        for name in ("xi_x", "xi_p"):
            xi = getattr(self, name)
            if not math.isfinite(xi) or xi < 0.0:
                raise ValueError(f"{name} must be >= 0, got {xi!r}")

    @classmethod
    def symmetric(cls, t: float, xi: float) -> "ChannelParams":
        """Channel with equal loss and noise in both quadratures."""
        return cls(t_x=t, t_p=t, xi_x=xi, xi_p=xi)

    @property
    def is_symmetric(self) -> bool:
        return self.t_x == self.t_p and self.xi_x == self.xi_p
