"""Protocol parameterizations and their entanglement-based covariance matrices.

Two families are implemented.

The *asymmetric* protocol prepares squeezed states modulated in the
squeezed quadrature (here always x); its entanglement-based picture is an
EPR source of variance mu with an auxiliary squeezer r on the outgoing
mode.  The choice ``v_sig + v_sqz = 1`` makes the outgoing x ensemble shot
noise and eliminates the leaked information in a pure-loss channel.

The *heralding* protocol symmetrizes this: two independently modulated
squeezed ensembles (one in x, one in p) interfere on a balanced
beamsplitter, one output is homodyned locally, and the other is sent to
Bob.  The three-mode covariance matrix after the channel and the heralding
x-homodyne is available both in closed form and through an independent
construction from elementary Gaussian operations; the two are held equal
by tests and by the ``validate`` self-checks.

The comparison protocols (squeezed-state/homodyne with switching and
no-switching coherent/heterodyne) share one covariance matrix, an EPR
state of variance V through the symmetric channel; they differ only in
the measurements applied to it downstream.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from . import gaussian
from .gaussian import CovarianceMatrix, Quadrature
from .params import ChannelParams, EbParams, PmParams

__all__ = [
    "PmParams",
    "EbParams",
    "ChannelParams",
    "ProtocolKind",
    "pm_to_eb",
    "eb_to_pm",
    "asym_input_cm",
    "asym_channel_cm",
    "zero_leakage_asym",
    "zero_leakage_heralding",
    "zero_leakage_heralding_inverse",
    "heralding_cm_closed_form",
    "heralding_cm_pipeline",
    "heralded_bob_cm",
    "heralded_effective_pm",
    "comparison_cm",
]


class ProtocolKind(Enum):
    """The supported protocol families."""

    ASYMMETRIC = "asym"
    HERALDING = "heralding"
    SQUEEZED_HOMODYNE = "squeezed-homodyne"
    COHERENT_HETERODYNE = "coherent-heterodyne"


def pm_to_eb(pm: PmParams) -> EbParams:
    """Entanglement-based parameters equivalent to a PM preparation.

    ``mu = sqrt(1 + v_sig/v_sqz)`` and
    ``r = -(1/2) ln(sqrt(v_sqz*(v_sqz + v_sig)))``.
    """
    mu = math.sqrt(1.0 + pm.v_sig / pm.v_sqz)
    r = -0.5 * math.log(math.sqrt(pm.v_sqz * (pm.v_sqz + pm.v_sig)))
    return EbParams(mu=mu, r=r)


def eb_to_pm(eb: EbParams) -> PmParams:
    """PM parameters realizing an EB source; inverse of :func:`pm_to_eb`.

    With ``V = exp(-2r)``: ``v_sqz = V/mu`` and ``v_sig = mu*V - v_sqz``.
    Rejects EB points whose PM realization would need ``v_sig < 0`` or an
    out-of-range ``v_sqz``.
    """
    v = math.exp(-2.0 * eb.r)
    v_sqz = v / eb.mu
    v_sig = eb.mu * v - v_sqz
    if v_sig < 0.0:
        raise ValueError(f"EB point {eb} has no PM realization (v_sig < 0)")
    return PmParams(v_sig=v_sig, v_sqz=v_sqz)


def asym_input_cm(eb: EbParams) -> CovarianceMatrix:
    """Two-mode state of the asymmetric protocol before the channel.

    Equals ``two_mode_squeezed(mu)`` with the outgoing mode squeezed by r.
    """
    mu, r = eb.mu, eb.r
    c = math.sqrt(mu * mu - 1.0)
    cx = math.exp(-r) * c
    cp = -math.exp(r) * c
    m = np.array(
        [
            [mu, 0.0, cx, 0.0],
            [0.0, mu, 0.0, cp],
            [cx, 0.0, mu * math.exp(-2.0 * r), 0.0],
            [0.0, cp, 0.0, mu * math.exp(2.0 * r)],
        ]
    )
    return CovarianceMatrix(m)


def _asym_channel_entries(eb: EbParams, ch: ChannelParams):
    mu, r = eb.mu, eb.r
    c = mu * mu - 1.0
    cx = math.sqrt(ch.t_x * math.exp(-2.0 * r) * c)
    cp = -math.sqrt(ch.t_p * math.exp(2.0 * r) * c)
    vx = ch.t_x * (math.exp(-2.0 * r) * mu + ch.xi_x) + 1.0 - ch.t_x
    vp = ch.t_p * (math.exp(2.0 * r) * mu + ch.xi_p) + 1.0 - ch.t_p
    return cx, cp, vx, vp


def asym_channel_cm(eb: EbParams, ch: ChannelParams) -> CovarianceMatrix:
    """Asymmetric-protocol state after the per-quadrature channel.

    Closed form of ``thermal_loss_channel(asym_input_cm(eb), mode 1, ch)``:
    correlations ``c_x = sqrt(t_x exp(-2r) (mu^2-1))``,
    ``c_p = -sqrt(t_p exp(2r) (mu^2-1))`` and Bob variances
    ``t*(exp(-/+2r) mu + xi) + 1 - t``.
    """
    mu = eb.mu
    cx, cp, vx, vp = _asym_channel_entries(eb, ch)
    m = np.array(
        [
            [mu, 0.0, cx, 0.0],
            [0.0, mu, 0.0, cp],
            [cx, 0.0, vx, 0.0],
            [0.0, cp, 0.0, vp],
        ]
    )
    return CovarianceMatrix(m)


def zero_leakage_asym(v_sqz: float) -> float:
    """Modulation that decouples the eavesdropper in a pure-loss channel.

    The prepared x ensemble must be shot noise: ``v_sig = 1 - v_sqz``.
    """
    if not 0.0 < v_sqz <= 1.0:
        raise ValueError(
            f"no non-negative modulation satisfies the shot-noise condition for v_sqz={v_sqz!r}"
        )
    return 1.0 - v_sqz


def zero_leakage_heralding(v_sqz: float) -> float:
    """Modulation that zeroes the heralded protocol's leakage in pure loss.

    ``v_sig = (v_sqz^2 - 2 v_sqz + 1) / (2 - v_sqz)``, valid on (0, 2).
    """
    if not 0.0 < v_sqz < 2.0:
        raise ValueError(f"v_sqz must lie in (0, 2), got {v_sqz!r}")
    return (v_sqz * v_sqz - 2.0 * v_sqz + 1.0) / (2.0 - v_sqz)


def zero_leakage_heralding_inverse(v_sig: float) -> tuple[float, float]:
    """Both squeezing variances achieving zero heralded leakage.

    Roots of ``v_sqz^2 + (v_sig - 2) v_sqz + (1 - 2 v_sig) = 0``, smaller
    (squeezing branch) first.  The discriminant ``v_sig*(v_sig + 4)`` is
    non-negative for any admissible modulation.
    """
    if not math.isfinite(v_sig) or v_sig < 0.0:
        raise ValueError(f"v_sig must be >= 0, got {v_sig!r}")
    disc = v_sig * (v_sig + 4.0)
    if disc < 0.0:
        raise ValueError(f"no real squeezing solutions for v_sig={v_sig!r}")
    root = math.sqrt(disc)
    lo = 0.5 * (2.0 - v_sig - root)
    hi = 0.5 * (2.0 - v_sig + root)
    return lo, hi


def _herald_entries(eb: EbParams, t: float, xi: float):
    mu, r = eb.mu, eb.r
    e2r = math.exp(2.0 * r)
    e4r = math.exp(4.0 * r)
    sq = math.sqrt(mu * mu - 1.0)
    den = e4r + 1.0
    a1 = (e4r * mu * mu + 1.0) / (mu * den)
    a2 = (mu * mu + e4r) / (mu * den)
    b1 = (e4r - t + t * xi - t * e4r + t * xi * e4r + 2.0 * t * mu * e2r + 1.0) / den
    b2 = t * xi - t + 0.5 * t * mu * (e2r + 1.0 / e2r) + 1.0
    c1 = e2r * (mu * mu - 1.0) / (mu * den)
    s2t = math.sqrt(2.0 * t)
    c2 = s2t * math.exp(3.0 * r) * sq / den
    c3 = -0.5 * s2t * math.exp(r) * sq
    c4 = s2t * math.exp(r) * sq / den
    c5 = -0.5 * s2t * math.exp(-r) * sq
    return a1, a2, b1, b2, c1, c2, c3, c4, c5


def heralding_cm_closed_form(eb: EbParams, t: float, xi: float) -> CovarianceMatrix:
    """Heralded three-mode state (A1, A2, B) in closed form.

    The state after the symmetric channel ``(t, xi)`` on Bob's mode *and*
    after the heralding x-homodyne of the local beamsplitter output.
    """
    _validate_symmetric_channel(t, xi)
    mu = eb.mu
    a1, a2, b1, b2, c1, c2, c3, c4, c5 = _herald_entries(eb, t, xi)
    m = np.array(
        [
            [a1, 0.0, c1, 0.0, c2, 0.0],
            [0.0, mu, 0.0, 0.0, 0.0, c3],
            [c1, 0.0, a2, 0.0, c4, 0.0],
            [0.0, 0.0, 0.0, mu, 0.0, c5],
            [c2, 0.0, c4, 0.0, b1, 0.0],
            [0.0, c3, 0.0, c5, 0.0, b2],
        ]
    )
    return CovarianceMatrix(m)


def heralding_cm_pipeline(eb: EbParams, t: float, xi: float) -> CovarianceMatrix:
    """Heralded three-mode state built from elementary Gaussian operations.

    Independent of the closed form: two EPR pairs; the mode bound for Bob
    is squeezed in x by r and the mode to be heralded on is squeezed in p
    by the same amount; the two meet on a balanced beamsplitter (Bob's mode
    at the first port); Bob's output passes the channel; the other output
    is x-homodyned.  Serves as the oracle for the closed form.
    """
    _validate_symmetric_channel(t, xi)
    # modes: 0 = A1, 1 = B precursor, 2 = A2, 3 = herald precursor
    state = gaussian.product_state(
        gaussian.two_mode_squeezed(eb.mu), gaussian.two_mode_squeezed(eb.mu)
    )
    state = gaussian.apply_squeezer(state, 1, eb.r)
    state = gaussian.apply_squeezer(state, 3, -eb.r)
    state = gaussian.apply_beamsplitter(state, 1, 3, 0.5)
    state = gaussian.thermal_loss_channel(state, 1, ChannelParams.symmetric(t, xi))
    state = gaussian.condition_homodyne(state, 3, Quadrature.X)
    # remaining order (A1, B, A2) -> (A1, A2, B)
    return gaussian.partial_state(state, [0, 2, 1])


def heralded_bob_cm(eb: EbParams, t: float, xi: float) -> CovarianceMatrix:
    """Bob's single-mode state after the channel and the heralding homodyne."""
    _validate_symmetric_channel(t, xi)
    _, _, b1, b2, *_ = _herald_entries(eb, t, xi)
    return CovarianceMatrix(np.diag([b1, b2]))


def heralded_effective_pm(pm: PmParams) -> PmParams:
    """PM parameters of the ensemble the heralding scheme delivers to Bob.

    Conditioned on the heralding homodyne (no channel), Bob's x ensemble
    has total variance ``mu/cosh(2r)`` and, given also the modulation
    measurement, squeezing variance ``2 mu e^{2r} / (mu^2 e^{4r} + 1)``.
    The heralded ensemble is exactly an asymmetric-protocol preparation
    with these parameters; the zero-leakage condition maps onto the
    shot-noise condition ``v_sig + v_sqz = 1``.
    """
    eb = pm_to_eb(pm)
    e2r = math.exp(2.0 * eb.r)
    e4r = e2r * e2r
    total = 2.0 * eb.mu * e2r / (e4r + 1.0)
    v_sqz = 2.0 * eb.mu * e2r / (eb.mu * eb.mu * e4r + 1.0)
    return PmParams(v_sig=total - v_sqz, v_sqz=v_sqz)


def comparison_cm(kind: ProtocolKind, v: float, t: float, xi: float) -> CovarianceMatrix:
    """Shared EB state of the comparison protocols.

    EPR state of variance V with Bob's mode through the symmetric channel;
    the squeezed-homodyne and coherent-heterodyne protocols differ only in
    the measurements applied to it.
    """
    if kind not in (ProtocolKind.SQUEEZED_HOMODYNE, ProtocolKind.COHERENT_HETERODYNE):
        raise ValueError(f"no comparison covariance matrix for {kind}")
    if not math.isfinite(v) or v < 1.0:
        raise ValueError(f"modulation variance V must be >= 1, got {v!r}")
    _validate_symmetric_channel(t, xi)
    return gaussian.thermal_loss_channel(
        gaussian.two_mode_squeezed(v), 1, ChannelParams.symmetric(t, xi)
    )


def _validate_symmetric_channel(t: float, xi: float):
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {t!r}")
    if not xi >= 0.0:
        raise ValueError(f"excess noise must be >= 0, got {xi!r}")
