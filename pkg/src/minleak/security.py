"""Holevo information, mutual information, and secret key rates.

Key rates are asymptotic Devetak-Winter rates for collective attacks with
reverse reconciliation, ``K = beta*I_AB - chi_EB``, in bits per channel
use.  The eavesdropper holds the purification of the state shared between
the trusted parties, so ``chi_EB`` is computed from the symplectic spectra
of the joint state and of its conditional state after Bob's homodyne.

For the asymmetric protocol, three eavesdropper models bound ``chi_EB``:

* ``SYMMETRIC`` - the channel is taken symmetric in x and p;
* ``GENERAL`` - only the x-quadrature channel is estimated; Bob's p
  variance takes the value a symmetric channel would give it, the p
  correlation is unknown, and the bound maximizes Eve's information over
  every physical completion of the covariance matrix;
* ``EQUAL_NOISE`` - the excess noise is assumed equal in both quadratures
  and only the p transmittance is unknown; the bound maximizes over it.

Negative key rates are reported as computed; flooring at zero is left to
data emission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import backend
from .gaussian import (
    CovarianceMatrix,
    Quadrature,
    condition_heterodyne,
    condition_homodyne,
    von_neumann_entropy,
)
from .params import PmParams
from .protocols import (
    ProtocolKind,
    comparison_cm,
    heralding_cm_closed_form,
    pm_to_eb,
)

__all__ = [
    "AttackModel",
    "KeyRateResult",
    "holevo",
    "mutual_information_homodyne",
    "devetak_winter",
    "chi_asym_symmetric",
    "chi_asym_general_bound",
    "chi_asym_equal_noise",
    "key_rate_asym",
    "key_rate_heralding",
    "key_rate_comparison",
    "optimize_modulation",
    "plob_bound",
]

#: Holevo values above this negative floor clamp to zero; below it they
#: indicate an inconsistent computation and raise.  The floor absorbs the
#: representation noise of covariance matrices of nearly pure states with
#: large modulation (entries like sqrt(V^2-1) round at the 1e-9 level of
#: the spectrum once V approaches the optimizer cap).
CHI_CLAMP = 1e-8

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class AttackModel(Enum):
    """Eavesdropper-knowledge assumption bounding Eve's information."""

    SYMMETRIC = "symmetric"
    GENERAL = "general"
    EQUAL_NOISE = "equal-noise"


@dataclass(frozen=True)
class KeyRateResult:
    """Mutual information, Holevo bound and key rate at one working point."""

    i_ab: float
    chi_eb: float
    key_rate: float
    beta: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.i_ab < 0.0:
            raise ValueError(f"i_ab must be >= 0, got {self.i_ab!r}")
        if self.chi_eb < 0.0:
            raise ValueError(f"chi_eb must be >= 0 after clamping, got {self.chi_eb!r}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta!r}")
        expected = self.beta * self.i_ab - self.chi_eb
        if abs(self.key_rate - expected) > 1e-12:
            raise ValueError("key_rate does not equal beta*i_ab - chi_eb")


def _clamp_chi(chi: float) -> float:
    if chi < -CHI_CLAMP:
        raise ArithmeticError(
            f"Holevo information {chi!r} is negative beyond numerical noise"
        )
    return max(chi, 0.0)


def _result(i_ab: float, chi: float, beta: float, diagnostics: dict | None = None):
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta!r}")
    i_ab = max(i_ab, 0.0)
    chi = _clamp_chi(chi)
    return KeyRateResult(
        i_ab=i_ab,
        chi_eb=chi,
        key_rate=beta * i_ab - chi,
        beta=beta,
        diagnostics=diagnostics or {},
    )


def holevo(joint: CovarianceMatrix, measured_mode: int, quad: Quadrature) -> float:
    """Eve's information about Bob's homodyne outcome (bits).

    ``S(joint) - S(joint | outcome)`` with Eve holding the purification
    of the joint state.  Never returns NaN; values within numerical noise
    below zero clamp to zero.
    """
    s_joint = von_neumann_entropy(joint)
    s_cond = von_neumann_entropy(condition_homodyne(joint, measured_mode, quad))
    return _clamp_chi(s_joint - s_cond)


def mutual_information_homodyne(v_b: float, v_b_given_a: float) -> float:
    """Shannon mutual information of jointly Gaussian homodyne data (bits)."""
    if v_b_given_a <= 0.0:
        raise ValueError(f"conditional variance must be > 0, got {v_b_given_a!r}")
    ratio = v_b / v_b_given_a
    if ratio < 1.0 - 1e-12:
        raise ValueError(
            f"conditioning cannot increase a variance (ratio {ratio!r} < 1)"
        )
    return max(0.5 * math.log2(max(ratio, 1.0)), 0.0)


def devetak_winter(i_ab: float, chi_eb: float, beta: float) -> float:
    """Asymptotic reverse-reconciliation rate ``beta*i_ab - chi_eb`` (not floored)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta!r}")
    return beta * i_ab - chi_eb


def plob_bound(eta: float) -> float:
    """Repeaterless secret-key capacity of the pure-loss channel (bits/use)."""
    if not 0.0 <= eta < 1.0:
        raise ValueError(f"eta must lie in [0, 1), got {eta!r}")
    return -math.log1p(-eta) / math.log(2.0)


# ---------------------------------------------------------------------------
# asymmetric protocol
# ---------------------------------------------------------------------------


def _asym_x_entries(pm: PmParams, t_x: float, xi_x: float):
    """x-sector entries of the post-channel state plus the EB parameters."""
    eb = pm_to_eb(pm)
    c_x = math.exp(-eb.r) * math.sqrt(t_x * (eb.mu * eb.mu - 1.0))
    v_x = t_x * (math.exp(-2.0 * eb.r) * eb.mu + xi_x) + 1.0 - t_x
    return eb, c_x, v_x


def _conditional_entropy_after_bob_x(mu: float, c_x: float, v_x: float) -> float:
    """Entropy of Alice's mode after Bob homodynes x.

    The conditional matrix is ``diag(mu - c_x^2/v_x, mu)``; it does not
    depend on the p-sector correlations, which is what makes the
    physicality-bound maximization a one-dimensional problem in c_p.
    """
    vx_cond = mu - c_x * c_x / v_x
    return backend.entropy(np.diag([vx_cond, mu]))


def _asym_joint(mu, c_x, v_x, c_p, v_p):
    return np.array(
        [
            [mu, 0.0, c_x, 0.0],
            [0.0, mu, 0.0, c_p],
            [c_x, 0.0, v_x, 0.0],
            [0.0, c_p, 0.0, v_p],
        ]
    )


def _entropy_clamped(matrix: np.ndarray) -> float:
    """Entropy with sub-unit eigenvalues clamped; for feasible-set interiors."""
    return sum(
        backend.g_entropy_unchecked(v) for v in backend.symplectic_eigenvalues(matrix)
    )


def chi_asym_symmetric(pm: PmParams, t: float, xi: float) -> float:
    """Eve's information for the asymmetric protocol, symmetric channel."""
    eb, c_x, v_x = _asym_x_entries(pm, t, xi)
    c_p = -math.exp(eb.r) * math.sqrt(t * (eb.mu * eb.mu - 1.0))
    v_p = t * (math.exp(2.0 * eb.r) * eb.mu + xi) + 1.0 - t
    joint = _asym_joint(eb.mu, c_x, v_x, c_p, v_p)
    s_cond = _conditional_entropy_after_bob_x(eb.mu, c_x, v_x)
    return _clamp_chi(backend.entropy(joint) - s_cond)


def _bisect_feasibility_boundary(feasible_fn, good: float, bad: float, tol: float):
    """Innermost point of a 1-D feasible interval edge, by bisection.

    ``feasible_fn(good)`` must hold and ``feasible_fn(bad)`` must not;
    feasibility is an interval, so the crossing on [good, bad] is unique.
    Returns the last feasible point, within ``tol`` of the boundary.
    """
    while abs(bad - good) > tol:
        mid = 0.5 * (good + bad)
        if feasible_fn(mid):
            good = mid
        else:
            bad = mid
    return good


def _scan_and_refine(objective, lo: float, hi: float, points: int, tol: float):
    """Maximize a smooth 1-D objective: dense scan plus golden-section polish.

    Not assuming unimodality: the scan locates the global basin, the
    golden section only refines between the neighbors of the best sample.
    Returns (argmax, value, evaluations).
    """
    grid = np.linspace(lo, hi, points)
    values = [objective(x) for x in grid]
    evals = points
    best = int(np.argmax(values))
    x_best, f_best = float(grid[best]), values[best]
    a = float(grid[max(best - 1, 0)])
    b = float(grid[min(best + 1, points - 1)])
    if b - a > tol:
        h = b - a
        c = a + _INV_PHI2 * h
        d = a + _INV_PHI * h
        fc, fd = objective(c), objective(d)
        evals += 2
        while h > tol:
            if fc > fd:
                b, d, fd = d, c, fc
                h = b - a
                c = a + _INV_PHI2 * h
                fc = objective(c)
            else:
                a, c, fc = c, d, fd
                h = b - a
                d = a + _INV_PHI * h
                fd = objective(d)
            evals += 1
        for x, f in ((c, fc), (d, fd)):
            if f > f_best:
                x_best, f_best = x, f
    return x_best, f_best, evals


def _general_bound(pm: PmParams, t_x: float, xi_x: float, tol: float):
    eb, c_x, v_x = _asym_x_entries(pm, t_x, xi_x)
    mu = eb.mu
    # simulated experiment: Bob's p variance as a symmetric channel gives it
    v_p = t_x * (math.exp(2.0 * eb.r) * mu + xi_x) + 1.0 - t_x
    c_sym = -math.exp(eb.r) * math.sqrt(t_x * (mu * mu - 1.0))

    def min_symp(c_p):
        return backend.symplectic_eigenvalues(
            _asym_joint(mu, c_x, v_x, c_p, v_p)
        ).min()

    def feasible(c_p):
        return min_symp(c_p) >= 1.0 - tol

    if not feasible(c_sym):
        raise ArithmeticError(
            "empty feasible set: the symmetric-channel point itself is unphysical"
        )
    # beyond |c_p| = sqrt(mu*v_p) the matrix is not even positive
    # semidefinite, so the feasibility edges lie strictly inside
    c_max = math.sqrt(mu * v_p)
    c_tol = 1e-10
    hi = _bisect_feasibility_boundary(feasible, c_sym, c_max, c_tol)
    lo = _bisect_feasibility_boundary(feasible, c_sym, -c_max, c_tol)

    s_cond = _conditional_entropy_after_bob_x(mu, c_x, v_x)

    def joint_entropy(c_p):
        return _entropy_clamped(_asym_joint(mu, c_x, v_x, c_p, v_p))

    c_best, s_best, evals = _scan_and_refine(joint_entropy, lo, hi, 200, c_tol)
    return {
        "chi": _clamp_chi(s_best - s_cond),
        "c_p": c_best,
        "interval": (lo, hi),
        "evaluations": evals,
    }


def chi_asym_general_bound(
    pm: PmParams, t_x: float, xi_x: float, tol: float = 1e-9
) -> tuple[float, float]:
    """Physicality upper bound on Eve's information, unmodulated p unknown.

    Builds the post-channel state with its x entries fixed by ``(t_x,
    xi_x)``, Bob's p variance set to the simulated symmetric-channel
    value, and the p correlation free; maximizes Eve's information over
    the interval of correlations keeping the state physical (within
    ``tol`` on the symplectic eigenvalues).  Returns the bound and the
    maximizing correlation.
    """
    res = _general_bound(pm, t_x, xi_x, tol)
    return res["chi"], res["c_p"]


def _equal_noise_bound(pm: PmParams, t_x: float, xi_x: float, tol: float = 1e-9):
    eb, c_x, v_x = _asym_x_entries(pm, t_x, xi_x)
    mu = eb.mu
    e2r = math.exp(2.0 * eb.r)
    corr = mu * mu - 1.0
    s_cond = _conditional_entropy_after_bob_x(mu, c_x, v_x)

    def joint_entropy(t_p):
        # transmittances completing the x sector into an unphysical state
        # are not admissible attacks and score -inf
        c_p = -math.exp(eb.r) * math.sqrt(t_p * corr)
        v_p = t_p * (e2r * mu + xi_x) + 1.0 - t_p
        eigs = backend.symplectic_eigenvalues(_asym_joint(mu, c_x, v_x, c_p, v_p))
        if eigs.min() < 1.0 - tol:
            return -math.inf
        return sum(backend.g_entropy_unchecked(v) for v in eigs)

    t_best, s_best, evals = _scan_and_refine(joint_entropy, 0.0, 1.0, 200, 1e-10)
    if not math.isfinite(s_best):
        raise ArithmeticError("no physical completion found for any t_p in [0, 1]")
    return {
        "chi": _clamp_chi(s_best - s_cond),
        "t_p": t_best,
        "evaluations": evals,
    }


def chi_asym_equal_noise(
    pm: PmParams, t_x: float, xi_x: float, tol: float = 1e-9
) -> tuple[float, float]:
    """Eve's information maximized over the unknown p transmittance.

    Assumes the excess noise is equal in both quadratures, leaving the p
    transmittance as the only unknown; the bound scans every value in
    [0, 1] whose completion of the estimated x sector is a physical state
    (within ``tol``) and returns the bound and the maximizing
    transmittance.
    """
    res = _equal_noise_bound(pm, t_x, xi_x, tol)
    return res["chi"], res["t_p"]


def key_rate_asym(
    pm: PmParams, t: float, xi: float, beta: float, attack: AttackModel
) -> KeyRateResult:
    """Key rate of the asymmetric protocol, x-quadrature key.

    The mutual information comes from the x-quadrature conditional
    variances of the symmetric-channel state (Alice and Bob both
    homodyning x); the Holevo term follows the selected attack model.
    """
    eb, c_x, v_x = _asym_x_entries(pm, t, xi)
    v_x_cond = v_x - c_x * c_x / eb.mu
    i_ab = mutual_information_homodyne(v_x, v_x_cond)
    diagnostics: dict = {"attack": attack.value}
    if attack is AttackModel.SYMMETRIC:
        chi = chi_asym_symmetric(pm, t, xi)
    elif attack is AttackModel.GENERAL:
        res = _general_bound(pm, t, xi, tol=1e-9)
        chi = res["chi"]
        diagnostics.update(c_p=res["c_p"], evaluations=res["evaluations"])
    elif attack is AttackModel.EQUAL_NOISE:
        res = _equal_noise_bound(pm, t, xi)
        chi = res["chi"]
        diagnostics.update(t_p=res["t_p"], evaluations=res["evaluations"])
    else:
        raise ValueError(f"unknown attack model {attack!r}")
    return _result(i_ab, chi, beta, diagnostics)


# ---------------------------------------------------------------------------
# heralding protocol
# ---------------------------------------------------------------------------


def key_rate_heralding(pm: PmParams, t: float, xi: float, beta: float) -> KeyRateResult:
    """Key rate of the heralding protocol, x-quadrature key.

    From the heralded three-mode state: the mutual information compares
    Bob's x variance with its value conditioned on the modulation-side
    x homodyne, and Eve's information is ``S(A1 A2 B) - S(A1 A2 | B_x)``.
    """
    state = heralding_cm_closed_form(pm_to_eb(pm), t, xi)
    v_bx = state.matrix[4, 4]
    v_bx_cond = condition_homodyne(state, 0, Quadrature.X).matrix[2, 2]
    i_ab = mutual_information_homodyne(v_bx, v_bx_cond)
    chi = von_neumann_entropy(state) - von_neumann_entropy(
        condition_homodyne(state, 2, Quadrature.X)
    )
    return _result(i_ab, chi, beta)


# ---------------------------------------------------------------------------
# comparison protocols and benchmark
# ---------------------------------------------------------------------------


def key_rate_comparison(
    kind: ProtocolKind, v: float, t: float, xi: float, beta: float
) -> KeyRateResult:
    """Key rate of one of the comparison protocols at EPR variance V.

    Squeezed-state/homodyne: x-homodyne on both sides.  No-switching
    coherent/heterodyne: heterodyne on both sides, with both quadratures
    carrying key, hence ``I_AB = log2((V_B + 1)/(V_B|A + 1))``.
    """
    state = comparison_cm(kind, v, t, xi)
    m = state.matrix
    v_b = m[2, 2]
    c = m[0, 2]
    if kind is ProtocolKind.SQUEEZED_HOMODYNE:
        i_ab = mutual_information_homodyne(v_b, v_b - c * c / v)
        chi = von_neumann_entropy(state) - von_neumann_entropy(
            condition_homodyne(state, 1, Quadrature.X)
        )
    else:
        v_b_cond = v_b - c * c / (v + 1.0)
        i_ab = max(math.log2((v_b + 1.0) / (v_b_cond + 1.0)), 0.0)
        chi = von_neumann_entropy(state) - von_neumann_entropy(
            condition_heterodyne(state, 1)
        )
    return _result(i_ab, chi, beta)


def optimize_modulation(
    kind: ProtocolKind,
    t: float,
    xi: float,
    beta: float,
    v_max: float = 1e3,
    grid_points: int = 64,
) -> tuple[float, KeyRateResult]:
    """Modulation variance maximizing a comparison protocol's key rate.

    Seeds a golden-section refinement with a coarse logarithmic grid over
    ``[1, v_max]`` (unimodality is not assumed; the grid guards against
    multi-modal surfaces).  Deterministic; a flat objective within 1e-12
    resolves to the smallest maximizing V.
    """
    if v_max <= 1.0:
        raise ValueError(f"v_max must exceed 1, got {v_max!r}")

    def rate(log_v: float) -> float:
        return key_rate_comparison(kind, math.exp(log_v), t, xi, beta).key_rate

    grid = np.linspace(0.0, math.log(v_max), grid_points)
    values = [rate(u) for u in grid]
    top = max(values)
    best = next(i for i, f in enumerate(values) if f >= top - 1e-12)
    a = float(grid[max(best - 1, 0)])
    b = float(grid[min(best + 1, grid_points - 1)])
    u_best, f_best, evals = _scan_and_refine(rate, a, b, 2, 1e-10)
    # prefer the smaller grid V on a tie: ties mean a flat objective
    if values[best] >= f_best - 1e-12:
        u_best = float(grid[best])
    v_opt = math.exp(u_best)
    result = key_rate_comparison(kind, v_opt, t, xi, beta)
    result.diagnostics.update(v_opt=v_opt, evaluations=evals + grid_points)
    return v_opt, result
