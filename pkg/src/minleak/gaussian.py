"""Zero-mean Gaussian state algebra on covariance matrices.

Conventions, fixed once and used everywhere:

* quadrature ordering is interleaved, (x1, p1, x2, p2, ...);
* shot-noise units: the vacuum state has quadrature variance 1;
* a state is physical iff Gamma + i*Omega >= 0, equivalently (for
  positive-definite Gamma) iff every symplectic eigenvalue is >= 1;
* the beamsplitter couples modes (a, b) as
  ``out_a = sqrt(tau)*a + sqrt(1-tau)*b``,
  ``out_b = -sqrt(1-tau)*a + sqrt(tau)*b``,
  identically on x and p.  Conventions differing by local phases give the
  same entropies; this one is the one under which the heralded three-mode
  state matches its closed form entry for entry.

Means are never tracked: none of the asymptotic quantities computed from
these states depend on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import backend
from .params import ChannelParams

__all__ = [
    "CovarianceMatrix",
    "SymplecticForm",
    "Quadrature",
    "symplectic_form",
    "is_physical",
    "symplectic_eigenvalues",
    "g_entropy",
    "von_neumann_entropy",
    "vacuum",
    "product_state",
    "two_mode_squeezed",
    "apply_squeezer",
    "apply_beamsplitter",
    "thermal_loss_channel",
    "condition_homodyne",
    "condition_heterodyne",
    "partial_state",
]

#: relative symmetry tolerance accepted at construction
SYMMETRY_TOL = 1e-12
#: default physicality tolerance on symplectic eigenvalues
PHYSICALITY_TOL = 1e-9
#: a measured quadrature variance below this is degenerate conditioning
DEGENERATE_VARIANCE = 1e-12


class Quadrature(Enum):
    """Measurement basis choice for a homodyne detector."""

    X = 0
    P = 1


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Covariance matrix of a zero-mean n-mode Gaussian state.

    The wrapped array is 2n x 2n, real and symmetric, in interleaved
    quadrature ordering and shot-noise units.  Construction symmetrizes
    the input (after checking it is symmetric to within ``SYMMETRY_TOL``
    relative) and freezes it.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"covariance matrix must be square, got shape {m.shape}")
        if m.shape[0] % 2 != 0 or m.shape[0] == 0:
            raise ValueError(
                f"covariance matrix dimension must be even and positive, got {m.shape[0]}"
            )
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix contains non-finite entries")
        scale = max(1.0, float(np.abs(m).max()))
        if float(np.abs(m - m.T).max()) > SYMMETRY_TOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        sym = 0.5 * (m + m.T)
        sym.setflags(write=False)
        object.__setattr__(self, "matrix", sym)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def __repr__(self):
        return f"CovarianceMatrix(n_modes={self.n_modes})"


@dataclass(frozen=True)
class SymplecticForm:
    """The canonical antisymmetric form Omega for n modes."""

    n_modes: int
    matrix: np.ndarray = field(repr=False)


def symplectic_form(n_modes: int) -> SymplecticForm:
    """Direct sum of n copies of the single-mode form [[0, 1], [-1, 0]]."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    m = backend.symplectic_form_matrix(n_modes)
    m.setflags(write=False)
    return SymplecticForm(n_modes=n_modes, matrix=m)


def symplectic_eigenvalues(state: CovarianceMatrix) -> np.ndarray:
    """Symplectic eigenvalues of the state, descending.

    These are the moduli of the eigenvalues of ``i*Omega*Gamma``, each
    reported once.  Raises :class:`backend.SymplecticSpectrumError` if the
    eigensolve fails or the spectrum does not pair up.
    """
    return backend.symplectic_eigenvalues(state.matrix)


def is_physical(state: CovarianceMatrix, tol: float = PHYSICALITY_TOL) -> bool:
    """Whether every symplectic eigenvalue is >= 1 - tol."""
    if tol < 0.0:
        raise ValueError(f"tol must be >= 0, got {tol!r}")
    return bool(symplectic_eigenvalues(state).min() >= 1.0 - tol)


def g_entropy(v: float) -> float:
    """Entropy (bits) of a thermal mode with symplectic eigenvalue v.

    ``g(v) = ((v+1)/2) log2((v+1)/2) - ((v-1)/2) log2((v-1)/2)`` with
    ``g(1) = 0`` by the 0*log(0) convention.  Values in ``[1 - 1e-9, 1]``
    are clamped to 1 so numerical noise at purity cannot produce NaN;
    anything lower is rejected as unphysical.
    """
    if not math.isfinite(v):
        raise ValueError(f"eigenvalue must be finite, got {v!r}")
    if v < 1.0 - backend.UNIT_CLAMP:
        raise ValueError(f"unphysical symplectic eigenvalue {v!r}")
    return backend.g_entropy_unchecked(v)


def von_neumann_entropy(state: CovarianceMatrix) -> float:
    """Entropy (bits): sum of g over the symplectic eigenvalues."""
    return backend.entropy(state.matrix)


def vacuum(n_modes: int) -> CovarianceMatrix:
    """n uncorrelated vacuum modes."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    return CovarianceMatrix(np.eye(2 * n_modes))


def product_state(*states: CovarianceMatrix) -> CovarianceMatrix:
    """Uncorrelated composition of several states (direct sum)."""
    if not states:
        raise ValueError("product_state needs at least one state")
    dims = [s.matrix.shape[0] for s in states]
    out = np.zeros((sum(dims), sum(dims)))
    pos = 0
    for s, d in zip(states, dims):
        out[pos : pos + d, pos : pos + d] = s.matrix
        pos += d
    return CovarianceMatrix(out)


def two_mode_squeezed(mu: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum (EPR state) of variance mu >= 1.

    Diagonal blocks are ``mu*I``; the off-diagonal block is
    ``sqrt(mu^2 - 1) * diag(1, -1)``.
    """
    if not math.isfinite(mu) or mu < 1.0:
        raise ValueError(f"mu must be >= 1, got {mu!r}")
    c = math.sqrt(mu * mu - 1.0)
    m = np.zeros((4, 4))
    m[:2, :2] = mu * np.eye(2)
    m[2:, 2:] = mu * np.eye(2)
    m[0, 2] = m[2, 0] = c
    m[1, 3] = m[3, 1] = -c
    return CovarianceMatrix(m)


def _check_mode(state: CovarianceMatrix, mode: int, name: str = "mode"):
    if not 0 <= mode < state.n_modes:
        raise ValueError(
            f"{name} index {mode} out of range for {state.n_modes}-mode state"
        )


def apply_squeezer(state: CovarianceMatrix, mode: int, r: float) -> CovarianceMatrix:
    """Single-mode squeezer on the given mode; positive r squeezes x.

    Congruence with ``diag(exp(-r), exp(r))`` on the selected mode.
    """
    _check_mode(state, mode)
    if not math.isfinite(r):
        raise ValueError(f"r must be finite, got {r!r}")
    m = state.matrix.copy()
    ix, ip = 2 * mode, 2 * mode + 1
    down, up = math.exp(-r), math.exp(r)
    m[ix, :] *= down
    m[:, ix] *= down
    m[ip, :] *= up
    m[:, ip] *= up
    return CovarianceMatrix(m)


def apply_beamsplitter(
    state: CovarianceMatrix, mode_a: int, mode_b: int, transmissivity: float
) -> CovarianceMatrix:
    """Beamsplitter of the given transmissivity between two modes.

    Acts identically on x and p with the coupling signs stated in the
    module docstring; ``transmissivity=0`` swaps the modes up to a sign.
    """
    _check_mode(state, mode_a, "mode_a")
    _check_mode(state, mode_b, "mode_b")
    if mode_a == mode_b:
        raise ValueError("beamsplitter modes must be distinct")
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {transmissivity!r}")
    t = math.sqrt(transmissivity)
    rr = math.sqrt(1.0 - transmissivity)
    s = np.eye(2 * state.n_modes)
    for q in (0, 1):
        ia, ib = 2 * mode_a + q, 2 * mode_b + q
        s[ia, ia] = t
        s[ib, ib] = t
        s[ia, ib] = rr
        s[ib, ia] = -rr
    return CovarianceMatrix(s @ state.matrix @ s.T)


def thermal_loss_channel(
    state: CovarianceMatrix, mode: int, channel: ChannelParams
) -> CovarianceMatrix:
    """Per-quadrature thermal-loss channel on one mode.

    The mode's x row/column scales by ``sqrt(t_x)`` (p by ``sqrt(t_p)``)
    and its x variance maps to ``t_x*(v + xi_x) + 1 - t_x`` (p analogously):
    excess noise is referred to the channel input.  The symmetric channel
    is the special case ``t_x = t_p``, ``xi_x = xi_p``.

    The map is completely positive (and hence physicality-preserving) only
    when ``(1-t_x+t_x*xi_x)*(1-t_p+t_p*xi_p) >= (1-sqrt(t_x*t_p))^2``;
    outside that regime it is the algebraic transformation used when
    exploring candidate attack covariance matrices, which need not be
    physical.
    """
    _check_mode(state, mode)
    m = state.matrix.copy()
    ix, ip = 2 * mode, 2 * mode + 1
    sx, sp = math.sqrt(channel.t_x), math.sqrt(channel.t_p)
    m[ix, :] *= sx
    m[:, ix] *= sx
    m[ip, :] *= sp
    m[:, ip] *= sp
    m[ix, ix] += channel.t_x * channel.xi_x + 1.0 - channel.t_x
    m[ip, ip] += channel.t_p * channel.xi_p + 1.0 - channel.t_p
    return CovarianceMatrix(m)


def _rest_indices(state: CovarianceMatrix, mode: int) -> list[int]:
    return [i for i in range(2 * state.n_modes) if i not in (2 * mode, 2 * mode + 1)]


def condition_homodyne(
    state: CovarianceMatrix, measured_mode: int, quad: Quadrature
) -> CovarianceMatrix:
    """State of the remaining modes after homodyning one quadrature.

    Rank-1 Schur complement: only the measured quadrature's variance and
    its correlations enter, ``Gamma_rest - c c^T / v``.  The result is
    independent of the measurement outcome.  A measured variance below
    ``DEGENERATE_VARIANCE`` is rejected rather than silently clamped.
    """
    _check_mode(state, measured_mode)
    if state.n_modes < 2:
        raise ValueError("conditioning requires at least two modes")
    idx = 2 * measured_mode + quad.value
    v = state.matrix[idx, idx]
    if v <= DEGENERATE_VARIANCE:
        raise ValueError(f"degenerate measured variance {v!r}")
    rest = _rest_indices(state, measured_mode)
    c = state.matrix[rest, idx]
    out = state.matrix[np.ix_(rest, rest)] - np.outer(c, c) / v
    return CovarianceMatrix(out)


def condition_heterodyne(state: CovarianceMatrix, measured_mode: int) -> CovarianceMatrix:
    """State of the remaining modes after heterodyning one mode.

    ``Gamma_rest - C (Gamma_m + I)^-1 C^T``; ``Gamma_m + I`` is strictly
    positive for physical states, so a singular block signals an internal
    error rather than a user one.
    """
    _check_mode(state, measured_mode)
    if state.n_modes < 2:
        raise ValueError("conditioning requires at least two modes")
    sl = [2 * measured_mode, 2 * measured_mode + 1]
    block = state.matrix[np.ix_(sl, sl)] + np.eye(2)
    det = block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]
    if abs(det) < 1e-300:
        raise ArithmeticError("singular heterodyne block; state was not physical")
    inv = np.array([[block[1, 1], -block[0, 1]], [-block[1, 0], block[0, 0]]]) / det
    rest = _rest_indices(state, measured_mode)
    c = state.matrix[np.ix_(rest, sl)]
    out = state.matrix[np.ix_(rest, rest)] - c @ inv @ c.T
    return CovarianceMatrix(out)


def partial_state(state: CovarianceMatrix, modes: list[int]) -> CovarianceMatrix:
    """Reduced state on the selected modes, in the order given."""
    if len(modes) == 0:
        raise ValueError("partial_state needs at least one mode")
    if len(set(modes)) != len(modes):
        raise ValueError(f"mode indices must be distinct, got {modes!r}")
    for m in modes:
        _check_mode(state, m)
    idx = [2 * m + q for m in modes for q in (0, 1)]
    return CovarianceMatrix(state.matrix[np.ix_(idx, idx)])
