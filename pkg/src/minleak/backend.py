"""Backend selection for the numeric hot paths.

Symplectic spectra and entropies dominate the runtime of every sweep, so
they are served by a compiled extension when one was built.  A pure-numpy
implementation is always available and is selected automatically when the
extension is missing or when ``MINLEAK_PURE_PYTHON`` is set in the
environment.  Both paths are exposed so they can be benchmarked and
cross-checked against each other.

The reference algorithm is the generic one: the symplectic eigenvalues of a
covariance matrix ``G`` are the moduli of the eigenvalues of ``i*Omega*G``,
which come in pairs; a spectrum whose pairs disagree beyond ``PAIRING_TOL``
signals a failed eigensolve.  The compiled path solves the characteristic
polynomial of small systems directly and defers to the reference route
whenever it detects an ill-conditioned (clustered) spectrum.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from . import _kernel
except ImportError:
    _kernel = None

if os.environ.get("MINLEAK_PURE_PYTHON"):
    _kernel = None

HAVE_COMPILED = _kernel is not None
BACKEND = "compiled" if HAVE_COMPILED else "python"

#: paired eigenvalues of i*Omega*G may disagree by at most this much (relative)
PAIRING_TOL = 1e-8
#: eigenvalues within this margin below 1 are clamped to 1 (exact purity)
UNIT_CLAMP = 1e-9


class SymplecticSpectrumError(ArithmeticError):
    """The eigensolve failed or produced an unpaired symplectic spectrum."""


def symplectic_form_matrix(n_modes: int) -> np.ndarray:
    """The 2n x 2n symplectic form for (x1, p1, x2, p2, ...) ordering."""
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), omega)


def python_symplectic_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Reference route: moduli of eig(i*Omega*G), one per pair, descending."""
    n = matrix.shape[0] // 2
    omega = symplectic_form_matrix(n)
    try:
        eigs = np.linalg.eigvals(1j * omega @ matrix)
    except np.linalg.LinAlgError as exc:
        raise SymplecticSpectrumError(f"eigensolve did not converge: {exc}") from exc
    mods = np.sort(np.abs(eigs))[::-1]
    first, second = mods[0::2], mods[1::2]
    gap = np.abs(first - second)
    tol = PAIRING_TOL * np.maximum(1.0, first)
    if np.any(gap > tol):
        raise SymplecticSpectrumError(
            f"unpaired symplectic spectrum (worst pair gap {gap.max():.3e})"
        )
    return 0.5 * (first + second)


def g_entropy_unchecked(v: float) -> float:
    """Entropy (bits) of a thermal mode with symplectic eigenvalue v >= 1."""
    if v <= 1.0:
        return 0.0
    a = 0.5 * (v + 1.0)
    b = 0.5 * (v - 1.0)
    return float(a * np.log2(a) - b * np.log2(b))


def python_entropy(matrix: np.ndarray) -> float:
    """Reference entropy route (bits); rejects unphysical spectra."""
    total = 0.0
    for v in python_symplectic_eigenvalues(matrix):
        if v < 1.0 - UNIT_CLAMP:
            raise ValueError(
                f"unphysical symplectic eigenvalue {v!r} (below 1 - {UNIT_CLAMP})"
            )
        total += g_entropy_unchecked(v)
    return total


def symplectic_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix, descending order."""
    if _kernel is not None and matrix.shape[0] <= 6:
        mat = np.ascontiguousarray(matrix, dtype=np.float64)
        out = np.empty(mat.shape[0] // 2)
        if _kernel.symplectic_eigenvalues_small(mat, out) == 0:
            return out
    return python_symplectic_eigenvalues(matrix)


def entropy(matrix: np.ndarray) -> float:
    """Von Neumann entropy (bits) of the Gaussian state with this matrix."""
    if _kernel is not None and matrix.shape[0] <= 6:
        mat = np.ascontiguousarray(matrix, dtype=np.float64)
        s = _kernel.entropy_small(mat)
        if s >= 0.0:
            return s
    return python_entropy(matrix)
