import numpy as np
import pytest

from minleak.gaussian import (
    CovarianceMatrix,
    apply_beamsplitter,
    apply_squeezer,
)


def rotate90(matrix: np.ndarray) -> np.ndarray:
    """Phase-rotate every mode by 90 degrees: x -> p, p -> -x."""
    n = matrix.shape[0] // 2
    r = np.zeros_like(matrix)
    for i in range(n):
        r[2 * i, 2 * i + 1] = 1.0
        r[2 * i + 1, 2 * i] = -1.0
    return r @ matrix @ r.T


def random_thermal(rng, n_modes: int, v_max: float = 5.0) -> CovarianceMatrix:
    return CovarianceMatrix(
        np.diag(np.repeat(1.0 + (v_max - 1.0) * rng.random(n_modes), 2))
    )


def scramble(state: CovarianceMatrix, rng, ops: int = 4) -> CovarianceMatrix:
    """Random squeezer/beamsplitter symplectics; spectrum-preserving."""
    n = state.n_modes
    for _ in range(ops):
        if n >= 2 and rng.random() < 0.5:
            a, b = rng.choice(n, size=2, replace=False)
            state = apply_beamsplitter(state, int(a), int(b), float(rng.random()))
        else:
            state = apply_squeezer(
                state, int(rng.integers(n)), float(rng.uniform(-1.2, 1.2))
            )
    return state


def random_physical_cm(rng, n_modes: int) -> CovarianceMatrix:
    return scramble(random_thermal(rng, n_modes), rng)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
