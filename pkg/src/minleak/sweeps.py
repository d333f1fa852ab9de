"""Parameter-sweep drivers producing the datasets behind the figures.

Each driver returns a :class:`SweepResult` whose rows are a deterministic
function of the sweep specification: grids are closed under dyadic
refinement (fixed endpoints, linear subdivision), rows are emitted in grid
order regardless of how they were computed, and a non-computable row
carries a status flag instead of numbers (no NaN or infinity is ever
stored).  Rows may be evaluated in parallel with ``jobs > 1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import backend
from ._version import __version__
from .params import PmParams
from .protocols import ProtocolKind, zero_leakage_heralding
from .security import (
    CHI_CLAMP,
    chi_asym_equal_noise,
    chi_asym_general_bound,
    chi_asym_symmetric,
    key_rate_heralding,
    optimize_modulation,
    plob_bound,
)

__all__ = [
    "SweepSpec",
    "SweepResult",
    "distance_to_transmissivity",
    "run_fig2",
    "run_fig4",
    "run_fig5",
    "run_fig6",
]

#: squeezing variance standing in for the infinite-squeezing limit
INFINITE_SQUEEZING_FLOOR = 1e-4
#: squeezing variance corresponding to 10 dB of squeezing
TEN_DB_SQUEEZING = 0.1

FIGURE_IDS = ("fig2", "fig4a", "fig4b", "fig5", "fig6")


@dataclass(frozen=True)
class SweepSpec:
    """What a sweep computes: grid axes, fixed parameters, curves."""

    figure_id: str
    axes: tuple[tuple[str, float, float, int], ...]
    fixed: dict = field(default_factory=dict)
    curves: tuple[str, ...] = ()

    def __post_init__(self):
        for name, lo, hi, points in self.axes:
            if points < 2:
                raise ValueError(f"axis {name!r} needs >= 2 points, got {points}")
            if not lo < hi:
                raise ValueError(f"axis {name!r} has empty range [{lo}, {hi}]")

    def grids(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, points) for _, lo, hi, points in self.axes]


@dataclass(frozen=True)
class SweepResult:
    """Rows of a finished sweep plus provenance metadata."""

    figure_id: str
    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)


def distance_to_transmissivity(d_km: float, loss_db_per_km: float = 0.2) -> float:
    """Fiber transmissivity after d km at the given attenuation."""
    if d_km < 0.0 or loss_db_per_km < 0.0:
        raise ValueError("distance and loss must be >= 0")
    return 10.0 ** (-loss_db_per_km * d_km / 10.0)


def _metadata(spec: SweepSpec) -> dict:
    # provenance only; rows are a pure function of the spec
    return {
        "figure": spec.figure_id,
        "axes": [
            {"name": n, "min": lo, "max": hi, "points": p}
            for n, lo, hi, p in spec.axes
        ],
        "fixed": dict(spec.fixed),
        "curves": list(spec.curves),
        "library_version": __version__,
        "backend": backend.BACKEND,
        "tolerances": {"physicality": 1e-9, "chi_clamp": CHI_CLAMP},
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _compute_rows(worker, tasks: list[tuple], jobs: int) -> list[tuple]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [worker(t) for t in tasks]


def _guard(values: tuple) -> tuple:
    """Append the status cell: numbers must be finite to be reported."""
    if all(v is not None and math.isfinite(v) for v in values):
        return values + ("ok",)
    cleaned = tuple(v if v is not None and math.isfinite(v) else None for v in values)
    return cleaned + ("nonfinite",)


# ---------------------------------------------------------------------------
# fig2: the three attack bounds against squeezing
# ---------------------------------------------------------------------------


def _fig2_row(task: tuple) -> tuple:
    v_sqz, v_sig, t_x, xi_x = task
    pm = PmParams(v_sig=v_sig, v_sqz=v_sqz)
    try:
        chi_sym = chi_asym_symmetric(pm, t_x, xi_x)
        chi_eq, _ = chi_asym_equal_noise(pm, t_x, xi_x)
        chi_gen, _ = chi_asym_general_bound(pm, t_x, xi_x)
    except (ValueError, ArithmeticError) as exc:
        return (v_sqz, -10.0 * math.log10(v_sqz), None, None, None, type(exc).__name__)
    sqz_db = -10.0 * math.log10(v_sqz)
    return _guard((v_sqz, sqz_db, chi_sym, chi_eq, chi_gen))


def run_fig2(
    points: int,
    v_sqz_min: float = 0.01,
    t_x: float = 0.5,
    xi_x: float = 0.01,
    v_sig: float = 0.5,
    jobs: int = 1,
) -> SweepResult:
    """Eve's information bounds for the asymmetric protocol versus squeezing.

    Sweeps the squeezing variance up to 1 (coherent states); the axis is
    reported both as a variance and in dB.  The three columns are the
    symmetric-channel value, the equal-excess-noise bound and the general
    physicality bound, in that order.
    """
    spec = SweepSpec(
        figure_id="fig2",
        axes=(("v_sqz", v_sqz_min, 1.0, points),),
        fixed={"t_x": t_x, "xi_x": xi_x, "v_sig": v_sig},
        curves=("chi_symmetric", "chi_equal_noise", "chi_general"),
    )
    (grid,) = spec.grids()
    tasks = [(float(v), v_sig, t_x, xi_x) for v in grid]
    rows = _compute_rows(_fig2_row, tasks, jobs)
    return SweepResult(
        figure_id=spec.figure_id,
        columns=("v_sqz", "sqz_db", "chi_symmetric", "chi_equal_noise", "chi_general", "status"),
        rows=rows,
        metadata=_metadata(spec),
    )


# ---------------------------------------------------------------------------
# fig4 / fig5: heralded leakage contours
# ---------------------------------------------------------------------------


def _herald_chi_row(task: tuple) -> tuple:
    first, v_sig, v_sqz, t, xi = task
    try:
        chi = key_rate_heralding(PmParams(v_sig=v_sig, v_sqz=v_sqz), t, xi, 1.0).chi_eb
    except (ValueError, ArithmeticError) as exc:
        return (first, v_sqz, None, type(exc).__name__)
    return _guard((first, v_sqz, chi))


def run_fig4(
    xi: float,
    grid: tuple[int, int] = (101, 101),
    v_sig: float = 0.3,
    t_range: tuple[float, float] = (0.01, 0.99),
    v_sqz_range: tuple[float, float] = (0.02, 1.98),
    jobs: int = 1,
) -> SweepResult:
    """Heralded leakage over (transmissivity, squeezing) at fixed modulation.

    The squeezing axis spans both sides of 1 so the two zero-leakage
    branches are visible.
    """
    t_points, v_points = grid
    spec = SweepSpec(
        figure_id="fig4a" if xi == 0.0 else "fig4b",
        axes=(
            ("t", t_range[0], t_range[1], t_points),
            ("v_sqz", v_sqz_range[0], v_sqz_range[1], v_points),
        ),
        fixed={"v_sig": v_sig, "xi": xi},
        curves=("chi_heralding",),
    )
    t_grid, v_grid = spec.grids()
    tasks = [
        (float(t), v_sig, float(v), float(t), xi) for t in t_grid for v in v_grid
    ]
    rows = _compute_rows(_herald_chi_row, tasks, jobs)
    return SweepResult(
        figure_id=spec.figure_id,
        columns=("t", "v_sqz", "chi", "status"),
        rows=rows,
        metadata=_metadata(spec),
    )


def run_fig5(
    grid: tuple[int, int] = (101, 101),
    t: float = 0.5,
    v_sig_range: tuple[float, float] = (0.0, 0.5),
    v_sqz_range: tuple[float, float] = (0.02, 1.98),
    jobs: int = 1,
) -> SweepResult:
    """Heralded leakage over (modulation, squeezing) in a pure-loss channel."""
    sig_points, v_points = grid
    spec = SweepSpec(
        figure_id="fig5",
        axes=(
            ("v_sig", v_sig_range[0], v_sig_range[1], sig_points),
            ("v_sqz", v_sqz_range[0], v_sqz_range[1], v_points),
        ),
        fixed={"t": t, "xi": 0.0},
        curves=("chi_heralding",),
    )
    sig_grid, v_grid = spec.grids()
    tasks = [(float(s), float(s), float(v), t, 0.0) for s in sig_grid for v in v_grid]
    rows = _compute_rows(_herald_chi_row, tasks, jobs)
    return SweepResult(
        figure_id=spec.figure_id,
        columns=("v_sig", "v_sqz", "chi", "status"),
        rows=rows,
        metadata=_metadata(spec),
    )


# ---------------------------------------------------------------------------
# fig6: key rates against distance
# ---------------------------------------------------------------------------


def _fig6_row(task: tuple) -> tuple:
    d_km, loss, xi, beta, v_inf, v_10db, sifting = task
    t = distance_to_transmissivity(d_km, loss)

    def herald_rate(v_sqz: float) -> float:
        pm = PmParams(v_sig=zero_leakage_heralding(v_sqz), v_sqz=v_sqz)
        return key_rate_heralding(pm, t, xi, beta).key_rate

    try:
        k_inf = max(herald_rate(v_inf), 0.0) * sifting
        k_10 = max(herald_rate(v_10db), 0.0) * sifting
        v_sh, res_sh = optimize_modulation(ProtocolKind.SQUEEZED_HOMODYNE, t, xi, beta)
        v_ch, res_ch = optimize_modulation(ProtocolKind.COHERENT_HETERODYNE, t, xi, beta)
        k_sh = max(res_sh.key_rate, 0.0) * sifting
        k_ch = max(res_ch.key_rate, 0.0) * sifting
    except (ValueError, ArithmeticError) as exc:
        return (d_km, t) + (None,) * 7 + (type(exc).__name__,)
    plob = plob_bound(t) if t < 1.0 else None
    row = (d_km, t, k_inf, k_10, k_sh, v_sh, k_ch, v_ch)
    if plob is None:
        # zero distance: the pure-loss capacity is unbounded
        return _guard(row)[:-1] + (None, "plob_undefined")
    return _guard(row + (plob,))


def run_fig6(
    d_max_km: float = 200.0,
    points: int = 201,
    xi: float = 0.05,
    beta: float = 0.95,
    loss_db_per_km: float = 0.2,
    sifting: float = 1.0,
    jobs: int = 1,
) -> SweepResult:
    """Key rates versus distance for the heralding and comparison protocols.

    Heralding curves hold the zero-leakage condition at every distance, at
    the infinite-squeezing floor and at 10 dB; the comparison protocols
    are optimized over their modulation at each distance.  Rates are
    floored at zero for emission; the pure-loss capacity column is null at
    zero distance where it diverges.
    """
    if d_max_km <= 0.0:
        raise ValueError(f"d_max_km must be > 0, got {d_max_km!r}")
    spec = SweepSpec(
        figure_id="fig6",
        axes=(("distance_km", 0.0, d_max_km, points),),
        fixed={
            "xi": xi,
            "beta": beta,
            "loss_db_per_km": loss_db_per_km,
            "v_sqz_infinite": INFINITE_SQUEEZING_FLOOR,
            "v_sqz_10db": TEN_DB_SQUEEZING,
            "sifting": sifting,
        },
        curves=(
            "heralding_inf",
            "heralding_10db",
            "squeezed_homodyne_opt",
            "coherent_heterodyne_opt",
            "plob",
        ),
    )
    (grid,) = spec.grids()
    tasks = [
        (
            float(d),
            loss_db_per_km,
            xi,
            beta,
            INFINITE_SQUEEZING_FLOOR,
            TEN_DB_SQUEEZING,
            sifting,
        )
        for d in grid
    ]
    rows = _compute_rows(_fig6_row, tasks, jobs)
    return SweepResult(
        figure_id=spec.figure_id,
        columns=(
            "distance_km",
            "transmissivity",
            "heralding_inf",
            "heralding_10db",
            "squeezed_homodyne_opt",
            "squeezed_homodyne_v_opt",
            "coherent_heterodyne_opt",
            "coherent_heterodyne_v_opt",
            "plob",
            "status",
        ),
        rows=rows,
        metadata=_metadata(spec),
    )
