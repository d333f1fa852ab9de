#!/usr/bin/env python3
"""Benchmark: compiled kernels against the pure-numpy route.

Times the symplectic-spectrum and entropy primitives on the matrix sizes
the sweeps actually use, then a slice of a real workload (the heralded
leakage map).  Run after building the extension:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from minleak import backend
from minleak.params import EbParams, PmParams
from minleak.protocols import heralding_cm_closed_form
from minleak.security import key_rate_heralding


def timeit(fn, *args, repeat=5, number=2000):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench_primitives():
    # the post-channel heralded state always has a unit symplectic
    # eigenvalue (the channel purification pins it), which the compiled
    # cubic hands to the eigensolver; a generic thermal spectrum shows the
    # three-mode fast path instead
    three = np.diag([1.3, 1.3, 2.1, 2.1, 3.4, 3.4])
    states = {
        "1-mode": np.diag([1.7, 2.4]),
        "2-mode": np.array(
            [[2.0, 0, 1.2, 0], [0, 2.0, 0, -1.2], [1.2, 0, 1.9, 0], [0, -1.2, 0, 1.9]]
        ),
        "3-mode": three,
        "3-mode heralded": heralding_cm_closed_form(
            EbParams(mu=3.0, r=0.4), 0.6, 0.02
        ).matrix,
    }
    print(f"{'primitive':<28} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, mat in states.items():
        t_py = timeit(backend.python_symplectic_eigenvalues, mat)
        t_entropy_py = timeit(backend.python_entropy, mat)
        if backend.HAVE_COMPILED:
            t_fast = timeit(backend.symplectic_eigenvalues, mat)
            t_entropy = timeit(backend.entropy, mat)
        else:
            t_fast, t_entropy = t_py, t_entropy_py
        print(
            f"spectrum  {label:<18} {t_py * 1e6:>10.2f}us {t_fast * 1e6:>10.2f}us"
            f" {t_py / t_fast:>8.1f}x"
        )
        print(
            f"entropy   {label:<18} {t_entropy_py * 1e6:>10.2f}us {t_entropy * 1e6:>10.2f}us"
            f" {t_entropy_py / t_entropy:>8.1f}x"
        )


def bench_workload():
    from minleak.security import chi_asym_equal_noise, chi_asym_general_bound

    def attack_bounds():
        for v_sqz in np.linspace(0.1, 1.0, 10):
            pm = PmParams(v_sig=0.5, v_sqz=float(v_sqz))
            chi_asym_general_bound(pm, 0.5, 0.01)
            chi_asym_equal_noise(pm, 0.5, 0.01)

    pm_h = PmParams(v_sig=0.3, v_sqz=0.2821)
    t_grid = np.linspace(0.05, 0.95, 40)

    def leakage_strip():
        for t in t_grid:
            key_rate_heralding(pm_h, float(t), 0.001, 1.0)

    for label, fn in (
        ("10-point attack-bound maximizations", attack_bounds),
        ("40-point heralded-leakage strip", leakage_strip),
    ):
        best = float("inf")
        for _ in range(5):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        print(f"workload ({backend.BACKEND} backend): {label}: {best * 1e3:.1f} ms")


if __name__ == "__main__":
    print(f"active backend: {backend.BACKEND}")
    bench_primitives()
    bench_workload()
    if not backend.HAVE_COMPILED:
        print(
            "\n(extension not built or MINLEAK_PURE_PYTHON set; "
            "both columns show the numpy route)"
        )
