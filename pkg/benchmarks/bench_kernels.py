"""Timing comparison of the compiled and pure-numpy scan kernels.

Runs every kernel on a representative workload under both backends and
prints per-call times plus the speedup of the compiled path. Compilation
happens during warmup, so the numbers are steady-state costs. The active
backend is restored to automatic selection on exit.

Usage:
    python3 benchmarks/bench_kernels.py [--axes 4096] [--repeats 7] [--loops 20]
"""

import argparse
import time

import numpy as np

from spincorr import backend, correlations, kernels
from spincorr.qmatrix import matrix_sqrt


def random_state(rng, dim=4):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def build_workloads(n_axes, seed=7):
    rng = np.random.default_rng(seed)
    rho = random_state(rng)
    a, b, t_mat = correlations.local_bloch(rho)
    side = int(round(np.sqrt(n_axes)))
    axes = kernels.axis_grid(side, side)
    weights, vecs = np.linalg.eigh(rho)
    weights = np.clip(weights, 0.0, None)
    weights /= weights.sum()
    angles = rng.uniform(0.0, np.pi, size=(axes.shape[0], 3))
    angles[:, 1] *= 2.0
    angles[:, 2] *= 2.0
    return {
        "conditional_entropy_scan": lambda: kernels.conditional_entropy_scan(
            a, b, t_mat, axes
        ),
        "measured_distance_scan": lambda: kernels.measured_distance_scan(rho, axes),
        "measured_fidelity_scan": lambda: kernels.measured_fidelity_scan(
            matrix_sqrt(rho), rho, axes
        ),
        "ip_objective_scan": lambda: kernels.ip_objective_scan(weights, vecs, angles),
    }


def best_time(fn, repeats, loops):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for _ in range(loops):
            fn()
        best = min(best, (time.perf_counter() - start) / loops)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--axes", type=int, default=4096, help="grid size per scan")
    parser.add_argument("--repeats", type=int, default=7, help="timing repetitions")
    parser.add_argument("--loops", type=int, default=20, help="calls per repetition")
    args = parser.parse_args()

    workloads = build_workloads(args.axes)
    names = list(workloads)
    results = {}
    try:
        for name_backend in ("numpy", "numba"):
            try:
                backend.set_backend(name_backend)
            except backend.BackendError as exc:
                print(f"{name_backend}: unavailable ({exc})")
                continue
            for name in names:
                workloads[name]()  # warmup; first numba call compiles
                results[(name, name_backend)] = best_time(
                    workloads[name], args.repeats, args.loops
                )
    finally:
        backend.set_backend(None)

    width = max(len(n) for n in names)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name in names:
        t_np = results.get((name, "numpy"))
        t_nb = results.get((name, "numba"))
        col_np = f"{t_np * 1e3:8.3f}ms" if t_np else "n/a".rjust(10)
        col_nb = f"{t_nb * 1e3:8.3f}ms" if t_nb else "n/a".rjust(10)
        ratio = f"{t_np / t_nb:7.1f}x" if t_np and t_nb else "n/a".rjust(8)
        print(f"{name:<{width}}  {col_np}  {col_nb}  {ratio}")


if __name__ == "__main__":
    main()
