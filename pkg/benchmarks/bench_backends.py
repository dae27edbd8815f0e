"""Compare the compiled and pure-numpy sweep kernels on one workload.

Runs the same annealing job (disk scenario, identical seed) once per
backend, reports wall time per sweep, and cross-checks that the two
trajectories end in bit-identical label arrays — the kernels are written
to make backend choice unobservable in the results.

Usage: python benchmarks/bench_backends.py [N] [SWEEPS]
"""

from __future__ import annotations

import os
import sys
import time

import numpy as np

from trifluid import EnergyParams, SurfaceTensions
from trifluid.gridmin import (
    AnnealSchedule,
    MinimizeOptions,
    backend_name,
    get_sweep,
    make_disk_dirichlet_grid,
    minimize,
    reset_backend,
)


def run(backend: str, n: int, sweeps: int):
    os.environ["TFL_BACKEND"] = backend
    reset_backend()
    grid = make_disk_dirichlet_grid(n, SurfaceTensions(3.0, 4.0, 5.0))
    p = EnergyParams(sigmas=SurfaceTensions(3.0, 4.0, 5.0))
    opts = MinimizeOptions(schedule=AnnealSchedule(sweeps=sweeps), seed=42)

    get_sweep()  # pay any compilation cost outside the timed region
    t0 = time.perf_counter()
    result, trace = minimize(grid, p, opts)
    elapsed = time.perf_counter() - t0
    return result, trace, elapsed


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 128
    sweeps = int(sys.argv[2]) if len(sys.argv) > 2 else 60

    results = {}
    for backend in ("numba", "numpy"):
        try:
            result, trace, elapsed = run(backend, n, sweeps)
        except ImportError as exc:
            print(f"{backend:>6}: unavailable ({exc})")
            continue
        per_sweep = elapsed / len(trace)
        results[backend] = result
        print(
            f"{backend:>6}: {elapsed:8.3f} s total, {per_sweep * 1e3:8.2f} ms/sweep "
            f"({len(trace)} sweeps, {n}x{n} grid, kernel = {backend_name()})"
        )

    if len(results) == 2:
        same = np.array_equal(results["numba"].labels, results["numpy"].labels)
        print("cross-check:", "final labels bit-identical" if same else "MISMATCH")
        if not same:
            raise SystemExit(1)

    os.environ.pop("TFL_BACKEND", None)
    reset_backend()


if __name__ == "__main__":
    main()
