#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the hot paths (scaled Bessel evaluation over a radial grid, the
damped cumulative scans, and a full mode-stack solve) under both backends
and prints a small table.  Run directly:

    python3 benchmarks/bench_backends.py [--n-r 4096] [--repeats 5]
"""

import argparse
import math
import time

import numpy as np

from fredholm_disk import backend, verify
from fredholm_disk.geometry import RadialGrid, WeightPair
from fredholm_disk.greens import solve_field
from fredholm_disk.modes import OperatorKind


def _time(fn, repeats):
    fn()  # warm-up (numba compilation, caches)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n-r", type=int, default=4096)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    grid = RadialGrid(1e-4, 40.0, args.n_r)
    zs = grid.nodes
    rng = np.random.default_rng(0)
    g = rng.normal(size=args.n_r) + 1j * rng.normal(size=args.n_r)
    damp = np.exp(-np.diff(zs))
    f = verify.random_band_limited(grid, 32, seed=1)
    w = WeightPair(-0.5, 0.0)

    cases = {
        "bessel K pair (nu=5.1)": lambda k: k.kv_scaled_pair_arr(math.sqrt(26.0), zs),
        "bessel I (nu=5.1)": lambda k: k.iv_scaled_arr(math.sqrt(26.0), zs),
        "damped forward scan": lambda k: k.damped_cumulative_forward(g, damp, grid.h),
        "helmholtz field solve": None,
    }

    results = {}
    for name in ("numba", "numpy"):
        backend.use(name)
        k = backend.kernels()
        results[name] = {}
        for label, fn in cases.items():
            if fn is None:
                call = lambda: solve_field(OperatorKind.HELMHOLTZ, f, w)  # noqa: E731
            else:
                call = lambda fn=fn: fn(k)  # noqa: E731
            results[name][label] = _time(call, args.repeats)

    width = max(len(label) for label in cases)
    print(f"{'case':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for label in cases:
        a = results["numba"][label]
        b = results["numpy"][label]
        print(f"{label:<{width}}  {a * 1e3:>8.2f}ms  {b * 1e3:>8.2f}ms  "
              f"{b / a:>7.1f}x")


if __name__ == "__main__":
    main()
