#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

Runs the hot paths (token-level simulation and the three streaming
kernels) on sizeable inputs through both backends, checks that they agree,
and prints wall-clock times plus the native speedup.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hetsched.backend import available_backends

SEED = 1729


def _timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def build_workloads():
    rng = np.random.default_rng(SEED)
    pixels = rng.integers(0, 256, size=4 << 20, dtype=np.uint8)  # 4 Mpixel image
    a = rng.standard_normal((768, 768))
    x = rng.standard_normal(768)
    nnz = 200_000
    rows = cols = 4096
    flat = rng.choice(rows * cols, size=nnz, replace=False)
    flat.sort()
    values = rng.uniform(-1, 1, nnz)
    col = (flat % cols).astype(np.int64)
    counts = np.bincount(flat // cols, minlength=rows)
    rowptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    xs = rng.standard_normal(cols)
    sim_iters = [10_000] * 8
    sim_lat = list(range(8))
    sim_iis = [1, 2, 3, 4, 1, 2, 3, 4]

    return {
        "histogram 4Mpx": lambda impl: impl.hist_pairs(pixels),
        "demv 768x768": lambda impl: impl.demv_rows(a, x),
        "demv unrolled": lambda impl: impl.demv_unrolled(a, x, 4),
        "spmv 200k nnz": lambda impl: impl.spmv_rows(values, col, rowptr, xs),
        "spmv stream": lambda impl: impl.spmv_stream(values, col, rowptr, xs),
        "sim concurrent 80k tokens": lambda impl: impl.simulate_concurrent(sim_iters, sim_lat, 4),
        "sim sequential 80k tokens": lambda impl: impl.simulate_sequential(sim_iters, sim_iis, sim_lat),
    }


def check_agreement(workloads, backends) -> None:
    if len(backends) < 2:
        return
    names = list(backends)
    for label, fn in workloads.items():
        results = [fn(backends[n]) for n in names]
        first, second = results[0], results[1]
        if label.startswith("sim"):
            assert first[1] == second[1], f"{label}: totals differ"
            for s1, s2 in zip(first[0], second[0]):
                assert np.array_equal(s1, s2), f"{label}: schedules differ"
        else:
            np.testing.assert_allclose(first, second, rtol=1e-9, atol=1e-12, err_msg=label)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="take the best of N runs")
    args = parser.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    workloads = build_workloads()
    check_agreement(workloads, backends)

    header = f"{'workload':<28}" + "".join(f"{name + ' (s)':>14}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, fn in workloads.items():
        times = {name: _timeit(lambda: fn(impl), args.repeat) for name, impl in backends.items()}
        row = f"{label:<28}" + "".join(f"{times[name]:>14.6f}" for name in backends)
        if len(backends) > 1:
            ts = list(times.values())
            row += f"{ts[0] / ts[1]:>9.1f}x" if ts[1] else f"{'inf':>10}"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
