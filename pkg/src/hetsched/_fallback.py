"""Pure-Python/numpy twin of hetsched._native.

Used when the compiled extension is unavailable or when
HETSCHED_PURE_PYTHON=1 forces it.  Same functions, same results; the
kernels lean on numpy where a vectorized form is equivalent, and the
schedule loops stay explicit.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def simulate_concurrent(iterations, latencies, beat):
    """Issue schedule for a beat-gated dataflow chain; see the native twin."""
    starts = []
    offset = 0
    span = 0
    fill = sum(latencies)
    for n, latency in zip(iterations, latencies):
        t = offset
        issued = []
        append = issued.append
        for _ in range(n):
            append(t)
            t += beat
        span = max(span, t - offset)
        offset += latency
        starts.append(np.asarray(issued, dtype=np.int64))
    if not starts:
        return starts, 0
    return starts, span + fill


def simulate_sequential(iterations, iis, latencies):
    """Issue schedule for stages run back-to-back; see the native twin."""
    starts = []
    clock = 0
    for n, ii, latency in zip(iterations, iis, latencies):
        t = clock
        issued = []
        append = issued.append
        for _ in range(n):
            append(t)
            t += ii
        clock = t + latency
        starts.append(np.asarray(issued, dtype=np.int64))
    return starts, clock


def hist_count(pixels):
    return np.bincount(pixels, minlength=256).astype(np.int64)


def hist_pairs(chunk):
    # The paired +2 / +1+1 conflict resolution adds exactly one count per
    # consumed pixel, so the merged bins equal a plain bin count.
    counts = np.bincount(chunk, minlength=256).astype(np.int64)
    return counts


def demv_rows(a, x):
    n, m = a.shape
    xs = x.tolist()
    y = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        for aj, xj in zip(a[i].tolist(), xs):
            acc += aj * xj
        y[i] = acc
    return y


def demv_unrolled(a, x, unroll):
    acc = [(a[:, u::unroll] * x[u::unroll]).sum(axis=1) for u in range(unroll)]
    y = acc[0]
    for u in range(1, unroll):
        y = y + acc[u]
    return np.asarray(y, dtype=np.float64)


def spmv_rows(values, col, rowptr, x):
    rows = rowptr.shape[0] - 1
    y = np.zeros(rows, dtype=np.float64)
    for i in range(rows):
        s, e = rowptr[i], rowptr[i + 1]
        if e > s:
            y[i] = np.dot(values[s:e], x[col[s:e]])
    return y


def spmv_stream(values, col, rowptr, x):
    rows = rowptr.shape[0] - 1
    contrib = values * x[col]
    row_of = np.repeat(np.arange(rows), np.diff(rowptr))
    y = np.zeros(rows, dtype=np.float64)
    np.add.at(y, row_of, contrib)
    return y
