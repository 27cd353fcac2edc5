# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled inner loops: token-level pipeline issue schedules and the three
# streaming kernels.  hetsched.backend falls back to the pure-Python twin
# (hetsched._fallback) when this module is not built.

import numpy as np

BACKEND_NAME = "native"


def simulate_concurrent(iterations, latencies, long long beat):
    """Issue schedule for a beat-gated dataflow chain.

    Every stage issues one iteration per beat (the bottleneck stage's
    initiation interval); stage s sees its first token after the upstream
    stages' latencies have elapsed.  Returns (starts_per_stage, total),
    where total covers the longest stage's issue span plus the drain
    through all stage latencies.
    """
    cdef long long offset = 0, fill = 0, span = 0, t
    cdef Py_ssize_t i, n
    cdef long long[::1] view
    for lat in latencies:
        fill += <long long> lat
    starts = []
    for s in range(len(iterations)):
        n = <Py_ssize_t> iterations[s]
        arr = np.empty(n, dtype=np.int64)
        view = arr
        t = offset
        for i in range(n):
            view[i] = t
            t += beat
        if t - offset > span:
            span = t - offset
        offset += <long long> latencies[s]
        starts.append(arr)
    if not starts:
        return starts, 0
    return starts, span + fill


def simulate_sequential(iterations, iis, latencies):
    """Issue schedule for stages run back-to-back; returns (starts, total)."""
    cdef long long clock = 0, ii, t
    cdef Py_ssize_t i, n
    cdef long long[::1] view
    starts = []
    for s in range(len(iterations)):
        n = <Py_ssize_t> iterations[s]
        ii = <long long> iis[s]
        arr = np.empty(n, dtype=np.int64)
        view = arr
        t = clock
        for i in range(n):
            view[i] = t
            t += ii
        clock = t + <long long> latencies[s]
        starts.append(arr)
    return starts, clock


def hist_count(const unsigned char[::1] pixels):
    """Plain one-pass bin count of 8-bit values."""
    counts = np.zeros(256, dtype=np.int64)
    cdef long long[::1] c = counts
    cdef Py_ssize_t i
    for i in range(pixels.shape[0]):
        c[pixels[i]] += 1
    return counts


def hist_pairs(const unsigned char[::1] chunk):
    """Bin count consuming two pixels per step, as one streaming thread does.

    When both pixels of a step land in the same bin the conflict is resolved
    by a single +2 update; an odd trailing pixel contributes +1.
    """
    counts = np.zeros(256, dtype=np.int64)
    cdef long long[::1] c = counts
    cdef Py_ssize_t n = chunk.shape[0], k = n // 2, i
    cdef unsigned char a, b
    for i in range(k):
        a = chunk[2 * i]
        b = chunk[2 * i + 1]
        if a == b:
            c[a] += 2
        else:
            c[a] += 1
            c[b] += 1
    if n & 1:
        c[chunk[n - 1]] += 1
    return counts


def demv_rows(const double[:, ::1] a, const double[::1] x):
    """Dense matrix-vector product, accumulating left-to-right in each row."""
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1], i, j
    y = np.empty(n, dtype=np.float64)
    cdef double[::1] yv = y
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(m):
            acc += a[i, j] * x[j]
        yv[i] = acc
    return y


def demv_unrolled(const double[:, ::1] a, const double[::1] x, int unroll):
    """Dense matrix-vector product with `unroll` parallel accumulators per row.

    Columns must already be padded to a multiple of `unroll`; accumulator u
    collects the terms at column offset u within each group, and the
    accumulators are reduced in index order.
    """
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1], groups = m // unroll, i, t, u
    y = np.empty(n, dtype=np.float64)
    cdef double[::1] yv = y
    cdef double[::1] acc = np.zeros(unroll, dtype=np.float64)
    cdef double total
    for i in range(n):
        for u in range(unroll):
            acc[u] = 0.0
        for t in range(groups):
            for u in range(unroll):
                acc[u] += a[i, t * unroll + u] * x[t * unroll + u]
        total = 0.0
        for u in range(unroll):
            total += acc[u]
        yv[i] = total
    return y


def spmv_rows(const double[::1] values, const long long[::1] col,
              const long long[::1] rowptr, const double[::1] x):
    """CSR matrix-vector product, one row extent at a time."""
    cdef Py_ssize_t rows = rowptr.shape[0] - 1, i
    cdef long long k
    y = np.zeros(rows, dtype=np.float64)
    cdef double[::1] yv = y
    cdef double acc
    for i in range(rows):
        acc = 0.0
        for k in range(rowptr[i], rowptr[i + 1]):
            acc += values[k] * x[col[k]]
        yv[i] = acc
    return y


def spmv_stream(const double[::1] values, const long long[::1] col,
                const long long[::1] rowptr, const double[::1] x):
    """CSR matrix-vector product as a single pass over the nonzero stream.

    A running accumulator is flushed to the output whenever the row pointer
    says the current row's extent has ended (empty rows flush immediately).
    """
    cdef Py_ssize_t rows = rowptr.shape[0] - 1, nnz = values.shape[0], k, r = 0
    y = np.zeros(rows, dtype=np.float64)
    cdef double[::1] yv = y
    cdef double acc = 0.0
    for k in range(nnz):
        while rowptr[r + 1] == k:
            yv[r] = acc
            acc = 0.0
            r += 1
        acc += values[k] * x[col[k]]
    while r < rows:
        yv[r] = acc
        acc = 0.0
        r += 1
    return y
