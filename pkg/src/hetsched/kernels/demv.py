"""Dense matrix-vector multiply: reference loop and unrolled streaming form.

The streaming engine works in two sequential steps: the input vector is
first burst-loaded into on-chip memory (one element per cycle), then the
matrix is streamed row by row.  The row loop is unrolled so that `unroll`
parallel accumulators each take every unroll-th term, which is what lets
the synthesized loop reach II=1; the accumulators are reduced in index
order afterwards.  Reassociation perturbs low-order float bits, so the
streaming result is specified to match the reference within 1e-6 relative.
"""

from __future__ import annotations

import numpy as np

from hetsched import backend
from hetsched.pipeline import (
    Composition,
    CycleCount,
    PipelineDescriptor,
    StageDescriptor,
    sequential_cycles,
)


def _check_dims(a: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.ascontiguousarray(a, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {a.shape}")
    if x.ndim != 1:
        raise ValueError(f"vector must be 1-D, got shape {x.shape}")
    if a.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: matrix is {a.shape[0]}x{a.shape[1]}, vector has {x.shape[0]}")
    return a, x


def demv_oracle(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Reference y = A x with left-to-right accumulation along each row."""
    a, x = _check_dims(a, x)
    return backend.demv_rows(a, x)


def demv_pipeline(
    rows: int,
    cols: int,
    unroll: int = 4,
    *,
    load_latency: int = 0,
    compute_latency: int = 0,
    clock_hz: float = 100e6,
) -> PipelineDescriptor:
    """Two-step sequential pipeline: vector load, then the unrolled row stream."""
    if rows < 0 or cols < 0:
        raise ValueError(f"dimensions must be >= 0, got {rows}x{cols}")
    if unroll < 1:
        raise ValueError(f"unroll must be >= 1, got {unroll}")
    padded = -(-cols // unroll) * unroll
    stages = (
        StageDescriptor("x-load", cols, 1, load_latency),
        StageDescriptor("compute", rows * padded // unroll, 1, compute_latency),
    )
    return PipelineDescriptor(stages=stages, composition=Composition.SEQUENTIAL, clock_hz=clock_hz)


def demv_stream(
    a: np.ndarray,
    x: np.ndarray,
    unroll: int = 4,
    *,
    load_latency: int = 0,
    compute_latency: int = 0,
    clock_hz: float = 100e6,
) -> tuple[np.ndarray, CycleCount]:
    """Unrolled streaming y = A x plus its two-step cycle cost.

    Columns are zero-padded up to a multiple of `unroll`, which leaves the
    product unchanged.
    """
    a, x = _check_dims(a, x)
    if unroll < 1:
        raise ValueError(f"unroll must be >= 1, got {unroll}")
    rows, cols = a.shape
    pad = (-cols) % unroll
    if pad:
        a = np.pad(a, ((0, 0), (0, pad)))
        x = np.pad(x, (0, pad))
    y = backend.demv_unrolled(a, x, unroll)
    cycles = sequential_cycles(
        demv_pipeline(
            rows,
            cols,
            unroll,
            load_latency=load_latency,
            compute_latency=compute_latency,
            clock_hz=clock_hz,
        )
    )
    return y, cycles


def read_matrix_csv(path) -> np.ndarray:
    values = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return values


def read_vector_csv(path) -> np.ndarray:
    values = np.loadtxt(path, delimiter=",", dtype=np.float64)
    return np.atleast_1d(values)


def write_vector_csv(path, y: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(np.asarray(y).tolist()):
            fh.write(f"{i},{v!r}\n")
