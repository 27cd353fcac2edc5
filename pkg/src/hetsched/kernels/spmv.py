"""Sparse matrix-vector multiply over CSR storage, plus Matrix Market I/O.

The streaming engine first burst-loads the dense input vector (it is
reused by every row), then walks the nonzero stream once; row-pointer
boundaries tell it when to flush the running accumulator to the output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hetsched import backend
from hetsched.pipeline import (
    Composition,
    CycleCount,
    PipelineDescriptor,
    StageDescriptor,
    sequential_cycles,
)


@dataclass(frozen=True)
class CsrMatrix:
    """Compressed sparse row matrix."""

    rows: int
    cols: int
    values: np.ndarray       # float64, nnz entries
    col_indices: np.ndarray  # int64, nnz entries in [0, cols)
    row_ptr: np.ndarray      # int64, rows + 1 nondecreasing offsets into values

    def __post_init__(self):
        object.__setattr__(self, "values", np.ascontiguousarray(self.values, dtype=np.float64))
        object.__setattr__(self, "col_indices", np.ascontiguousarray(self.col_indices, dtype=np.int64))
        object.__setattr__(self, "row_ptr", np.ascontiguousarray(self.row_ptr, dtype=np.int64))

    @property
    def nnz(self) -> int:
        return self.values.size

    def validate(self) -> "CsrMatrix":
        """Check every CSR invariant; the raised message names the failed one."""
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError(f"CSR: rows and cols must be positive, got {self.rows}x{self.cols}")
        if self.col_indices.shape != self.values.shape:
            raise ValueError(
                f"CSR: values and col_indices lengths differ ({self.values.size} vs {self.col_indices.size})"
            )
        if self.row_ptr.size != self.rows + 1:
            raise ValueError(f"CSR: row_ptr length must be rows+1 = {self.rows + 1}, got {self.row_ptr.size}")
        if self.row_ptr[0] != 0:
            raise ValueError(f"CSR: row_ptr[0] must be 0, got {self.row_ptr[0]}")
        if np.any(np.diff(self.row_ptr) < 0):
            raise ValueError("CSR: row_ptr must be nondecreasing")
        if self.row_ptr[-1] != self.nnz:
            raise ValueError(f"CSR: row_ptr[rows] must equal nnz = {self.nnz}, got {self.row_ptr[-1]}")
        if self.nnz and (self.col_indices.min() < 0 or self.col_indices.max() >= self.cols):
            raise ValueError(f"CSR: column indices must lie in [0, {self.cols})")
        for i in range(self.rows):
            row = self.col_indices[self.row_ptr[i] : self.row_ptr[i + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise ValueError(f"CSR: column indices must be strictly increasing within row {i}")
        return self

    def densify(self) -> np.ndarray:
        """Expand to a dense rows x cols array."""
        dense = np.zeros((self.rows, self.cols), dtype=np.float64)
        for i in range(self.rows):
            s, e = self.row_ptr[i], self.row_ptr[i + 1]
            dense[i, self.col_indices[s:e]] = self.values[s:e]
        return dense


def csr_from_entries(rows: int, cols: int, entries) -> CsrMatrix:
    """Build a CsrMatrix from (row, col, value) triples; duplicates are summed."""
    merged: dict = {}
    for r, c, v in entries:
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"entry ({r}, {c}) outside {rows}x{cols}")
        key = (r, c)
        merged[key] = merged.get(key, 0.0) + v
    keys = sorted(merged)
    values = np.array([merged[k] for k in keys], dtype=np.float64)
    col_indices = np.array([k[1] for k in keys], dtype=np.int64)
    counts = np.zeros(rows, dtype=np.int64)
    for r, _ in keys:
        counts[r] += 1
    row_ptr = np.concatenate(([0], np.cumsum(counts)))
    return CsrMatrix(rows, cols, values, col_indices, row_ptr).validate()


def random_csr(rows: int, cols: int, density: float, rng: np.random.Generator) -> CsrMatrix:
    """Random CSR matrix with roughly `density` fraction of nonzero entries."""
    nnz_target = int(round(rows * cols * density))
    flat = rng.choice(rows * cols, size=min(nnz_target, rows * cols), replace=False)
    entries = [(int(f) // cols, int(f) % cols, float(v)) for f, v in zip(flat, rng.uniform(-1.0, 1.0, flat.size))]
    return csr_from_entries(rows, cols, entries)


def spmv_oracle(m: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Reference y = M x: per-row accumulation over the row's extent."""
    m.validate()
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (m.cols,):
        raise ValueError(f"dimension mismatch: matrix is {m.rows}x{m.cols}, vector has {x.shape}")
    return backend.spmv_rows(m.values, m.col_indices, m.row_ptr, x)


def spmv_pipeline(
    rows: int,
    cols: int,
    nnz: int,
    *,
    load_latency: int = 0,
    compute_latency: int = 0,
    clock_hz: float = 100e6,
) -> PipelineDescriptor:
    """Two-step sequential pipeline: vector load, then the nonzero traversal."""
    if rows < 0 or cols < 0 or nnz < 0:
        raise ValueError(f"dimensions must be >= 0, got rows={rows} cols={cols} nnz={nnz}")
    stages = (
        StageDescriptor("x-load", cols, 1, load_latency),
        StageDescriptor("traversal", nnz, 1, compute_latency),
    )
    return PipelineDescriptor(stages=stages, composition=Composition.SEQUENTIAL, clock_hz=clock_hz)


def spmv_stream(
    m: CsrMatrix,
    x: np.ndarray,
    *,
    load_latency: int = 0,
    compute_latency: int = 0,
    clock_hz: float = 100e6,
) -> tuple[np.ndarray, CycleCount]:
    """Streaming y = M x plus its two-step cycle cost."""
    m.validate()
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (m.cols,):
        raise ValueError(f"dimension mismatch: matrix is {m.rows}x{m.cols}, vector has {x.shape}")
    y = backend.spmv_stream(m.values, m.col_indices, m.row_ptr, x)
    cycles = sequential_cycles(
        spmv_pipeline(
            m.rows,
            m.cols,
            m.nnz,
            load_latency=load_latency,
            compute_latency=compute_latency,
            clock_hz=clock_hz,
        )
    )
    return y, cycles


# ---------------------------------------------------------------------------
# Matrix Market coordinate format (real/integer/pattern, general/symmetric)
# ---------------------------------------------------------------------------


def read_matrix_market(path) -> CsrMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        parts = header.lower().split()
        if len(parts) != 5 or parts[0] != "%%matrixmarket" or parts[1] != "matrix":
            raise ValueError(f"{path}: not a Matrix Market file (header {header!r})")
        layout, field, symmetry = parts[2], parts[3], parts[4]
        if layout != "coordinate":
            raise ValueError(f"{path}: only coordinate layout supported, got {layout!r}")
        if field not in ("real", "integer", "pattern"):
            raise ValueError(f"{path}: unsupported field type {field!r}")
        if symmetry not in ("general", "symmetric"):
            raise ValueError(f"{path}: unsupported symmetry {symmetry!r}")

        line = fh.readline()
        while line and (line.startswith("%") or not line.strip()):
            line = fh.readline()
        try:
            rows, cols, nnz = (int(tok) for tok in line.split())
        except ValueError:
            raise ValueError(f"{path}: bad size line {line!r}") from None

        entries = []
        data_lines = 0
        for line in fh:
            if not line.strip() or line.startswith("%"):
                continue
            toks = line.split()
            try:
                r, c = int(toks[0]) - 1, int(toks[1]) - 1
                v = 1.0 if field == "pattern" else float(toks[2])
            except (IndexError, ValueError):
                raise ValueError(f"{path}: bad entry line {line!r}") from None
            data_lines += 1
            entries.append((r, c, v))
            if symmetry == "symmetric" and r != c:
                entries.append((c, r, v))
        if data_lines != nnz:
            raise ValueError(f"{path}: size line declares {nnz} entries, file has {data_lines}")
    return csr_from_entries(rows, cols, entries)


def write_matrix_market(path, m: CsrMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        fh.write(f"{m.rows} {m.cols} {m.nnz}\n")
        for i in range(m.rows):
            for k in range(m.row_ptr[i], m.row_ptr[i + 1]):
                fh.write(f"{i + 1} {m.col_indices[k] + 1} {float(m.values[k])!r}\n")
