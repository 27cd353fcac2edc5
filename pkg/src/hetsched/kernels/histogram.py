"""Image histogram: reference count and its streaming-engine emulation.

The streaming variant mirrors a hardware engine fed by a wide memory port:
a read stage delivers one 512-bit word (64 pixels) per cycle, and each of
the parallel hardware threads consumes two pixels per iteration at II=2,
resolving a same-bin conflict with a single +2 update.  Each thread owns a
partial bin array over a contiguous slice of the image; the partials merge
by elementwise sum.  The merge itself is excluded from the cycle model.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from hetsched import backend
from hetsched.kernels.image import Image
from hetsched.pipeline import (
    Composition,
    CycleCount,
    PipelineDescriptor,
    StageDescriptor,
    concurrent_cycles,
)

WORD_PIXELS = 64  # 512-bit memory word / 8-bit pixels
BINS = 256


def histogram_oracle(img: Image) -> np.ndarray:
    """Reference bin counts: bins[v] = number of pixels equal to v."""
    return backend.hist_count(img.pixels)


def histogram_pipeline(
    pixel_count: int,
    threads: int = 64,
    *,
    read_latency: int = 0,
    compute_latency: int = 0,
    clock_hz: float = 100e6,
) -> PipelineDescriptor:
    """Dataflow pipeline for the streaming histogram engine.

    Read stage: one 64-pixel word per cycle.  Compute stage: the widest
    thread's pair iterations at II=2 (threads run side by side, so the
    per-thread trip count is what bounds the chain).
    """
    if pixel_count < 0:
        raise ValueError(f"pixel_count must be >= 0, got {pixel_count}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    per_thread = math.ceil(pixel_count / threads) if pixel_count else 0
    stages = (
        StageDescriptor("read", math.ceil(pixel_count / WORD_PIXELS), 1, read_latency),
        StageDescriptor("compute", math.ceil(per_thread / 2), 2, compute_latency),
    )
    return PipelineDescriptor(stages=stages, composition=Composition.CONCURRENT, clock_hz=clock_hz)


def histogram_stream(
    img: Image,
    threads: int = 64,
    *,
    read_latency: int = 0,
    compute_latency: int = 0,
    clock_hz: float = 100e6,
) -> tuple[np.ndarray, CycleCount]:
    """Streaming histogram: merged per-thread partial bins plus the cycle cost."""
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    pixels = img.pixels
    chunk = math.ceil(pixels.size / threads) if pixels.size else 0
    bins = np.zeros(BINS, dtype=np.int64)
    for t in range(threads):
        part = pixels[t * chunk : (t + 1) * chunk]
        if part.size:
            bins += backend.hist_pairs(part)
    cycles = concurrent_cycles(
        histogram_pipeline(
            pixels.size,
            threads,
            read_latency=read_latency,
            compute_latency=compute_latency,
            clock_hz=clock_hz,
        )
    )
    return bins, cycles


def write_histogram_csv(path, bins: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin", "count"])
        writer.writerows(enumerate(bins.tolist()))
