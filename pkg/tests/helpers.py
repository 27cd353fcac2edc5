"""Shared test utilities: random descriptor generators and error measures."""

from __future__ import annotations

import numpy as np

from hetsched.pipeline import Composition, PipelineDescriptor, StageDescriptor


def rel_err(got, want) -> float:
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    if got.size == 0:
        return 0.0
    return float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1.0)))


def random_pipeline(
    rng: np.random.Generator,
    max_stages: int = 8,
    max_iterations: int = 10_000,
    max_ii: int = 8,
    max_latency: int = 64,
    composition=None,
) -> PipelineDescriptor:
    n_stages = int(rng.integers(0, max_stages + 1))
    stages = tuple(
        StageDescriptor(
            label=f"s{i}",
            iterations=int(rng.integers(0, max_iterations + 1)),
            initiation_interval=int(rng.integers(1, max_ii + 1)),
            iteration_latency=int(rng.integers(0, max_latency + 1)),
        )
        for i in range(n_stages)
    )
    if composition is None:
        composition = Composition.CONCURRENT if rng.integers(2) else Composition.SEQUENTIAL
    return PipelineDescriptor(stages=stages, composition=composition, clock_hz=100e6)
