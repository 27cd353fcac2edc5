"""Token-level execution of pipeline descriptors.

This is the cycle-exact counterpart of the closed-form model in
hetsched.pipeline: instead of evaluating a formula, it walks the issue
schedule token by token and records when every iteration of every stage
starts and finishes.

Concurrent composition is simulated as a beat-gated dataflow chain with
depth-1 handoff between stages: the stage with the largest initiation
interval stalls everyone else, so all stages issue on a common beat, and
stage s receives its first token only after the upstream iteration
latencies have elapsed.  Iteration i of stage s+1 therefore starts exactly
when iteration i of stage s finishes.  Sequential composition runs the
stages back-to-back, each issuing at its own initiation interval.

The recorded interval between consecutive starts within a stage is the
stage's operative interval: the common beat for concurrent chains, the
stage's own II for sequential steps.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from hetsched import backend
from hetsched.pipeline import Composition, PipelineDescriptor


@dataclass(frozen=True)
class StageTrace:
    """Per-iteration start cycles for one stage."""

    label: str
    operative_interval: int  # cycles between consecutive starts
    iteration_latency: int   # finish = start + latency
    starts: np.ndarray       # int64, one entry per iteration

    def records(self):
        """Yield (iteration index, start cycle, finish cycle) tuples."""
        lat = self.iteration_latency
        for i, start in enumerate(self.starts.tolist()):
            yield i, start, start + lat


@dataclass(frozen=True)
class TokenTrace:
    """Cycle-exact issue schedule of a simulated pipeline."""

    composition: Composition
    stages: tuple[StageTrace, ...]
    total_cycles: int

    def records(self):
        """Yield (stage label, iteration, start cycle, finish cycle) rows."""
        for stage in self.stages:
            for i, start, finish in stage.records():
                yield stage.label, i, start, finish

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["stage", "iteration", "start_cycle", "finish_cycle"])
            writer.writerows(self.records())


def simulate_pipeline(p: PipelineDescriptor) -> TokenTrace:
    """Run the token-level simulation of a pipeline descriptor."""
    iterations = [s.iterations for s in p.stages]
    latencies = [s.iteration_latency for s in p.stages]
    if p.composition is Composition.CONCURRENT:
        beat = p.max_initiation_interval
        starts, total = backend.simulate_concurrent(iterations, latencies, beat)
        intervals = [beat] * len(p.stages)
    else:
        iis = [s.initiation_interval for s in p.stages]
        starts, total = backend.simulate_sequential(iterations, iis, latencies)
        intervals = iis
    stages = tuple(
        StageTrace(
            label=s.label,
            operative_interval=intervals[i],
            iteration_latency=s.iteration_latency,
            starts=starts[i],
        )
        for i, s in enumerate(p.stages)
    )
    return TokenTrace(composition=p.composition, stages=stages, total_cycles=int(total))
