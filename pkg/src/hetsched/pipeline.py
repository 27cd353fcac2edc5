"""Analytic clock-cycle model for streaming pipelined loops.

A compute engine is described as an ordered list of pipelined loop stages.
Each stage has a trip count, an initiation interval (II, the minimum number
of clock cycles between the starts of two consecutive iterations) and a
per-iteration latency.  Stages either run concurrently as a dataflow chain
(the bottleneck stage's II gates the whole chain) or back-to-back as
sequential steps.

Cycle arithmetic is exact integer arithmetic throughout; only the
conversion to seconds introduces floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from numbers import Real
from typing import Optional


class Composition(Enum):
    """How the stages of a pipeline are composed."""

    CONCURRENT = "concurrent"
    SEQUENTIAL = "sequential"


class PipelineFormatError(ValueError):
    """Raised when a pipeline JSON document is malformed."""


def _require_int(value, minimum: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise PipelineFormatError(f"{where}: expected an integer, got {value!r}")
    if value < minimum:
        raise PipelineFormatError(f"{where}: must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class StageDescriptor:
    """One pipelined loop stage."""

    label: str
    iterations: int           # trip count, >= 0
    initiation_interval: int  # cycles between consecutive iteration starts, >= 1
    iteration_latency: int    # cycles for one iteration start-to-finish, >= 0

    def __post_init__(self):
        _require_int(self.iterations, 0, f"stage {self.label!r}: iterations")
        _require_int(self.initiation_interval, 1, f"stage {self.label!r}: initiation_interval")
        _require_int(self.iteration_latency, 0, f"stage {self.label!r}: iteration_latency")


@dataclass(frozen=True)
class PipelineDescriptor:
    """An ordered stage list plus composition mode and clock frequency."""

    stages: tuple[StageDescriptor, ...]
    composition: Composition
    clock_hz: float = 100e6  # typical user-design clock for the modeled fabric

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not isinstance(self.composition, Composition):
            raise PipelineFormatError(f"composition: expected Composition, got {self.composition!r}")
        if not isinstance(self.clock_hz, Real) or not self.clock_hz > 0:
            raise PipelineFormatError(f"clock_hz: must be > 0, got {self.clock_hz!r}")

    @property
    def fill_latency(self) -> int:
        """Sum of per-iteration latencies over all stages (pipeline fill cost)."""
        return sum(s.iteration_latency for s in self.stages)

    @property
    def max_iterations(self) -> int:
        return max((s.iterations for s in self.stages), default=0)

    @property
    def max_initiation_interval(self) -> int:
        return max((s.initiation_interval for s in self.stages), default=1)


@dataclass(frozen=True)
class CycleCount:
    """An exact cycle count and its wall-clock equivalent."""

    cycles: int
    seconds: float

    @classmethod
    def at_clock(cls, cycles: int, clock_hz: float) -> "CycleCount":
        return cls(cycles=cycles, seconds=execution_time(cycles, clock_hz))


def execution_time(cycles, clock_hz: float) -> float:
    """Convert a cycle count (int or CycleCount) at a clock frequency to seconds."""
    if isinstance(cycles, CycleCount):
        cycles = cycles.cycles
    if cycles < 0:
        raise ValueError(f"cycles must be >= 0, got {cycles}")
    if not clock_hz > 0:
        raise ValueError(f"clock_hz must be > 0, got {clock_hz}")
    return cycles / clock_hz


def concurrent_cycles(p: PipelineDescriptor) -> CycleCount:
    """Cycles for a dataflow chain of concurrently running stages.

    The stage with the largest initiation interval gates the issue rate of
    the whole chain, so the chain spends (max trip count) x (max II) cycles
    issuing and then drains through the accumulated stage latencies:

        cycles = max(iterations) * max(II) + sum(latency)

    The maxima are taken independently over the stage list; an empty
    pipeline costs zero cycles.
    """
    if p.composition is not Composition.CONCURRENT:
        raise ValueError("concurrent_cycles requires a Concurrent pipeline")
    if not p.stages:
        return CycleCount.at_clock(0, p.clock_hz)
    cycles = p.max_iterations * p.max_initiation_interval + p.fill_latency
    return CycleCount.at_clock(cycles, p.clock_hz)


def sequential_cycles(p: PipelineDescriptor) -> CycleCount:
    """Cycles for stages executed back-to-back as sequential steps.

        cycles = sum over stages of (iterations * II + latency)
    """
    if p.composition is not Composition.SEQUENTIAL:
        raise ValueError("sequential_cycles requires a Sequential pipeline")
    cycles = sum(s.iterations * s.initiation_interval + s.iteration_latency for s in p.stages)
    return CycleCount.at_clock(cycles, p.clock_hz)


def pipeline_cycles(p: PipelineDescriptor) -> CycleCount:
    """Dispatch to concurrent_cycles or sequential_cycles by composition."""
    if p.composition is Composition.CONCURRENT:
        return concurrent_cycles(p)
    return sequential_cycles(p)


def approx_cycles(p: PipelineDescriptor) -> CycleCount:
    """Dominant-term cycle estimate: the exact count with all latencies dropped.

    Concurrent pipelines keep max(iterations) * max(II); sequential pipelines
    keep every stage's iterations * II term (only the per-iteration latencies
    are dropped, so subdominant trip counts still contribute).
    """
    if not p.stages:
        return CycleCount.at_clock(0, p.clock_hz)
    if p.composition is Composition.CONCURRENT:
        cycles = p.max_iterations * p.max_initiation_interval
    else:
        cycles = sum(s.iterations * s.initiation_interval for s in p.stages)
    return CycleCount.at_clock(cycles, p.clock_hz)


# ---------------------------------------------------------------------------
# JSON document format
#
#   {"composition": "concurrent" | "sequential",
#    "clock_hz": <number>,
#    "stages": [{"label": <str>, "iterations": <int>, "ii": <int>,
#                "latency": <int>, "power_w": <number, optional>}, ...]}
# ---------------------------------------------------------------------------


def pipeline_from_doc(doc: dict) -> PipelineDescriptor:
    """Build a PipelineDescriptor from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise PipelineFormatError(f"top level: expected an object, got {type(doc).__name__}")
    try:
        mode = Composition(doc.get("composition"))
    except ValueError:
        raise PipelineFormatError(
            f"composition: expected 'concurrent' or 'sequential', got {doc.get('composition')!r}"
        ) from None
    clock = doc.get("clock_hz")
    if isinstance(clock, bool) or not isinstance(clock, Real) or not clock > 0:
        raise PipelineFormatError(f"clock_hz: must be a number > 0, got {clock!r}")
    raw_stages = doc.get("stages")
    if not isinstance(raw_stages, list):
        raise PipelineFormatError(f"stages: expected a list, got {raw_stages!r}")
    stages = []
    for i, raw in enumerate(raw_stages):
        where = f"stages[{i}]"
        if not isinstance(raw, dict):
            raise PipelineFormatError(f"{where}: expected an object, got {raw!r}")
        label = raw.get("label", f"stage{i}")
        if not isinstance(label, str):
            raise PipelineFormatError(f"{where}.label: expected a string, got {label!r}")
        stages.append(
            StageDescriptor(
                label=label,
                iterations=_require_int(raw.get("iterations"), 0, f"{where}.iterations"),
                initiation_interval=_require_int(raw.get("ii"), 1, f"{where}.ii"),
                iteration_latency=_require_int(raw.get("latency"), 0, f"{where}.latency"),
            )
        )
    return PipelineDescriptor(stages=tuple(stages), composition=mode, clock_hz=float(clock))


def pipeline_to_doc(p: PipelineDescriptor, stage_powers_w: Optional[list] = None) -> dict:
    """Serialize a pipeline (optionally with per-stage average power in watts)."""
    if stage_powers_w is not None and len(stage_powers_w) != len(p.stages):
        raise ValueError("stage_powers_w must have one entry per stage")
    stages = []
    for i, s in enumerate(p.stages):
        entry = {
            "label": s.label,
            "iterations": s.iterations,
            "ii": s.initiation_interval,
            "latency": s.iteration_latency,
        }
        if stage_powers_w is not None:
            entry["power_w"] = stage_powers_w[i]
        stages.append(entry)
    return {"composition": p.composition.value, "clock_hz": p.clock_hz, "stages": stages}


def read_pipeline(path) -> tuple[PipelineDescriptor, dict]:
    """Read a pipeline JSON file; returns (descriptor, raw document)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise PipelineFormatError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    try:
        return pipeline_from_doc(doc), doc
    except PipelineFormatError as e:
        raise PipelineFormatError(f"{path}: {e}") from None


def write_pipeline(path, p: PipelineDescriptor, stage_powers_w: Optional[list] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pipeline_to_doc(p, stage_powers_w), fh, indent=2)
        fh.write("\n")
