"""Stage-weighted average power and energy for streaming pipelines.

Each stage contributes its average power weighted by its share of the total
iteration count; per-iteration fill latencies are deliberately excluded from
the weights.  The weighted average is evaluated with exact rational
arithmetic so that it is a true convex combination and is invariant under a
common scaling of the iteration counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real


@dataclass(frozen=True)
class StagePower:
    """Per-stage iteration count and average power draw."""

    iterations: int       # weight mass, >= 0
    avg_power_w: float    # watts, >= 0

    def __post_init__(self):
        if isinstance(self.iterations, bool) or not isinstance(self.iterations, int) or self.iterations < 0:
            raise ValueError(f"iterations must be a nonnegative integer, got {self.iterations!r}")
        if not isinstance(self.avg_power_w, Real) or self.avg_power_w < 0:
            raise ValueError(f"avg_power_w must be >= 0, got {self.avg_power_w!r}")


@dataclass(frozen=True)
class EnergyReport:
    avg_power_w: float
    duration_s: float
    energy_j: float


def weighted_average_power(stages) -> float:
    """Iteration-weighted average power over a stage list, in watts.

    P = sum_s (iterations_s / total_iterations) * power_s, evaluated exactly
    and rounded once on return.  At least one stage must carry weight.
    """
    stages = list(stages)
    total = sum(s.iterations for s in stages)
    if total == 0:
        raise ValueError("no weight mass: all stage iteration counts are zero")
    acc = Fraction(0)
    for s in stages:
        if s.iterations:
            acc += Fraction(s.iterations, total) * Fraction(s.avg_power_w)
    return float(acc)


def energy(avg_power_w: float, duration_s: float) -> EnergyReport:
    """Energy in joules for a constant average power over a duration."""
    if avg_power_w < 0:
        raise ValueError(f"avg_power_w must be >= 0, got {avg_power_w}")
    if duration_s < 0:
        raise ValueError(f"duration_s must be >= 0, got {duration_s}")
    return EnergyReport(avg_power_w=avg_power_w, duration_s=duration_s, energy_j=avg_power_w * duration_s)


def stage_powers_from_doc(doc: dict):
    """Extract per-stage StagePower entries from a pipeline JSON document.

    Returns None unless every stage in the document carries a "power_w" key.
    """
    stages = doc.get("stages")
    if not isinstance(stages, list) or not stages:
        return None
    if not all(isinstance(s, dict) and "power_w" in s for s in stages):
        return None
    out = []
    for i, s in enumerate(stages):
        power = s["power_w"]
        if isinstance(power, bool) or not isinstance(power, Real) or power < 0:
            raise ValueError(f"stages[{i}].power_w: must be a number >= 0, got {power!r}")
        out.append(StagePower(iterations=int(s.get("iterations", 0)), avg_power_w=float(power)))
    return out
