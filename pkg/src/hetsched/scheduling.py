"""Device calibration and balanced FPGA/GPU workload splitting.

Each device is summarized by a linear time model, t = coeff * items, fitted
through the origin from (items, seconds) measurements.  The split between
the two devices is chosen so both finish at the same time under that model:
with alpha = fpga_coeff / gpu_coeff (the GPU's per-item speed advantage),
the FPGA receives items / (1 + alpha) and the GPU the remainder.

The integer split is computed with exact rational arithmetic and a
round-half-up rule so results are reproducible bit-for-bit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Real


@dataclass(frozen=True)
class DeviceProfile:
    """A calibrated device: linear time coefficient plus power draw."""

    name: str
    time_coeff_s_per_item: float  # seconds per work item, > 0
    active_power_w: float = 0.0   # draw while busy
    idle_power_w: float = 0.0     # draw while waiting for the other device

    def __post_init__(self):
        if not self.time_coeff_s_per_item > 0:
            raise ValueError(f"time_coeff_s_per_item must be > 0, got {self.time_coeff_s_per_item!r}")
        if self.active_power_w < 0 or self.idle_power_w < 0:
            raise ValueError("power coefficients must be >= 0")


@dataclass(frozen=True)
class SplitPlan:
    """A two-device partition with its predicted per-device cost."""

    total_items: int
    n_fpga: int
    n_gpu: int
    alpha: float      # fpga_coeff / gpu_coeff
    t_fpga_s: float = 0.0
    t_gpu_s: float = 0.0
    e_fpga_j: float = 0.0
    e_gpu_j: float = 0.0

    @property
    def combined_time_s(self) -> float:
        return max(self.t_fpga_s, self.t_gpu_s)

    @property
    def combined_energy_j(self) -> float:
        return self.e_fpga_j + self.e_gpu_j


@dataclass(frozen=True)
class ImprovementReport:
    """Speedup and energy factors of a split against a single-device baseline."""

    baseline_time_s: float
    combined_time_s: float
    speedup: float
    baseline_energy_j: float
    combined_energy_j: float
    energy_factor: float


@dataclass(frozen=True)
class CalibrationFit:
    """Least-squares-through-origin fit of the linear time model."""

    time_coeff_s_per_item: float  # fitted seconds per item
    residual_rms: float           # RMS of (measured - fitted) seconds
    samples: int


def fit_time_coeff(samples) -> CalibrationFit:
    """Fit t = coeff * items through the origin.

    coeff = sum(t_i * n_i) / sum(n_i^2).  The residual RMS is returned so a
    poor fit (a device whose speed depends on data content, not just size)
    is visible to the caller.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("at least one (items, seconds) sample is required")
    for items, seconds in samples:
        if items <= 0 or seconds <= 0:
            raise ValueError(f"samples must be positive, got ({items}, {seconds})")
    num = sum(t * n for n, t in samples)
    den = sum(n * n for n, t in samples)
    coeff = num / den
    sq = sum((t - coeff * n) ** 2 for n, t in samples)
    return CalibrationFit(
        time_coeff_s_per_item=coeff,
        residual_rms=math.sqrt(sq / len(samples)),
        samples=len(samples),
    )


def speedup_alpha(fpga_coeff: float, gpu_coeff: float) -> float:
    """GPU speed-up relative to the FPGA: the ratio of per-item coefficients."""
    if not fpga_coeff > 0 or not gpu_coeff > 0:
        raise ValueError("time coefficients must be > 0")
    return fpga_coeff / gpu_coeff


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def split_workload(n: int, alpha) -> SplitPlan:
    """Partition n items so both devices finish together under the linear model.

    The FPGA share n / (1 + alpha) is evaluated with exact rational
    arithmetic (floats convert exactly) and rounded half-up to an integer;
    the GPU receives the remainder, so the partition always conserves n.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    alpha_exact = Fraction(alpha)
    if alpha_exact <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    n_fpga = _round_half_up(Fraction(n) / (1 + alpha_exact))
    return SplitPlan(total_items=n, n_fpga=n_fpga, n_gpu=n - n_fpga, alpha=float(alpha_exact))


def predict(plan: SplitPlan, fpga: DeviceProfile, gpu: DeviceProfile, co_idle: bool = False) -> SplitPlan:
    """Fill in predicted per-device times and energies for a partition.

    Energy defaults to active power times own busy time.  With co_idle=True
    each device additionally burns idle power while waiting for the slower
    one to finish.
    """
    t_fpga = fpga.time_coeff_s_per_item * plan.n_fpga
    t_gpu = gpu.time_coeff_s_per_item * plan.n_gpu
    e_fpga = fpga.active_power_w * t_fpga
    e_gpu = gpu.active_power_w * t_gpu
    if co_idle:
        e_fpga += fpga.idle_power_w * max(0.0, t_gpu - t_fpga)
        e_gpu += gpu.idle_power_w * max(0.0, t_fpga - t_gpu)
    return replace(plan, t_fpga_s=t_fpga, t_gpu_s=t_gpu, e_fpga_j=e_fpga, e_gpu_j=e_gpu)


def improvement_report(baseline_time_s: float, baseline_energy_j: float, plan: SplitPlan) -> ImprovementReport:
    """Compare a completed plan against single-device baseline time and energy."""
    if not baseline_time_s > 0 or not baseline_energy_j > 0:
        raise ValueError("baseline time and energy must be > 0")
    combined_time = plan.combined_time_s
    combined_energy = plan.combined_energy_j
    if combined_time == 0:
        raise ValueError("plan has zero combined time; run predict() first")
    if combined_energy == 0:
        raise ValueError("plan has zero combined energy; run predict() with powered profiles")
    return ImprovementReport(
        baseline_time_s=baseline_time_s,
        combined_time_s=combined_time,
        speedup=baseline_time_s / combined_time,
        baseline_energy_j=baseline_energy_j,
        combined_energy_j=combined_energy,
        energy_factor=baseline_energy_j / combined_energy,
    )


def ideal_speedup(alpha) -> float:
    """Best-case speedup over a GPU-only baseline when the linear model is exact.

    The GPU keeps alpha/(1+alpha) of the items, so the combined run takes
    that fraction of the baseline: the speedup is (1 + alpha) / alpha.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    return (1 + alpha) / alpha


# ---------------------------------------------------------------------------
# File formats: device-profile JSON and measurement CSV
# ---------------------------------------------------------------------------


def profile_from_doc(doc: dict) -> DeviceProfile:
    if not isinstance(doc, dict):
        raise ValueError(f"device profile: expected an object, got {type(doc).__name__}")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ValueError(f"device profile: 'name' must be a nonempty string, got {name!r}")
    coeff = doc.get("time_coeff_s_per_item")
    if not isinstance(coeff, Real) or not coeff > 0:
        raise ValueError(f"device profile {name!r}: 'time_coeff_s_per_item' must be > 0, got {coeff!r}")
    active = doc.get("active_power_w")
    accel = doc.get("accel_power_w")
    memory = doc.get("memory_power_w")
    if active is None and accel is not None and memory is not None:
        # accelerator + memory components supplied instead of a lumped figure
        active = accel + memory
    if active is None:
        active = 0.0
    idle = doc.get("idle_power_w", 0.0)
    for key, val in (("active_power_w", active), ("idle_power_w", idle)):
        if isinstance(val, bool) or not isinstance(val, Real) or val < 0:
            raise ValueError(f"device profile {name!r}: {key!r} must be a number >= 0, got {val!r}")
    return DeviceProfile(
        name=name,
        time_coeff_s_per_item=float(coeff),
        active_power_w=float(active),
        idle_power_w=float(idle),
    )


def profile_to_doc(p: DeviceProfile) -> dict:
    return {
        "name": p.name,
        "time_coeff_s_per_item": p.time_coeff_s_per_item,
        "active_power_w": p.active_power_w,
        "idle_power_w": p.idle_power_w,
    }


def read_profile(path) -> DeviceProfile:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    try:
        return profile_from_doc(doc)
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def read_measurements(path) -> list[tuple[int, float]]:
    """Read calibration samples from a CSV file with header `items,seconds`."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        if [h.strip().lower() for h in header] != ["items", "seconds"]:
            raise ValueError(f"{path}: expected header 'items,seconds', got {','.join(header)!r}")
        samples = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                samples.append((int(row[0]), float(row[1])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: could not parse {row!r}") from None
    if not samples:
        raise ValueError(f"{path}: no data rows")
    return samples


# ---------------------------------------------------------------------------
# Report rendering: aligned plain text and CSV from the same rows
# ---------------------------------------------------------------------------


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def render_table(headers: list[str], rows: list[list]) -> str:
    """Aligned-column plain text; numeric cells right-aligned."""
    cells = [[format_value(v) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    numeric = [all(isinstance(row[i], Real) for row in rows) if rows else False for i in range(len(headers))]

    def fmt_row(row):
        parts = []
        for i, cell in enumerate(row):
            parts.append(cell.rjust(widths[i]) if numeric[i] else cell.ljust(widths[i]))
        return "  ".join(parts).rstrip()

    lines = [fmt_row(headers), fmt_row(["-" * w for w in widths])]
    lines.extend(fmt_row(row) for row in cells)
    return "\n".join(lines) + "\n"


def render_csv(headers: list[str], rows: list[list]) -> str:
    out = [",".join(headers)]
    for row in rows:
        out.append(",".join(format_value(v) for v in row))
    return "\n".join(out) + "\n"
