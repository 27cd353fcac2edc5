"""Command-line front end: model, calibrate, schedule, run, simulate.

All randomness is seeded (default seed 1729) so identical invocations
produce byte-identical outputs.  Every command exits 0 on success and
nonzero on any validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

import hetsched
from hetsched import kernels, power, scheduling
from hetsched.pipeline import (
    PipelineFormatError,
    approx_cycles,
    execution_time,
    pipeline_cycles,
    read_pipeline,
)
from hetsched.simulator import DEFAULT_ARENA_BYTES, DeviceRuntime, ProtocolError, simulate_pipeline

DEFAULT_SEED = 1729
ARENA_ENV = "HETSCHED_ARENA_BYTES"


class CommandError(Exception):
    """Validation failure that should terminate with a nonzero exit."""


def _write_report(out_dir, stem: str, fields: list[tuple[str, object]]) -> None:
    """Emit a metric/value report as aligned text and a wide one-row CSV."""
    headers = [name for name, _ in fields]
    values = [value for _, value in fields]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.txt").write_text(
        scheduling.render_table(["metric", "value"], [[n, v] for n, v in fields]), encoding="utf-8"
    )
    (out / f"{stem}.csv").write_text(scheduling.render_csv(headers, [values]), encoding="utf-8")


def _print_fields(fields: list[tuple[str, object]]) -> None:
    sys.stdout.write(scheduling.render_table(["metric", "value"], [[n, v] for n, v in fields]))


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------


def cmd_model(args) -> int:
    pipeline, doc = read_pipeline(args.pipeline)
    exact = pipeline_cycles(pipeline)
    approx = approx_cycles(pipeline)
    dominant = max((s.iterations * s.initiation_interval for s in pipeline.stages), default=0)
    fields: list[tuple[str, object]] = [
        ("composition", pipeline.composition.value),
        ("stages", len(pipeline.stages)),
        ("clock_hz", pipeline.clock_hz),
        ("cycles", exact.cycles),
        ("time_s", exact.seconds),
        ("approx_cycles_latencies_dropped", approx.cycles),
        ("dominant_issue_term_cycles", dominant),
    ]
    powers = power.stage_powers_from_doc(doc)
    if powers is not None:
        p_ave = power.weighted_average_power(powers)
        report = power.energy(p_ave, exact.seconds)
        fields.append(("avg_power_w", p_ave))
        fields.append(("energy_j", report.energy_j))
    _print_fields(fields)
    if args.out:
        _write_report(args.out, "model", fields)
    return 0


# ---------------------------------------------------------------------------
# calibrate
# ---------------------------------------------------------------------------


def cmd_calibrate(args) -> int:
    samples = scheduling.read_measurements(args.csv)
    fit = scheduling.fit_time_coeff(samples)
    fields = [
        ("samples", fit.samples),
        ("time_coeff_s_per_item", fit.time_coeff_s_per_item),
        ("residual_rms_s", fit.residual_rms),
    ]
    _print_fields(fields)
    if args.out:
        profile = scheduling.DeviceProfile(
            name=args.name,
            time_coeff_s_per_item=fit.time_coeff_s_per_item,
            active_power_w=args.active_power,
            idle_power_w=args.idle_power,
        )
        Path(args.out).write_text(
            json.dumps(scheduling.profile_to_doc(profile), indent=2) + "\n", encoding="utf-8"
        )
    return 0


# ---------------------------------------------------------------------------
# schedule
# ---------------------------------------------------------------------------


def cmd_schedule(args) -> int:
    if args.items is None or args.items <= 0:
        raise CommandError("schedule: --items must be a positive integer")
    profiles = None
    if args.profile_fpga or args.profile_gpu:
        if not (args.profile_fpga and args.profile_gpu):
            raise CommandError("schedule: --profile-fpga and --profile-gpu must be given together")
        profiles = (scheduling.read_profile(args.profile_fpga), scheduling.read_profile(args.profile_gpu))
    if args.alpha is not None:
        if args.alpha <= 0:
            raise CommandError("schedule: --alpha must be > 0")
        alpha = args.alpha
    elif profiles:
        alpha = scheduling.speedup_alpha(
            profiles[0].time_coeff_s_per_item, profiles[1].time_coeff_s_per_item
        )
    else:
        raise CommandError("schedule: give --alpha or both device profiles")

    plan = scheduling.split_workload(args.items, alpha)
    fields: list[tuple[str, object]] = [
        ("items", plan.total_items),
        ("item_unit", args.item_unit),
        ("alpha_gpu_speedup", plan.alpha),
        ("n_fpga", plan.n_fpga),
        ("n_gpu", plan.n_gpu),
        ("ideal_speedup_vs_gpu_only", scheduling.ideal_speedup(alpha)),
    ]
    if profiles:
        plan = scheduling.predict(plan, profiles[0], profiles[1], co_idle=args.co_idle)
        fields += [
            ("fpga_device", profiles[0].name),
            ("gpu_device", profiles[1].name),
            ("t_fpga_s", plan.t_fpga_s),
            ("t_gpu_s", plan.t_gpu_s),
            ("combined_time_s", plan.combined_time_s),
            ("e_fpga_j", plan.e_fpga_j),
            ("e_gpu_j", plan.e_gpu_j),
            ("combined_energy_j", plan.combined_energy_j),
        ]
    if args.baseline_time is not None or args.baseline_energy is not None:
        if not (args.baseline_time and args.baseline_energy):
            raise CommandError("schedule: --baseline-time and --baseline-energy must be given together")
        if not profiles:
            raise CommandError("schedule: baselines need device profiles to predict the combined run")
        report = scheduling.improvement_report(args.baseline_time, args.baseline_energy, plan)
        fields += [
            ("baseline_time_s", report.baseline_time_s),
            ("baseline_energy_j", report.baseline_energy_j),
            ("speedup", report.speedup),
            ("energy_factor", report.energy_factor),
        ]
    # user-supplied measured factors are displayed alongside, never merged
    # into the model's own numbers
    if args.reference_speedup is not None:
        fields.append(("reference_measured_speedup", args.reference_speedup))
    if args.reference_energy_factor is not None:
        fields.append(("reference_measured_energy_factor", args.reference_energy_factor))
    _print_fields(fields)
    if args.out:
        _write_report(args.out, "schedule", fields)
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _run_histogram(args, out: Path, fields: list):
    if args.input:
        img = kernels.read_pgm(args.input)
        fields.append(("input", str(args.input)))
    else:
        img = kernels.random_image(args.width, args.height, args.seed)
        fields.append(("input", f"synthetic {args.width}x{args.height} seed {args.seed}"))
    fields.append(("threads", args.threads))
    reference = kernels.histogram_oracle(img)
    bins, cycles = kernels.histogram_stream(
        img,
        args.threads,
        read_latency=args.read_latency,
        compute_latency=args.compute_latency,
        clock_hz=args.clock_hz,
    )
    if not np.array_equal(bins, reference):
        raise CommandError("histogram: streaming bins differ from the reference count")
    fields.append(("stream_vs_reference", "identical bins"))
    fields.append(("merge_note", "per-thread partial-bin merge cost excluded from the cycle model"))
    kernels.write_histogram_csv(out / "histogram.csv", bins)
    fields.append(("output", "histogram.csv"))
    pipeline = kernels.histogram_pipeline(
        img.pixel_count,
        args.threads,
        read_latency=args.read_latency,
        compute_latency=args.compute_latency,
        clock_hz=args.clock_hz,
    )
    return pipeline, cycles


def _run_demv(args, out: Path, fields: list):
    if args.matrix or args.vector:
        if not (args.matrix and args.vector):
            raise CommandError("demv: --matrix and --vector must be given together")
        a = kernels.demv.read_matrix_csv(args.matrix)
        x = kernels.demv.read_vector_csv(args.vector)
        fields.append(("input", f"{args.matrix} x {args.vector}"))
    else:
        rng = np.random.default_rng(args.seed)
        a = rng.standard_normal((args.rows, args.cols))
        x = rng.standard_normal(args.cols)
        fields.append(("input", f"synthetic {args.rows}x{args.cols} seed {args.seed}"))
    fields.append(("unroll", args.unroll))
    reference = kernels.demv_oracle(a, x)
    y, cycles = kernels.demv_stream(
        a,
        x,
        args.unroll,
        load_latency=args.load_latency,
        compute_latency=args.compute_latency,
        clock_hz=args.clock_hz,
    )
    err = _relative_error(y, reference)
    if err > 1e-6:
        raise CommandError(f"demv: streaming result off by {err:.3e} relative (> 1e-6)")
    fields.append(("stream_vs_reference_rel_err", err))
    kernels.demv.write_vector_csv(out / "y.csv", y)
    fields.append(("output", "y.csv"))
    pipeline = kernels.demv_pipeline(
        a.shape[0],
        a.shape[1],
        args.unroll,
        load_latency=args.load_latency,
        compute_latency=args.compute_latency,
        clock_hz=args.clock_hz,
    )
    return pipeline, cycles


def _run_spmv(args, out: Path, fields: list):
    rng = np.random.default_rng(args.seed)
    if args.input:
        m = kernels.read_matrix_market(args.input)
        fields.append(("input", str(args.input)))
    else:
        m = kernels.random_csr(args.rows, args.cols, args.density, rng)
        fields.append(("input", f"synthetic {args.rows}x{args.cols} density {args.density} seed {args.seed}"))
    if args.vector:
        x = kernels.demv.read_vector_csv(args.vector)
    else:
        x = rng.standard_normal(m.cols)
    reference = kernels.spmv_oracle(m, x)
    y, cycles = kernels.spmv_stream(
        m,
        x,
        load_latency=args.load_latency,
        compute_latency=args.compute_latency,
        clock_hz=args.clock_hz,
    )
    err = _relative_error(y, reference)
    if err > 1e-6:
        raise CommandError(f"spmv: streaming result off by {err:.3e} relative (> 1e-6)")
    fields.append(("stream_vs_reference_rel_err", err))
    dense_err = _relative_error(reference, kernels.demv_oracle(m.densify(), x))
    fields.append(("csr_vs_densified_rel_err", dense_err))
    kernels.demv.write_vector_csv(out / "y.csv", y)
    fields.append(("output", "y.csv"))
    pipeline = kernels.spmv_pipeline(
        m.rows,
        m.cols,
        m.nnz,
        load_latency=args.load_latency,
        compute_latency=args.compute_latency,
        clock_hz=args.clock_hz,
    )
    return pipeline, cycles


def _relative_error(got: np.ndarray, want: np.ndarray) -> float:
    scale = np.maximum(np.abs(want), 1.0)
    if got.size == 0:
        return 0.0
    return float(np.max(np.abs(got - want) / scale))


def cmd_run(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fields: list[tuple[str, object]] = [("kernel", args.kernel)]
    runner = {"histogram": _run_histogram, "demv": _run_demv, "spmv": _run_spmv}[args.kernel]
    pipeline, cycles = runner(args, out, fields)

    trace = simulate_pipeline(pipeline)
    model = pipeline_cycles(pipeline)
    if model.cycles != cycles.cycles or trace.total_cycles != model.cycles:
        raise CommandError(
            f"cycle disagreement: kernel={cycles.cycles} model={model.cycles} simulated={trace.total_cycles}"
        )
    trace.write_csv(out / "trace.csv")
    fields += [
        ("model_cycles", model.cycles),
        ("simulated_cycles", trace.total_cycles),
        ("cycle_agreement", "exact"),
        ("time_s", model.seconds),
        ("trace", "trace.csv"),
    ]
    _print_fields(fields)
    _write_report(out, "report", fields)
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    pipeline, _ = read_pipeline(args.pipeline)
    arena = int(os.environ.get(ARENA_ENV, DEFAULT_ARENA_BYTES))
    runtime = DeviceRuntime(arena_bytes=arena)
    runtime.init_fpga()
    fields: list[tuple[str, object]] = [("arena_bytes", arena)]
    for i, size in enumerate(args.alloc or []):
        address = runtime.fpga_malloc(i, size)
        if address == -1:
            raise CommandError(f"simulate: allocation of {size} bytes failed (arena exhausted)")
        fields.append((f"alloc_{i}_address", address))
    trace = runtime.start_accel(pipeline)
    model = pipeline_cycles(pipeline)
    fields += [
        ("simulated_cycles", trace.total_cycles),
        ("model_cycles", model.cycles),
        ("cycle_agreement", "exact" if trace.total_cycles == model.cycles else "MISMATCH"),
        ("time_s", execution_time(trace.total_cycles, pipeline.clock_hz)),
        ("final_state", runtime.state.value),
    ]
    runtime.reset()
    for i in range(len(args.alloc or [])):
        runtime.fpga_free(i)
    if args.trace:
        trace.write_csv(args.trace)
        fields.append(("trace", str(args.trace)))
    _print_fields(fields)
    if trace.total_cycles != model.cycles:
        raise CommandError("simulate: simulated cycles disagree with the analytic model")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hetsched",
        description="Pipeline timing/power models, FPGA+GPU workload splitting, "
        "and token-level pipeline simulation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {hetsched.__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="evaluate cycle/time/power models on a pipeline file")
    p_model.add_argument("--pipeline", required=True, help="pipeline JSON file")
    p_model.add_argument("--out", help="directory for model.txt / model.csv")
    p_model.set_defaults(func=cmd_model)

    p_cal = sub.add_parser("calibrate", help="fit a linear time model from items,seconds CSV")
    p_cal.add_argument("--csv", required=True, help="CSV file with header items,seconds")
    p_cal.add_argument("--name", default="device", help="device name for --out profile")
    p_cal.add_argument("--active-power", type=float, default=0.0, help="active power (W) for --out profile")
    p_cal.add_argument("--idle-power", type=float, default=0.0, help="idle power (W) for --out profile")
    p_cal.add_argument("--out", help="write a device-profile JSON file")
    p_cal.set_defaults(func=cmd_calibrate)

    p_sched = sub.add_parser("schedule", help="balanced FPGA/GPU split for a workload")
    p_sched.add_argument("--items", type=int, required=True, help="total work items to divide")
    p_sched.add_argument("--alpha", type=float, help="GPU speedup over FPGA (fpga_coeff/gpu_coeff)")
    p_sched.add_argument("--profile-fpga", help="FPGA device profile JSON")
    p_sched.add_argument("--profile-gpu", help="GPU device profile JSON")
    p_sched.add_argument("--item-unit", default="items", help="label for the item unit (e.g. rows, nnz)")
    p_sched.add_argument("--co-idle", action="store_true", help="charge idle power while the other device finishes")
    p_sched.add_argument("--baseline-time", type=float, help="single-device baseline time (s)")
    p_sched.add_argument("--baseline-energy", type=float, help="single-device baseline energy (J)")
    p_sched.add_argument("--reference-speedup", type=float, help="measured speedup shown as a reference column")
    p_sched.add_argument(
        "--reference-energy-factor", type=float, help="measured energy factor shown as a reference column"
    )
    p_sched.add_argument("--out", help="directory for schedule.txt / schedule.csv")
    p_sched.set_defaults(func=cmd_schedule)

    p_run = sub.add_parser("run", help="run a kernel, its streaming variant, and the simulator")
    p_run.add_argument("--kernel", required=True, choices=["histogram", "demv", "spmv"])
    p_run.add_argument("--input", help="input file (PGM image or Matrix Market file)")
    p_run.add_argument("--matrix", help="dense matrix CSV (demv)")
    p_run.add_argument("--vector", help="vector CSV (demv/spmv)")
    p_run.add_argument("--width", type=int, default=512, help="synthetic image width")
    p_run.add_argument("--height", type=int, default=512, help="synthetic image height")
    p_run.add_argument("--rows", type=int, default=64, help="synthetic matrix rows")
    p_run.add_argument("--cols", type=int, default=64, help="synthetic matrix cols")
    p_run.add_argument("--density", type=float, default=0.05, help="synthetic sparse density")
    p_run.add_argument("--threads", type=int, default=64, help="histogram hardware threads")
    p_run.add_argument("--unroll", type=int, default=4, help="demv unroll factor")
    p_run.add_argument("--read-latency", type=int, default=0, help="histogram read-stage latency")
    p_run.add_argument("--load-latency", type=int, default=0, help="vector-load stage latency")
    p_run.add_argument("--compute-latency", type=int, default=0, help="compute-stage latency")
    p_run.add_argument("--clock-hz", type=float, default=100e6, help="design clock")
    p_run.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for synthetic inputs")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_sim = sub.add_parser("simulate", help="token-level simulation via the device runtime")
    p_sim.add_argument("--pipeline", required=True, help="pipeline JSON file")
    p_sim.add_argument("--alloc", type=int, action="append", help="allocate a buffer of this many bytes (repeatable)")
    p_sim.add_argument("--trace", help="write the token trace CSV here")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CommandError, PipelineFormatError, ProtocolError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
