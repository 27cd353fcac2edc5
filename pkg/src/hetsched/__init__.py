"""hetsched: timing/power models, workload splitting, and a pipeline simulator
for heterogeneous FPGA+GPU embedded accelerators."""

from hetsched.backend import BACKEND
from hetsched.pipeline import (
    Composition,
    CycleCount,
    PipelineDescriptor,
    PipelineFormatError,
    StageDescriptor,
    approx_cycles,
    concurrent_cycles,
    execution_time,
    pipeline_cycles,
    pipeline_from_doc,
    pipeline_to_doc,
    read_pipeline,
    sequential_cycles,
    write_pipeline,
)
from hetsched.power import EnergyReport, StagePower, energy, stage_powers_from_doc, weighted_average_power
from hetsched.scheduling import (
    CalibrationFit,
    DeviceProfile,
    ImprovementReport,
    SplitPlan,
    fit_time_coeff,
    ideal_speedup,
    improvement_report,
    predict,
    profile_from_doc,
    profile_to_doc,
    read_measurements,
    read_profile,
    speedup_alpha,
    split_workload,
)

__version__ = "0.1.0"
