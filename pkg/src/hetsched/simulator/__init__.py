from hetsched.simulator.trace import StageTrace, TokenTrace, simulate_pipeline
from hetsched.simulator.runtime import (
    ALIGNMENT_BYTES,
    DDR_DIRECT,
    DEFAULT_ARENA_BYTES,
    MALLOC_FAILURE,
    PCIE_STREAM,
    DeviceRuntime,
    ProtocolError,
    RuntimeState,
    TransferPath,
    dtu_transfer,
)

__all__ = [
    "StageTrace",
    "TokenTrace",
    "simulate_pipeline",
    "ALIGNMENT_BYTES",
    "DDR_DIRECT",
    "DEFAULT_ARENA_BYTES",
    "MALLOC_FAILURE",
    "PCIE_STREAM",
    "DeviceRuntime",
    "ProtocolError",
    "RuntimeState",
    "TransferPath",
    "dtu_transfer",
]
