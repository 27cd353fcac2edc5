"""Simulated device-control runtime: firmware command facade and transfers.

Models the controller firmware of an attached FPGA card: an init command
that prepares the allocation table, malloc/free against a fixed onboard
memory arena, and an activation command that runs a pipeline and reports
its completion cycle.  Allocation failures return a -1 sentinel (as the
firmware call does); protocol violations raise ProtocolError.

Data movement onto the card is bandwidth-limited: a transfer path is a
pipelined copy loop that moves one data unit per clock, so a transfer
costs bytes / bandwidth seconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from hetsched.pipeline import PipelineDescriptor
from hetsched.simulator.trace import TokenTrace, simulate_pipeline

DEFAULT_ARENA_BYTES = 1 << 30  # 1 GiB onboard memory
ALIGNMENT_BYTES = 64
MALLOC_FAILURE = -1


@dataclass(frozen=True)
class TransferPath:
    """A bandwidth-limited path between host memory and the device."""

    name: str
    bandwidth_bytes_per_s: float

    def __post_init__(self):
        if not self.bandwidth_bytes_per_s > 0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth_bytes_per_s!r}")


# The two calibrated paths of the modeled card: the streamed PCIe copy path
# and the direct 512-bit DDR interface available to the user design.
PCIE_STREAM = TransferPath("pcie-stream", 800e6)
DDR_DIRECT = TransferPath("ddr-direct", 6.4e9)


def dtu_transfer(byte_count: int, path: TransferPath) -> float:
    """Seconds to move byte_count over a path's pipelined copy loop."""
    if byte_count < 0:
        raise ValueError(f"byte_count must be >= 0, got {byte_count}")
    return byte_count / path.bandwidth_bytes_per_s


class RuntimeState(Enum):
    UNINITIALIZED = "uninitialized"
    READY = "ready"
    RUNNING = "running"
    DONE = "done"


class ProtocolError(RuntimeError):
    """A firmware command was issued in a state that does not allow it."""


def _align_up(address: int) -> int:
    return (address + ALIGNMENT_BYTES - 1) & ~(ALIGNMENT_BYTES - 1)


class DeviceRuntime:
    """One simulated device; drive with init_fpga/fpga_malloc/start_accel/fpga_free."""

    def __init__(self, arena_bytes: int = DEFAULT_ARENA_BYTES):
        if arena_bytes <= 0:
            raise ValueError(f"arena_bytes must be > 0, got {arena_bytes}")
        self.arena_bytes = arena_bytes
        self._state = RuntimeState.UNINITIALIZED
        self._table: dict = {}  # id -> (start address, size)

    @property
    def state(self) -> RuntimeState:
        return self._state

    @property
    def allocations(self) -> dict:
        return dict(self._table)

    def init_fpga(self) -> RuntimeState:
        """Initialize the device and prepare an empty allocation table."""
        if self._state is not RuntimeState.UNINITIALIZED:
            raise ProtocolError(f"init_fpga: device already initialized (state {self._state.value})")
        self._table = {}
        self._state = RuntimeState.READY
        return self._state

    def fpga_malloc(self, buf_id, size_bytes: int) -> int:
        """First-fit allocation of an aligned region; -1 when nothing fits."""
        if self._state is not RuntimeState.READY:
            raise ProtocolError(f"fpga_malloc: device not ready (state {self._state.value})")
        if buf_id in self._table:
            raise ProtocolError(f"fpga_malloc: id {buf_id!r} already allocated")
        if size_bytes <= 0:
            raise ValueError(f"fpga_malloc: size_bytes must be > 0, got {size_bytes}")
        candidate = 0
        for start, size in sorted(self._table.values()):
            if candidate + size_bytes <= start:
                break
            candidate = _align_up(start + size)
        if candidate + size_bytes > self.arena_bytes:
            return MALLOC_FAILURE
        self._table[buf_id] = (candidate, size_bytes)
        return candidate

    def start_accel(self, pipeline: PipelineDescriptor) -> TokenTrace:
        """Activate the design: simulate the pipeline and report its schedule."""
        if self._state is not RuntimeState.READY:
            raise ProtocolError(f"start_accel: device not ready (state {self._state.value})")
        self._state = RuntimeState.RUNNING
        trace = simulate_pipeline(pipeline)
        self._state = RuntimeState.DONE
        return trace

    def fpga_free(self, buf_id) -> None:
        """Release a region so its bytes become reusable."""
        if self._state not in (RuntimeState.READY, RuntimeState.DONE):
            raise ProtocolError(f"fpga_free: device not initialized (state {self._state.value})")
        if buf_id not in self._table:
            raise ProtocolError(f"fpga_free: unknown id {buf_id!r}")
        del self._table[buf_id]

    def reset(self) -> RuntimeState:
        """Return a finished device to the ready state; allocations persist."""
        if self._state is not RuntimeState.DONE:
            raise ProtocolError(f"reset: device not done (state {self._state.value})")
        self._state = RuntimeState.READY
        return self._state
