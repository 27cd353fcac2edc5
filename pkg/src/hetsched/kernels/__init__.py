"""Functional kernels (histogram, dense MV, sparse MV) and their pipelines."""

from __future__ import annotations

from enum import Enum

from hetsched.kernels.demv import demv_oracle, demv_pipeline, demv_stream
from hetsched.kernels.histogram import (
    histogram_oracle,
    histogram_pipeline,
    histogram_stream,
    write_histogram_csv,
)
from hetsched.kernels.image import Image, random_image, read_pgm, write_pgm
from hetsched.kernels.spmv import (
    CsrMatrix,
    csr_from_entries,
    random_csr,
    read_matrix_market,
    spmv_oracle,
    spmv_pipeline,
    spmv_stream,
    write_matrix_market,
)
from hetsched.pipeline import PipelineDescriptor


class Kernel(Enum):
    HISTOGRAM = "histogram"
    DEMV = "demv"
    SPMV = "spmv"


def kernel_pipeline(kernel: Kernel, **dims) -> PipelineDescriptor:
    """Build the pipeline descriptor a kernel's streaming variant uses.

    Histogram takes pixels (and optionally threads); dense MV takes
    rows/cols (and optionally unroll); sparse MV takes rows/cols/nnz.
    All three accept the latency and clock keywords of their builder.
    """
    kernel = Kernel(kernel)
    try:
        if kernel is Kernel.HISTOGRAM:
            return histogram_pipeline(dims.pop("pixels"), **dims)
        if kernel is Kernel.DEMV:
            return demv_pipeline(dims.pop("rows"), dims.pop("cols"), **dims)
        return spmv_pipeline(dims.pop("rows"), dims.pop("cols"), dims.pop("nnz"), **dims)
    except KeyError as e:
        raise ValueError(f"{kernel.value}: missing dimension {e.args[0]!r}") from None
    except TypeError as e:
        raise ValueError(f"{kernel.value}: {e}") from None


__all__ = [
    "Kernel",
    "kernel_pipeline",
    "Image",
    "random_image",
    "read_pgm",
    "write_pgm",
    "histogram_oracle",
    "histogram_stream",
    "histogram_pipeline",
    "write_histogram_csv",
    "demv_oracle",
    "demv_stream",
    "demv_pipeline",
    "CsrMatrix",
    "csr_from_entries",
    "random_csr",
    "read_matrix_market",
    "write_matrix_market",
    "spmv_oracle",
    "spmv_stream",
    "spmv_pipeline",
]
