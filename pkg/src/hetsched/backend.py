"""Select the compiled kernel core at import, with a pure-Python fallback.

The compiled module (hetsched._native, built from _native.pyx) is preferred
when present.  Setting HETSCHED_PURE_PYTHON=1 forces the fallback, which is
how the two implementations are benchmarked against each other.
"""

from __future__ import annotations

import os


def _want_pure_python() -> bool:
    return os.environ.get("HETSCHED_PURE_PYTHON", "").strip().lower() in {"1", "true", "yes"}


if _want_pure_python():
    from hetsched import _fallback as impl
else:
    try:
        from hetsched import _native as impl  # type: ignore[no-redef]
    except ImportError:
        from hetsched import _fallback as impl  # type: ignore[no-redef]

BACKEND = impl.BACKEND_NAME

simulate_concurrent = impl.simulate_concurrent
simulate_sequential = impl.simulate_sequential
hist_count = impl.hist_count
hist_pairs = impl.hist_pairs
demv_rows = impl.demv_rows
demv_unrolled = impl.demv_unrolled
spmv_rows = impl.spmv_rows
spmv_stream = impl.spmv_stream


def available_backends() -> dict:
    """Importable backend modules keyed by name (for benchmarks and tests)."""
    from hetsched import _fallback

    found = {_fallback.BACKEND_NAME: _fallback}
    try:
        from hetsched import _native

        found[_native.BACKEND_NAME] = _native
    except ImportError:
        pass
    return found
