"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``WJF_PURE`` to a nonempty value forces the pure-Python
kernels (useful for benchmarking and as an escape hatch).
"""
import os

if os.environ.get("WJF_PURE"):
    from . import _pure as _impl
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl
        BACKEND = "pure"

poly_mul = _impl.poly_mul
series_mul = _impl.series_mul
