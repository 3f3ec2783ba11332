"""Backend selection for the occupation-basis kernels.

The compiled extension is preferred; the pure-Python module is the fallback.
Set ``FERMICONE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("FERMICONE_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

combination_masks = _impl.combination_masks
masked_sums_int = _impl.masked_sums_int
masked_sums_float = _impl.masked_sums_float
subset_counts = _impl.subset_counts


def available_backends():
    """Map backend name to module, for tests and benchmarks that compare them."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["compiled"] = _kernels
    return found
