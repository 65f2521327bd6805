"""Kernel backend selection: compiled extension if present, NumPy otherwise.

Set TSADVISOR_PURE_PYTHON=1 to force the fallback (used by the parity tests
and the benchmark).
"""

import os

import numpy as np

if os.environ.get("TSADVISOR_PURE_PYTHON"):
    from . import _purecore as _impl

    BACKEND = "python"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _purecore as _impl

        BACKEND = "python"


def _writable_c_array(x) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=float)
    if not arr.flags.writeable:
        arr = arr.copy()
    return arr


def kendall_s(x, tol: float) -> int:
    return int(_impl.kendall_s(_writable_c_array(x), tol))


def autocorr(x, max_lag: int):
    return _impl.autocorr(_writable_c_array(x), max_lag)
