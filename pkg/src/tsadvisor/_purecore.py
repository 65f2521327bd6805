"""NumPy implementations of the hot kernels, used when the compiled
extension is unavailable (or disabled via TSADVISOR_PURE_PYTHON=1)."""

import numpy as np

_BLOCK = 256


def kendall_s(x, tol: float) -> int:
    """Sum of sign(x[j] - x[i]) over i < j, treating |diff| <= tol as a tie.

    Blocked broadcasting keeps the O(L^2) comparison matrix out of memory
    for long series.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    s = 0
    for start in range(0, n - 1, _BLOCK):
        block = x[start : min(start + _BLOCK, n - 1)]
        diffs = x[None, start + 1 :] - block[:, None]
        # mask the lower triangle (pairs with j <= i) within the block
        rows = np.arange(len(block))[:, None]
        cols = np.arange(start + 1, n)[None, :]
        valid = cols > (start + rows)
        signs = np.where(np.abs(diffs) <= tol, 0, np.sign(diffs))
        s += int(np.sum(signs[valid]))
    return s


def autocorr(x, max_lag: int) -> np.ndarray:
    """Biased autocorrelation (normalized by L) of the mean-centered series."""
    x = np.asarray(x, dtype=float)
    c = x - x.mean()
    var = float(np.dot(c, c))
    out = np.zeros(max_lag + 1)
    out[0] = 1.0
    if var == 0.0:
        return out
    full = np.correlate(c, c, mode="full")[len(c) - 1 : len(c) + max_lag]
    out[: len(full)] = full / var
    out[0] = 1.0
    return out
