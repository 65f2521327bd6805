# cython: language_level=3
"""Compiled inner loops: pairwise Kendall statistic and autocorrelation.

These dominate profiling runtime at long series lengths (both are O(L^2)
or O(L * max_lag)); tsadvisor.backend falls back to the NumPy versions in
_purecore when this module is unavailable.
"""

from libc.math cimport fabs

import numpy as np

cimport numpy as cnp

cnp.import_array()


def kendall_s(double[::1] x, double tol):
    """Sum of sign(x[j] - x[i]) over i < j, treating |diff| <= tol as a tie."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef long long s = 0
    cdef double d
    for i in range(n - 1):
        for j in range(i + 1, n):
            d = x[j] - x[i]
            if fabs(d) <= tol:
                continue
            if d > 0:
                s += 1
            else:
                s -= 1
    return s


def autocorr(double[::1] x, int max_lag):
    """Biased autocorrelation (normalized by L) of the mean-centered series.

    Element 0 is exactly 1; a zero-variance input yields zeros past lag 0.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k, t
    cdef double mean = 0.0, var = 0.0, acc
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(max_lag + 1)
    cdef double[::1] c = np.empty(n)
    for t in range(n):
        mean += x[t]
    mean /= n
    for t in range(n):
        c[t] = x[t] - mean
        var += c[t] * c[t]
    out[0] = 1.0
    if var == 0.0:
        return out
    for k in range(1, max_lag + 1):
        acc = 0.0
        for t in range(n - k):
            acc += c[t] * c[t + k]
        out[k] = acc / var
    return out
