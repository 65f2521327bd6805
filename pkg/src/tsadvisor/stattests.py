"""Hypothesis tests and trend statistics used by the property profiler.

ADF and KPSS are implemented directly (constant-only ADF regression with
the Schwert lag rule, Bartlett-kernel KPSS) so the 5% decisions are
deterministic fixed-critical-value comparisons; degenerate inputs are
handled by explicit flags instead of library-specific exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import backend
from .errors import TooShort

# 5% critical values: MacKinnon constant-case ADF (large L) and
# level-stationarity KPSS.
ADF_CRIT_5PCT = -2.86
KPSS_CRIT_5PCT = 0.463


def acf(x, max_lag: int) -> np.ndarray:
    """Biased autocorrelation estimate of the mean-centered series.

    Element 0 is exactly 1 for non-constant input; a constant series yields
    zeros at every positive lag (use `is_constant` to detect that case).
    """
    x = np.asarray(x, dtype=float)
    if max_lag >= len(x):
        raise ValueError(f"max_lag {max_lag} must be < series length {len(x)}")
    return backend.autocorr(x, max_lag)


def is_constant(x) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(x == x[0]))


@dataclass(frozen=True)
class TestResult:
    statistic: float
    reject: bool
    singular: bool = False


def adf_test(x) -> TestResult:
    """Augmented Dickey-Fuller test, constant-only regression.

    Lag order follows the Schwert rule floor(12 * (L/100)^0.25), reduced
    until at least 10 residual degrees of freedom remain. Rejection of the
    unit root compares the t statistic against the 5% critical value.
    A singular design (e.g. constant input) reports non-rejection.
    """
    x = np.asarray(x, dtype=float)
    L = len(x)
    if L < 32:
        raise TooShort(f"ADF needs at least 32 points, got {L}")
    p = int(np.floor(12.0 * (L / 100.0) ** 0.25))
    while p > 0 and (L - 1 - p) - (p + 2) < 10:
        p -= 1
    dx = np.diff(x)
    n = L - 1 - p
    y = dx[p:]
    cols = [np.ones(n), x[p : L - 1]]
    for i in range(1, p + 1):
        cols.append(dx[p - i : L - 1 - i])
    X = np.column_stack(cols)
    beta, resid, rank = _ols(X, y)
    if rank < X.shape[1]:
        return TestResult(0.0, reject=False, singular=True)
    dof = n - X.shape[1]
    s2 = float(resid @ resid) / dof
    xtx_inv = np.linalg.pinv(X.T @ X)
    se = np.sqrt(s2 * xtx_inv[1, 1])
    if se == 0.0:
        return TestResult(0.0, reject=False, singular=True)
    t_stat = float(beta[1] / se)
    return TestResult(t_stat, reject=t_stat < ADF_CRIT_5PCT)


def kpss_test(x) -> TestResult:
    """KPSS level-stationarity test with Newey-West Bartlett bandwidth.

    `reject` means the stationarity null is rejected at 5%.
    """
    x = np.asarray(x, dtype=float)
    L = len(x)
    if L < 32:
        raise TooShort(f"KPSS needs at least 32 points, got {L}")
    e = x - x.mean()
    if np.all(e == 0.0):
        return TestResult(0.0, reject=False, singular=True)
    bandwidth = int(np.floor(4.0 * (L / 100.0) ** 0.25))
    s2 = float(e @ e) / L
    for k in range(1, bandwidth + 1):
        w = 1.0 - k / (bandwidth + 1.0)
        s2 += 2.0 * w * float(np.dot(e[:-k], e[k:])) / L
    partial = np.cumsum(e)
    statistic = float(np.sum(partial**2)) / (L**2 * s2)
    return TestResult(statistic, reject=statistic > KPSS_CRIT_5PCT)


def acf_convergent(x, band_z: float = 1.96, fraction: float = 0.95) -> bool:
    """True when the ACF tail sits inside the white-noise confidence band.

    Checks |acf(k)| < band_z / sqrt(L) for at least `fraction` of the lags
    k in [ceil(L/10), L/2].
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 64:
        raise TooShort(f"ACF convergence check needs at least 64 points, got {len(x)}")
    return _acf_band_ok(x, band_z, fraction)


def _acf_band_ok(x, band_z: float, fraction: float) -> bool:
    L = len(x)
    r = acf(x, L // 2)
    band = band_z / np.sqrt(L)
    lags = np.arange(int(np.ceil(L / 10)), L // 2 + 1)
    return bool(np.mean(np.abs(r[lags]) < band) >= fraction)


def is_stationary(x) -> bool:
    """Strict-sense stationarity decision: ADF rejects the unit root,
    KPSS fails to reject level stationarity, and the ACF converges."""
    x = np.asarray(x, dtype=float)
    if len(x) < 32:
        raise TooShort(f"stationarity decision needs at least 32 points, got {len(x)}")
    if not adf_test(x).reject:
        return False
    if kpss_test(x).reject:
        return False
    return _acf_band_ok(x, 1.96, 0.95)


def mann_kendall(x, tie_rel_tol: float = 1e-9) -> float:
    """Kendall tau of the series against time: S / (L(L-1)/2).

    Value differences at or below tie_rel_tol * range count as ties, which
    keeps the statistic invariant under exact affine rescaling despite
    floating-point absorption.
    """
    x = np.asarray(x, dtype=float)
    L = len(x)
    if L < 3:
        raise TooShort(f"Mann-Kendall needs at least 3 points, got {L}")
    tol = tie_rel_tol * float(np.max(x) - np.min(x))
    s = backend.kendall_s(x, tol)
    return s / (L * (L - 1) / 2.0)


@dataclass(frozen=True)
class ArchLmResult:
    statistic: float
    p_value: float
    is_heteroscedastic: bool
    singular: bool = False


def arch_lm_test(residual, lags: int) -> ArchLmResult:
    """Engle's ARCH Lagrange-multiplier test on squared residuals.

    Regresses e_t^2 on its own `lags` lags; LM = n * R^2 is compared to a
    chi-square with `lags` degrees of freedom at the 5% level.
    """
    e = np.asarray(residual, dtype=float)
    if len(e) < lags + 10:
        raise TooShort(f"ARCH-LM with {lags} lags needs at least {lags + 10} points")
    e2 = e**2
    n = len(e2) - lags
    y = e2[lags:]
    X = np.column_stack([np.ones(n)] + [e2[lags - i : len(e2) - i] for i in range(1, lags + 1)])
    beta, resid, rank = _ols(X, y)
    sst = float(np.sum((y - y.mean()) ** 2))
    if rank < X.shape[1] or sst == 0.0:
        return ArchLmResult(0.0, 1.0, is_heteroscedastic=False, singular=True)
    r2 = 1.0 - float(resid @ resid) / sst
    lm = n * r2
    p_value = float(stats.chi2.sf(lm, lags))
    return ArchLmResult(lm, p_value, is_heteroscedastic=p_value <= 0.05)


def _ols(X, y):
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    return beta, resid, rank
