"""Multi-seasonal trend decomposition and seasonal-strength scoring.

The iterative STL machinery is delegated to statsmodels' MSTL; the
contract here guarantees the exact additive reconstruction invariant and
covers the empty-period case with a plain LOESS trend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from statsmodels.nonparametric.smoothers_lowess import lowess
from statsmodels.tsa.seasonal import MSTL

from .errors import PeriodTooLarge

TREND_LOESS_FRAC = 0.6667


@dataclass(frozen=True)
class Decomposition:
    """Additive components: input = trend + sum(seasonals) + residual."""

    seasonals: tuple[np.ndarray, ...]
    trend: np.ndarray
    residual: np.ndarray

    def seasonal_sum(self) -> np.ndarray:
        if not self.seasonals:
            return np.zeros_like(self.trend)
        return np.sum(self.seasonals, axis=0)


def mstl_decompose(values, periods) -> Decomposition:
    """Decompose into one seasonal component per period, a trend and a
    residual; the residual is defined as input minus everything else, so
    the reconstruction identity holds to machine precision.

    With no periods the trend is a LOESS fit of the whole series.
    """
    x = np.asarray(values, dtype=float)
    L = len(x)
    periods = [int(p) for p in periods]
    if sorted(periods) != periods:
        raise ValueError("periods must be ascending")
    for p in periods:
        if p < 2:
            raise ValueError(f"period {p} must be >= 2")
        if p > L // 2:
            raise PeriodTooLarge(f"period {p} exceeds half the series length {L}")

    if not periods:
        trend = lowess(x, np.arange(L), frac=TREND_LOESS_FRAC, return_sorted=False)
        return Decomposition((), trend, x - trend)

    # Default seasonal smoother windows (7 + 4i per component): shorter
    # periods get tighter smoothing, which keeps multi-season fits stable.
    result = MSTL(x, periods=periods).fit()
    seasonal = np.atleast_2d(np.asarray(result.seasonal).T.reshape(len(periods), L))
    trend = np.asarray(result.trend)
    seasonals = tuple(seasonal[i] for i in range(len(periods)))
    residual = x - trend - seasonal.sum(axis=0)
    return Decomposition(seasonals, trend, residual)


def season_strength(decomp: Decomposition) -> float:
    """max(0, 1 - var(residual) / var(residual + seasonal sum)).

    Population variance; 0 when there are no seasonal components or the
    denominator is degenerate.
    """
    if not decomp.seasonals:
        return 0.0
    r = decomp.residual
    combined = r + decomp.seasonal_sum()
    denom = float(np.var(combined))
    if denom == 0.0:
        return 0.0
    return max(0.0, 1.0 - float(np.var(r)) / denom)
