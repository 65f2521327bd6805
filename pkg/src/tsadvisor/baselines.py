"""Cheap deterministic local forecasters and the evaluation harness that
turns them into per-series performance logs.

Every predictor maps a history array to a fixed-length forecast and never
sees future values; the harness slides evaluation windows over the test
segment of each series and averages MAE/MSE per (series, model).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HistoryTooShort, TooShort
from .profiling import detect_seasons
from .stattests import acf
from .series import SeriesSet, SplitSpec, split
from .store import PerfRecord

DEFAULT_AR_ORDER = 8
DEFAULT_RIDGE_LAMBDA = 1e-3


def predict_hi(history, horizon: int) -> np.ndarray:
    """Historical inertia: repeat the last `horizon` values in order."""
    h = np.asarray(history, dtype=float)
    if len(h) < horizon:
        raise HistoryTooShort(f"need {horizon} points of history, got {len(h)}")
    return h[-horizon:].copy()


def predict_naive_mean(history, horizon: int) -> np.ndarray:
    """Constant forecast at the history mean."""
    h = np.asarray(history, dtype=float)
    if len(h) < 1:
        raise HistoryTooShort("need at least 1 point of history")
    return np.full(horizon, h.mean())


def predict_seasonal_naive(history, horizon: int, period: int) -> np.ndarray:
    """Repeat the last full period cyclically."""
    h = np.asarray(history, dtype=float)
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    if len(h) < period:
        raise HistoryTooShort(f"need {period} points of history, got {len(h)}")
    last = h[-period:]
    return np.array([last[t % period] for t in range(horizon)])


def predict_ar(history, horizon: int, order: int = DEFAULT_AR_ORDER) -> np.ndarray:
    """Least-squares AR(p) with intercept; multi-step forecasts feed
    predictions back recursively. A singular fit falls back to the naive
    mean (see `predict_ar_flagged`)."""
    forecast, _ = predict_ar_flagged(history, horizon, order)
    return forecast


def predict_ar_flagged(
    history, horizon: int, order: int = DEFAULT_AR_ORDER
) -> tuple[np.ndarray, bool]:
    h = np.asarray(history, dtype=float)
    p = order
    if len(h) < 3 * p + 10:
        raise HistoryTooShort(f"AR({p}) needs at least {3 * p + 10} points, got {len(h)}")
    n = len(h) - p
    X = np.column_stack([np.ones(n)] + [h[p - i : len(h) - i] for i in range(1, p + 1)])
    y = h[p:]
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        return predict_naive_mean(h, horizon), True
    buf = list(h[-p:])
    out = np.empty(horizon)
    for t in range(horizon):
        lags = buf[::-1][:p]
        out[t] = beta[0] + float(np.dot(beta[1:], lags))
        buf.append(out[t])
    return out, False


def predict_linear_window(
    history,
    horizon: int,
    lookback: int | None = None,
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA,
) -> np.ndarray:
    """Direct multi-output ridge regression from the last `lookback` values
    to the next `horizon`. Too little training data falls back to
    historical inertia (see `predict_linear_window_flagged`)."""
    forecast, _ = predict_linear_window_flagged(history, horizon, lookback, ridge_lambda)
    return forecast


def predict_linear_window_flagged(
    history,
    horizon: int,
    lookback: int | None = None,
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA,
) -> tuple[np.ndarray, bool]:
    h = np.asarray(history, dtype=float)
    w = lookback if lookback is not None else min(len(h) // 2, 96)
    n_windows = len(h) - w - horizon + 1
    if w < 1 or n_windows < 10:
        if len(h) < horizon:
            raise HistoryTooShort(f"need {horizon} points of history, got {len(h)}")
        return predict_hi(h, horizon), True
    X = np.lib.stride_tricks.sliding_window_view(h[: len(h) - horizon], w)[:n_windows]
    Y = np.lib.stride_tricks.sliding_window_view(h[w:], horizon)[:n_windows]
    X1 = np.column_stack([np.ones(n_windows), X])
    gram = X1.T @ X1 + ridge_lambda * np.eye(w + 1)
    beta = np.linalg.solve(gram, X1.T @ Y)
    last = np.concatenate([[1.0], h[-w:]])
    return last @ beta, False


@dataclass(frozen=True)
class EvalResult:
    series_id: str
    model: str
    mae: float
    mse: float
    window_count: int
    fallback: bool = False


MODEL_NAMES = ("hi", "naive_mean", "seasonal_naive", "ar", "linear")


def _forecast(model: str, history: np.ndarray, horizon: int, period: int) -> tuple[np.ndarray, bool]:
    if model == "hi":
        return predict_hi(history, horizon), False
    if model == "naive_mean":
        return predict_naive_mean(history, horizon), False
    if model == "seasonal_naive":
        return predict_seasonal_naive(history, horizon, period), False
    if model == "ar":
        return predict_ar_flagged(history, horizon)
    if model == "linear":
        return predict_linear_window_flagged(history, horizon)
    raise ValueError(f"unknown model {model!r}; choose from {MODEL_NAMES}")


def evaluate(
    models: tuple[str, ...],
    series_set: SeriesSet,
    spec: SplitSpec,
) -> tuple[list[EvalResult], int]:
    """Evaluate each model on sliding windows whose future lies inside the
    test segment (the history may reach back into earlier segments).

    The seasonal-naive period comes from season detection on the
    train+validation prefix, defaulting to 1 when nothing is detected.
    Returns the results plus a tally of skipped series.
    """
    results: list[EvalResult] = []
    skipped = 0
    for ts in series_set:
        try:
            _, _, test = split(ts, spec)
        except TooShort:
            skipped += 1
            continue
        L = len(ts.values)
        test_start = L - len(test)
        h, f = spec.history_len, spec.horizon
        starts = [
            s
            for s in range(max(h, test_start), L - f + 1, spec.stride)
        ]
        if not starts or h > L:
            skipped += 1
            continue
        prefix = ts.values[: test_start]
        try:
            seasons = detect_seasons(prefix) if len(prefix) >= 8 else []
        except TooShort:
            seasons = []
        if seasons:
            # Dominant period: the detected candidate with the highest raw
            # autocorrelation on the history prefix.
            r = acf(prefix, len(prefix) // 2)
            period = max(seasons, key=lambda p: r[p])
        else:
            period = 1
        series_results: list[EvalResult] = []
        try:
            for model in models:
                abs_errs, sq_errs = [], []
                fallback = False
                for s in starts:
                    history = ts.values[s - h : s]
                    future = ts.values[s : s + f]
                    forecast, flagged = _forecast(model, history, f, period)
                    fallback = fallback or flagged
                    err = forecast - future
                    abs_errs.append(float(np.mean(np.abs(err))))
                    sq_errs.append(float(np.mean(err**2)))
                series_results.append(
                    EvalResult(
                        series_id=ts.id,
                        model=model,
                        mae=float(np.mean(abs_errs)),
                        mse=float(np.mean(sq_errs)),
                        window_count=len(starts),
                        fallback=fallback,
                    )
                )
        except HistoryTooShort:
            # Skip the whole series so the log stays |models| x |series|.
            skipped += 1
            continue
        results.extend(series_results)
    return results, skipped


def results_to_log(results: list[EvalResult]) -> list[tuple[str, PerfRecord]]:
    return [(r.series_id, PerfRecord(r.model, r.mae, r.mse)) for r in results]
