"""Core series containers, CSV/JSONL input and output, splitting, windowing.

All containers are immutable after construction and safe to share across
parallel workers.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, ParseError, TooShort


def _as_values(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("series values must be one-dimensional")
    if arr.size < 2:
        raise ValueError("series must contain at least 2 values")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series values must be finite")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A finite real-valued sequence with an identifier."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values))

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class SeriesSet:
    """Ordered collection of series with unique ids."""

    series: tuple[TimeSeries, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        ids = [s.id for s in self.series]
        if len(set(ids)) != len(ids):
            raise ValueError("series ids must be unique within a set")

    def __iter__(self):
        return iter(self.series)

    def __len__(self) -> int:
        return len(self.series)

    def __getitem__(self, series_id: str) -> TimeSeries:
        for s in self.series:
            if s.id == series_id:
                return s
        raise KeyError(series_id)

    def ids(self) -> list[str]:
        return [s.id for s in self.series]


@dataclass(frozen=True)
class SplitSpec:
    """Train/val/test ratios plus the windowing geometry used downstream."""

    train_ratio: float = 0.7
    val_ratio: float = 0.1
    test_ratio: float = 0.2
    history_len: int = 336
    horizon: int = 96
    stride: int = 1

    def __post_init__(self):
        total = self.train_ratio + self.val_ratio + self.test_ratio
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"ratios must sum to 1, got {total}")
        if min(self.train_ratio, self.val_ratio, self.test_ratio) < 0:
            raise ValueError("ratios must be nonnegative")
        if self.history_len < 1 or self.horizon < 1 or self.stride < 1:
            raise ValueError("history_len, horizon and stride must be positive")


def load_csv(path, layout: str = "wide") -> SeriesSet:
    """Read a UTF-8 comma-separated file into a SeriesSet.

    Wide layout: one column per series, optional header row supplies ids.
    Long layout: rows of (id, value) pairs grouped by id, order preserved.
    """
    if layout not in ("wide", "long"):
        raise ValueError(f"unknown layout {layout!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise EmptyInput(f"{path}: no rows")
    if layout == "wide":
        return _parse_wide(rows)
    return _parse_long(rows)


def _parse_float(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"non-numeric cell {cell!r} at row {row}, column {col}", row=row, column=col
        ) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite cell at row {row}, column {col}", row=row, column=col)
    return value


def _has_header(first_row: list[str]) -> bool:
    for cell in first_row:
        try:
            float(cell)
            return False
        except ValueError:
            continue
    return True


def _parse_wide(rows: list[list[str]]) -> SeriesSet:
    if _has_header(rows[0]):
        names = [c.strip() for c in rows[0]]
        data_rows = rows[1:]
    else:
        names = [f"series-{i}" for i in range(len(rows[0]))]
        data_rows = rows
    if not data_rows:
        raise EmptyInput("no data rows after header")
    columns: list[list[float]] = [[] for _ in names]
    for r, row in enumerate(data_rows, start=1):
        if len(row) != len(names):
            raise ParseError(f"row {r} has {len(row)} cells, expected {len(names)}", row=r)
        for c, cell in enumerate(row):
            columns[c].append(_parse_float(cell, r, c))
    return SeriesSet(tuple(TimeSeries(n, col) for n, col in zip(names, columns)))


def _parse_long(rows: list[list[str]]) -> SeriesSet:
    if _has_header(rows[0]) and len(rows) > 1:
        rows = rows[1:]
    groups: dict[str, list[float]] = {}
    for r, row in enumerate(rows, start=1):
        if len(row) < 2:
            raise ParseError(f"row {r} needs an id and a value", row=r)
        sid = row[0].strip()
        groups.setdefault(sid, []).append(_parse_float(row[-1], r, len(row) - 1))
    if not groups:
        raise EmptyInput("no data rows")
    return SeriesSet(tuple(TimeSeries(sid, vals) for sid, vals in groups.items()))


def load_jsonl(path) -> SeriesSet:
    """Read one JSON object per line: {"id": ..., "values": [...]}."""
    series = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON on line {n}: {exc}", row=n) from None
            series.append(TimeSeries(str(obj["id"]), obj["values"]))
    if not series:
        raise EmptyInput(f"{path}: no series")
    return SeriesSet(tuple(series))


def save_csv(series_set: SeriesSet, path) -> None:
    """Write wide-layout CSV. Requires equal-length series."""
    lengths = {len(s) for s in series_set}
    if len(lengths) != 1:
        raise ValueError("wide CSV requires equal-length series; use JSONL instead")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(series_set.ids())
        for row in zip(*(s.values for s in series_set)):
            writer.writerow([repr(float(v)) for v in row])


def save_jsonl(series_set: SeriesSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in series_set:
            fh.write(json.dumps({"id": s.id, "values": list(s.values)}) + "\n")


def split(series: TimeSeries, spec: SplitSpec) -> tuple[TimeSeries, TimeSeries, TimeSeries]:
    """Contiguous train/val/test prefixes; floor arithmetic, remainder to test."""
    L = len(series)
    n_train = math.floor(L * spec.train_ratio)
    n_val = math.floor(L * spec.val_ratio)
    n_test = L - n_train - n_val
    if min(n_train, n_val, n_test) < 2:
        raise TooShort(f"series {series.id!r} of length {L} leaves a segment shorter than 2")
    if spec.history_len + spec.horizon > L:
        raise TooShort(
            f"history_len + horizon = {spec.history_len + spec.horizon} exceeds length {L}"
        )
    v = series.values
    return (
        TimeSeries(series.id, v[:n_train]),
        TimeSeries(series.id, v[n_train : n_train + n_val]),
        TimeSeries(series.id, v[n_train + n_val :]),
    )


def sliding_windows(
    series: TimeSeries, history_len: int, horizon: int, stride: int = 1
) -> list[tuple[np.ndarray, np.ndarray]]:
    """All (history, future) pairs in temporal order, no padding.

    Window count is floor((L - history_len - horizon) / stride) + 1.
    """
    L = len(series)
    if history_len + horizon > L:
        raise TooShort(f"need at least {history_len + horizon} points, have {L}")
    v = series.values
    out = []
    for start in range(0, L - history_len - horizon + 1, stride):
        mid = start + history_len
        out.append((v[start:mid], v[mid : mid + horizon]))
    return out


def minmax_normalize(series: TimeSeries) -> TimeSeries:
    """Affine map onto [0, 1]; a constant series maps to all-0.5."""
    return TimeSeries(series.id, minmax_values(series.values))


def minmax_values(values: np.ndarray) -> np.ndarray:
    lo = float(np.min(values))
    hi = float(np.max(values))
    if hi == lo:
        return np.full(len(values), 0.5)
    return (values - lo) / (hi - lo)
