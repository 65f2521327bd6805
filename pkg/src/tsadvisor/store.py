"""Binned property vectors and the key-value performance store.

A profile is compressed into an 8-component integer vector (the retrieval
key); model performance measurements per series are grouped into bags and
indexed by that key. Stationary series carry no exploitable pattern and
are excluded from the index but tallied.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from statistics import mean, median
from typing import NamedTuple

from .errors import (
    DuplicateMeasurement,
    EmptyInput,
    MissingProfile,
    NegativeMetric,
    ParseError,
)
from .profiling import PropertyProfile

STORE_SCHEMA_VERSION = 1

PROPERTY_NAMES = (
    "stationarity",
    "trend",
    "season_strength",
    "season_count",
    "volatility",
    "memory",
    "scedasticity",
    "anomaly",
)

# Human-readable labels per dimension, indexed by bin.
BIN_LABELS = {
    "stationarity": ("Stationary", "Non-stationary"),
    "trend": ("No trend", "Weak trend", "Strong trend", "Very strong trend"),
    "season_strength": (
        "No seasonality",
        "Weak seasonality",
        "Moderate seasonality",
        "Strong seasonality",
    ),
    "season_count": ("Non-seasonal", "Single-season", "Multi-season"),
    "volatility": ("Low volatility", "Moderate volatility", "High volatility", "Very high volatility"),
    "memory": ("Very short memory", "Short-term dependence", "Long-term dependence", "Very long memory"),
    "scedasticity": ("Homo-scedasticity", "Hetro-scedasticity"),
    "anomaly": ("Low anomaly", "Mild anomaly", "High anomaly", "Very high anomaly"),
}


class PropertyVector(NamedTuple):
    """8-component binned profile; hashable and lexicographically orderable."""

    stationarity: int
    trend: int
    season_strength: int
    season_count: int
    volatility: int
    memory: int
    scedasticity: int
    anomaly: int


_RANGES = (2, 4, 4, 3, 4, 4, 2, 4)


def validate_vector(v: PropertyVector) -> None:
    for value, upper, name in zip(v, _RANGES, PROPERTY_NAMES):
        if not 0 <= value < upper:
            raise ValueError(f"{name} component {value} outside [0, {upper})")


def _bin_upper_closed(value: float, edges: tuple[float, ...]) -> int:
    """Index of the first interval whose closed upper edge covers value;
    values above the last edge fall in the top bin."""
    for i, edge in enumerate(edges):
        if value <= edge:
            return i
    return len(edges)


def bin_profile(p: PropertyProfile) -> PropertyVector:
    """Compress a profile into its retrieval key.

    Interval upper bounds are closed; stationarity component is 1 for a
    NON-stationary series (the informative case).
    """
    v = PropertyVector(
        stationarity=0 if p.is_stationary else 1,
        trend=_bin_upper_closed(abs(p.trend_strength), (0.1, 0.5, 0.9)),
        season_strength=_bin_upper_closed(p.season_strength, (0.25, 0.5, 0.75)),
        season_count=min(len(p.seasons), 2),
        volatility=_bin_upper_closed(p.volatility, (0.4, 0.6, 0.8)),
        memory=_bin_upper_closed(p.memory, (0.25, 0.5, 0.75)),
        scedasticity=1 if p.is_heteroscedastic else 0,
        anomaly=_bin_upper_closed(p.anomaly_rate, (0.05, 0.1, 0.15)),
    )
    validate_vector(v)
    return v


@dataclass(frozen=True)
class PerfRecord:
    model: str
    mae: float
    mse: float

    def __post_init__(self):
        for name, value in (("mae", self.mae), ("mse", self.mse)):
            if not math.isfinite(value) or value < 0:
                raise NegativeMetric(f"{name} must be finite and >= 0, got {value}")


LOG_HEADER = ["series_id", "model", "mae", "mse"]


def ingest_log(path) -> list[tuple[str, PerfRecord]]:
    """Parse a performance log CSV with header series_id,model,mae,mse."""
    out: list[tuple[str, PerfRecord]] = []
    seen: set[tuple[str, str]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInput(f"{path}: empty log file") from None
        if [h.strip() for h in header] != LOG_HEADER:
            raise ParseError(f"{path}: expected header {','.join(LOG_HEADER)}", row=1)
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise ParseError(f"{path}: expected 4 fields, got {len(row)}", row=row_no)
            sid, model = row[0].strip(), row[1].strip()
            if not sid or not model:
                raise ParseError(f"{path}: empty series_id or model", row=row_no)
            try:
                mae, mse = float(row[2]), float(row[3])
            except ValueError as exc:
                raise ParseError(f"{path}: non-numeric metric ({exc})", row=row_no) from None
            key = (sid, model)
            if key in seen:
                raise DuplicateMeasurement(f"{path}: duplicate measurement for {key} at row {row_no}")
            seen.add(key)
            out.append((sid, PerfRecord(model, mae, mse)))
    return out


def write_log(rows: list[tuple[str, PerfRecord]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LOG_HEADER)
        for sid, rec in rows:
            writer.writerow([sid, rec.model, repr(rec.mae), repr(rec.mse)])


@dataclass(frozen=True)
class Store:
    """Immutable after build: one bag of records per stored series, indexed
    by property vector."""

    index: dict[PropertyVector, tuple[tuple[PerfRecord, ...], ...]]
    model_universe: frozenset[str]
    excluded_stationary: int
    config_hash: str = ""

    def n_series(self) -> int:
        return sum(len(bags) for bags in self.index.values())


def build_store(
    profiles: dict[str, PropertyProfile],
    log: list[tuple[str, PerfRecord]],
    config_hash: str = "",
) -> Store:
    """Group log records into per-series bags keyed by the binned profile.

    Every logged series needs a profile; stationary series are excluded
    from the index and counted in `excluded_stationary`.
    """
    by_series: dict[str, list[PerfRecord]] = {}
    for sid, rec in log:
        if sid not in profiles:
            raise MissingProfile(f"no profile for logged series {sid!r}")
        by_series.setdefault(sid, []).append(rec)

    index: dict[PropertyVector, list[tuple[PerfRecord, ...]]] = {}
    models: set[str] = set()
    excluded = 0
    for sid, records in by_series.items():
        profile = profiles[sid]
        if profile.is_stationary:
            excluded += 1
            continue
        index.setdefault(bin_profile(profile), []).append(tuple(records))
        models.update(r.model for r in records)
    return Store(
        index={k: tuple(v) for k, v in index.items()},
        model_universe=frozenset(models),
        excluded_stationary=excluded,
        config_hash=config_hash,
    )


def save_store(store: Store, path) -> None:
    payload = {
        "schema": "perf-store",
        "version": STORE_SCHEMA_VERSION,
        "config_hash": store.config_hash,
        "excluded_stationary": store.excluded_stationary,
        "models": sorted(store.model_universe),
        "index": [
            {
                "key": list(key),
                "bags": [
                    [{"model": r.model, "mae": r.mae, "mse": r.mse} for r in bag]
                    for bag in bags
                ],
            }
            for key, bags in sorted(store.index.items())
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_store(path) -> Store:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema") != "perf-store":
        raise ParseError(f"{path}: not a performance store file")
    if int(payload.get("version", -1)) > STORE_SCHEMA_VERSION:
        raise ParseError(f"{path}: unsupported store version {payload['version']}")
    index: dict[PropertyVector, tuple[tuple[PerfRecord, ...], ...]] = {}
    for entry in payload["index"]:
        key = PropertyVector(*entry["key"])
        validate_vector(key)
        bags = tuple(
            tuple(PerfRecord(r["model"], float(r["mae"]), float(r["mse"])) for r in bag)
            for bag in entry["bags"]
        )
        index[key] = bags
    return Store(
        index=index,
        model_universe=frozenset(payload["models"]),
        excluded_stationary=int(payload["excluded_stationary"]),
        config_hash=payload.get("config_hash", ""),
    )


def _property_bin(profile: PropertyProfile, prop: str) -> int:
    vector = bin_profile(profile)
    return getattr(vector, prop)


def aggregate_table(
    profiles: dict[str, PropertyProfile],
    log: list[tuple[str, PerfRecord]],
    property_name: str,
) -> dict:
    """Per-bin, per-model mean/median of MAE and MSE, plus a Regular column
    over all series. Cells for empty bins are absent rather than zero.

    Works on raw profiles and log, so the Stationary bin of the
    stationarity dimension is reported even though the store excludes it.
    """
    if property_name not in PROPERTY_NAMES:
        raise ValueError(f"unknown property {property_name!r}; choose from {PROPERTY_NAMES}")
    if not log:
        raise EmptyInput("empty performance log")
    labels = BIN_LABELS[property_name]
    cells: dict[str, dict[str, dict[str, float]]] = {}
    per_model_bin: dict[tuple[str, str], list[PerfRecord]] = {}
    for sid, rec in log:
        if sid not in profiles:
            raise MissingProfile(f"no profile for logged series {sid!r}")
        column = labels[_property_bin(profiles[sid], property_name)]
        per_model_bin.setdefault((rec.model, column), []).append(rec)
        per_model_bin.setdefault((rec.model, "Regular"), []).append(rec)
    for (model, column), records in per_model_bin.items():
        maes = [r.mae for r in records]
        mses = [r.mse for r in records]
        cells.setdefault(model, {})[column] = {
            "mae_mean": mean(maes),
            "mae_median": median(maes),
            "mse_mean": mean(mses),
            "mse_median": median(mses),
            "count": len(records),
        }
    return {
        "property": property_name,
        "columns": list(labels) + ["Regular"],
        "models": {model: cells[model] for model in sorted(cells)},
    }
