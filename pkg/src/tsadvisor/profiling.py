"""The seven-property statistical profile of a series history.

Properties: stationarity decision, Mann-Kendall trend strength, detected
seasonal periods with a combined seasonal strength, coefficient of
variation of the min-max normalized values, Hurst memory estimate,
ARCH-LM scedasticity decision on the decomposition residual, and the
one-sided z-score outlier rate.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import gamma as _gamma_fn

from .decompose import Decomposition, mstl_decompose, season_strength
from .errors import TooShort
from .series import SeriesSet, TimeSeries, minmax_values
from .stattests import acf, arch_lm_test, is_constant, is_stationary, mann_kendall


@dataclass(frozen=True)
class ProfileConfig:
    """Knobs for the profiler; the hash of this config travels with every
    exported profile so stores built under different settings never mix."""

    max_season_candidates: int = 10
    sampling_freq: float = 1.0
    season_acf_threshold: float = 0.1
    acf_band_z: float = 1.96
    acf_band_fraction: float = 0.95
    hurst_min_window: int = 16
    arch_max_lags: int = 12
    anomaly_z: float = 1.645
    mk_tie_rel_tol: float = 1e-9

    def hash(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class PropertyProfile:
    is_stationary: bool
    trend_strength: float
    seasons: tuple[int, ...]
    season_strength: float
    volatility: float
    memory: float
    is_heteroscedastic: bool
    anomaly_rate: float
    flags: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["seasons"] = list(self.seasons)
        d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PropertyProfile":
        return cls(
            is_stationary=bool(d["is_stationary"]),
            trend_strength=float(d["trend_strength"]),
            seasons=tuple(int(p) for p in d["seasons"]),
            season_strength=float(d["season_strength"]),
            volatility=float(d["volatility"]),
            memory=float(d["memory"]),
            is_heteroscedastic=bool(d["is_heteroscedastic"]),
            anomaly_rate=float(d["anomaly_rate"]),
            flags=tuple(d.get("flags", ())),
        )


def detect_seasons(values, max_candidates: int = 10, sampling_freq: float = 1.0,
                   acf_threshold: float = 0.1) -> list[int]:
    """Detect primary periods from the ACF of the first-differenced series.

    Candidate lags are visited in order of descending autocorrelation
    (lag 0 excluded); a candidate period p is accepted when p >= 2, its
    autocorrelation clears the threshold, and it is not a near multiple
    (p mod p_i < 2) of any period already accepted. At most
    `max_candidates` lags are examined. Returns ascending periods < L//2.
    """
    x = np.asarray(values, dtype=float)
    L = len(x)
    if L < 8:
        raise TooShort(f"season detection needs at least 8 points, got {L}")
    diffed = np.diff(x)
    r = acf(diffed, len(diffed) // 2)
    order = [int(k) for k in np.argsort(r, kind="stable")[::-1] if k != 0]
    accepted: list[int] = []
    for k in order[:max_candidates]:
        p = int(np.floor(k / sampling_freq))
        if p < 2 or p >= L // 2 or p >= len(r):
            continue
        if r[p] <= acf_threshold:
            continue
        if any(p % q < 2 for q in accepted):
            continue
        accepted.append(p)
    return sorted(accepted)


def volatility_cv(values) -> float:
    """Coefficient of variation of the min-max normalized series
    (population standard deviation over mean). Constant input gives 0."""
    x = np.asarray(values, dtype=float)
    if is_constant(x):
        return 0.0
    norm = minmax_values(x)
    return float(np.std(norm) / np.mean(norm))


def _expected_rs(n: int) -> float:
    # Anis-Lloyd expectation of R/S for iid Gaussian input, with the
    # Peters small-sample correction factor.
    if n <= 340:
        front = _gamma_fn((n - 1) / 2.0) / (np.sqrt(np.pi) * _gamma_fn(n / 2.0))
    else:
        front = 1.0 / np.sqrt(n * np.pi / 2.0)
    i = np.arange(1, n)
    return float((n - 0.5) / n * front * np.sum(np.sqrt((n - i) / i)))


def hurst(values, min_window: int = 16) -> float:
    """Rescaled-range memory estimate in [0, 1].

    Mean R/S over non-overlapping windows of dyadic sizes between
    `min_window` and L/2, divided by the Anis-Lloyd expectation for iid
    input; the estimate is 0.5 plus the slope of the corrected log R/S
    against log window size, clamped to [0, 1]. Constant input returns
    0.5 (memoryless by convention).
    """
    x = np.asarray(values, dtype=float)
    L = len(x)
    if L < 64:
        raise TooShort(f"Hurst estimation needs at least 64 points, got {L}")
    if is_constant(x):
        return 0.5
    sizes = []
    w = min_window
    while w <= L // 2:
        sizes.append(w)
        w *= 2
    log_size, log_rs = [], []
    for w in sizes:
        ratios = []
        for b in range(L // w):
            seg = x[b * w : (b + 1) * w]
            dev = np.cumsum(seg - seg.mean())
            spread = float(dev.max() - dev.min())
            sd = float(seg.std())
            if sd > 0:
                ratios.append(spread / sd)
        if ratios:
            log_size.append(np.log(w))
            log_rs.append(np.log(np.mean(ratios) / _expected_rs(w)))
    if len(log_size) < 2:
        return 0.5
    slope = float(np.polyfit(log_size, log_rs, 1)[0])
    return min(1.0, max(0.0, 0.5 + slope))


def anomaly_rate(values, z_threshold: float = 1.645) -> float:
    """Fraction of points whose one-sided z-score exceeds the threshold."""
    x = np.asarray(values, dtype=float)
    if is_constant(x):
        return 0.0
    z = (x - x.mean()) / x.std()
    return float(np.mean(z > z_threshold))


def profile(series: TimeSeries, config: ProfileConfig | None = None) -> PropertyProfile:
    """Compute the full property profile of one series history.

    Pure function of (values, config); identical inputs give identical
    outputs.
    """
    config = config or ProfileConfig()
    x = series.values
    if len(x) < 64:
        raise TooShort(f"profiling needs at least 64 points, series {series.id!r} has {len(x)}")

    flags: list[str] = []
    if is_constant(x):
        flags.append("constant")
        return PropertyProfile(
            is_stationary=False, trend_strength=0.0, seasons=(), season_strength=0.0,
            volatility=0.0, memory=0.5, is_heteroscedastic=False, anomaly_rate=0.0,
            flags=tuple(flags),
        )

    stationary = is_stationary(x)
    tau = mann_kendall(x, tie_rel_tol=config.mk_tie_rel_tol)
    seasons = detect_seasons(
        x,
        max_candidates=config.max_season_candidates,
        sampling_freq=config.sampling_freq,
        acf_threshold=config.season_acf_threshold,
    )
    decomp = mstl_decompose(x, seasons)
    strength = season_strength(decomp)
    cv = volatility_cv(x)
    memory = hurst(x, min_window=config.hurst_min_window)
    q = min(config.arch_max_lags, len(x) // 20)
    if q >= 1:
        arch = arch_lm_test(decomp.residual, q)
        hetero = arch.is_heteroscedastic
        if arch.singular:
            flags.append("arch_singular")
    else:
        hetero = False
        flags.append("arch_skipped_short")
    rate = anomaly_rate(x, z_threshold=config.anomaly_z)
    return PropertyProfile(
        is_stationary=stationary,
        trend_strength=tau,
        seasons=tuple(seasons),
        season_strength=strength,
        volatility=cv,
        memory=memory,
        is_heteroscedastic=hetero,
        anomaly_rate=rate,
        flags=tuple(flags),
    )


def _profile_one(args):
    series, config = args
    return profile(series, config)


def profile_set(
    series_set: SeriesSet, config: ProfileConfig | None = None, workers: int = 1
) -> dict[str, PropertyProfile]:
    """Profile every series, in input order; fan out across processes when
    workers > 1 (results are identical either way)."""
    config = config or ProfileConfig()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_profile_one, [(s, config) for s in series_set]))
    else:
        results = [profile(s, config) for s in series_set]
    return {s.id: p for s, p in zip(series_set, results)}


def save_profiles(profiles: dict[str, PropertyProfile], path, config: ProfileConfig) -> None:
    """JSONL export: one object per series with the config hash attached."""
    with open(path, "w", encoding="utf-8") as fh:
        for sid, prof in profiles.items():
            obj = {"id": sid, **prof.to_dict(), "config_hash": config.hash()}
            fh.write(json.dumps(obj) + "\n")


def load_profiles(path) -> dict[str, PropertyProfile]:
    profiles: dict[str, PropertyProfile] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            profiles[str(obj["id"])] = PropertyProfile.from_dict(obj)
    return profiles
