"""Property-based model recommendation over the performance store.

Query profiles are binned and grouped, each group retrieves its nearest
stored key under the L1 metric, performance bags are sampled with
replacement in proportion to group weight, and models are ranked by mean
MAE. The report adds ranked models, dominant properties with strategy
advice, and model preference shifts against the all-series baseline.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from statistics import mean

import numpy as np

from .errors import EmptyInput, EmptyStore, TsAdvisorError
from .profiling import ProfileConfig, PropertyProfile, profile
from .series import SeriesSet
from .store import BIN_LABELS, PROPERTY_NAMES, PerfRecord, PropertyVector, Store, bin_profile
from .strategies import StrategyMap, load_strategy_map


@dataclass(frozen=True)
class QueryGroup:
    vector: PropertyVector
    weight: int
    stationary: bool = False

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError("group weight must be >= 1")


def group_queries(profiles: dict[str, PropertyProfile]) -> list[QueryGroup]:
    """Bin every query profile and count multiplicities.

    Stationary queries form their own flagged groups; they are reported
    but never retrieved against the store.
    """
    if not profiles:
        raise EmptyInput("no query profiles to group")
    counts: dict[tuple[PropertyVector, bool], int] = {}
    for prof in profiles.values():
        key = (bin_profile(prof), prof.is_stationary)
        counts[key] = counts.get(key, 0) + 1
    return [
        QueryGroup(vector, weight, stationary)
        for (vector, stationary), weight in sorted(counts.items())
    ]


def nearest_key(store: Store, q: PropertyVector) -> tuple[PropertyVector, int]:
    """Stored key closest to q in L1 distance, with the distance.

    An exact hit returns q at distance 0; ties are broken by lexicographic
    order of the stored key.
    """
    if not store.index:
        raise EmptyStore("cannot retrieve from an empty store")
    if q in store.index:
        return q, 0
    best_key, best_dist = None, None
    for key in sorted(store.index):
        dist = sum(abs(a - b) for a, b in zip(key, q))
        if best_dist is None or dist < best_dist:
            best_key, best_dist = key, dist
    return best_key, best_dist


def sample_values(
    store: Store, key: PropertyVector, count: int, rng: np.random.Generator
) -> list[tuple[PerfRecord, ...]]:
    """Draw `count` bags uniformly with replacement from the key's bag list."""
    if count < 1:
        raise ValueError("count must be >= 1")
    bags = store.index[key]
    picks = rng.integers(0, len(bags), size=count)
    return [bags[int(i)] for i in picks]


def rank_models(bags: list[tuple[PerfRecord, ...]]) -> list[tuple[str, float, float]]:
    """Per-model mean MAE and MSE over every sampled measurement, ranked
    ascending by mean MAE with mean MSE then name as tiebreaks."""
    if not bags:
        raise EmptyInput("no sampled bags to rank")
    maes: dict[str, list[float]] = {}
    mses: dict[str, list[float]] = {}
    for bag in bags:
        for rec in bag:
            maes.setdefault(rec.model, []).append(rec.mae)
            mses.setdefault(rec.model, []).append(rec.mse)
    ranked = [(m, mean(maes[m]), mean(mses[m])) for m in maes]
    ranked.sort(key=lambda t: (t[1], t[2], t[0]))
    return ranked


def hit_ratio_at_k(recommended: list[str], truth: list[str], k: int) -> float:
    """|top-k(recommended) ∩ top-k(truth)| / k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return len(set(recommended[:k]) & set(truth[:k])) / k


def ndcg_at_k(recommended: list[str], truth: list[str], k: int) -> float:
    """NDCG with graded relevance rel(m) = k - rank_truth(m) (0-based) for
    models inside the truth top-k, else 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rel = {m: k - i for i, m in enumerate(truth[:k])}
    dcg = sum(rel.get(m, 0) / math.log2(i + 2) for i, m in enumerate(recommended[:k]))
    ideal = sorted(rel.values(), reverse=True)
    idcg = sum(r / math.log2(i + 2) for i, r in enumerate(ideal))
    return dcg / idcg if idcg > 0 else 0.0


@dataclass(frozen=True)
class GroupOutcome:
    vector: PropertyVector
    weight: int
    matched_key: PropertyVector
    distance: int


@dataclass(frozen=True)
class RecommendationReport:
    ranked_models: tuple[tuple[str, float, float], ...]
    top_properties: tuple[tuple[str, float], ...]
    strategies_adopt: tuple[str, ...]
    strategies_avoid: tuple[str, ...]
    preferred_models: tuple[tuple[str, float], ...]
    unsuitable_models: tuple[tuple[str, float], ...]
    stationary_query_count: int
    skipped_query_count: int
    query_count: int
    groups: tuple[GroupOutcome, ...]
    tau: float
    seed: int
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> str:
        payload = {
            "ranked_models": [
                {"model": m, "mean_mae": mae, "mean_mse": mse}
                for m, mae, mse in self.ranked_models
            ],
            "top_properties": [
                {"label": label, "percent": pct} for label, pct in self.top_properties
            ],
            "strategies_adopt": list(self.strategies_adopt),
            "strategies_avoid": list(self.strategies_avoid),
            "preferred_models": [
                {"model": m, "improvement_ratio": r} for m, r in self.preferred_models
            ],
            "unsuitable_models": [
                {"model": m, "degradation_ratio": r} for m, r in self.unsuitable_models
            ],
            "stationary_query_count": self.stationary_query_count,
            "skipped_query_count": self.skipped_query_count,
            "query_count": self.query_count,
            "groups": [
                {
                    "vector": list(g.vector),
                    "weight": g.weight,
                    "matched_key": list(g.matched_key),
                    "distance": g.distance,
                }
                for g in self.groups
            ],
            "tau": self.tau,
            "seed": self.seed,
            "notes": list(self.notes),
        }
        return json.dumps(payload, indent=1)

    def to_text(self) -> str:
        lines = ["Interpretability Suggestions:", "", "Main properties:"]
        for label, pct in self.top_properties:
            lines.append(f"  {pct:.0f}% {label}")
        lines += ["", "Strategies that can be adopted:"]
        for s in self.strategies_adopt:
            lines.append(f"  {s}")
        lines += ["", "Strategies to be avoided:"]
        for s in self.strategies_avoid:
            lines.append(f"  {s}")
        lines += ["", "Models with potential preferences:"]
        for m, r in self.preferred_models:
            lines.append(f"  {m} ({r:+.1%} vs all-series mean MAE)")
        lines += ["", "Potentially unsuitable Models:"]
        for m, r in self.unsuitable_models:
            lines.append(f"  {m} ({r:+.1%} vs all-series mean MAE)")
        lines += ["", "Top 10 Recommended Models:"]
        for i, (m, mae, mse) in enumerate(self.ranked_models[:10], start=1):
            lines.append(f"  {i}. {m} (MAE {mae:.4f}, MSE {mse:.4f})")
        lines += ["", "Validation:"]
        lines.append(
            f"  {self.query_count} query series, {self.stationary_query_count} stationary"
            f" (excluded from retrieval), {self.skipped_query_count} skipped;"
            f" tau={self.tau}, seed={self.seed}."
        )
        for note in self.notes:
            lines.append(f"  {note}")
        return "\n".join(lines) + "\n"


def regular_means(store: Store) -> dict[str, float]:
    """All-series mean MAE per model over every bag in the store."""
    maes: dict[str, list[float]] = {}
    for bags in store.index.values():
        for bag in bags:
            for rec in bag:
                maes.setdefault(rec.model, []).append(rec.mae)
    return {m: mean(v) for m, v in maes.items()}


def true_ranking(store: Store) -> list[str]:
    """Store-derived ground-truth model order: ascending all-series mean
    MAE, ties by mean MSE then name."""
    maes: dict[str, list[float]] = {}
    mses: dict[str, list[float]] = {}
    for bags in store.index.values():
        for bag in bags:
            for rec in bag:
                maes.setdefault(rec.model, []).append(rec.mae)
                mses.setdefault(rec.model, []).append(rec.mse)
    ranked = sorted(maes, key=lambda m: (mean(maes[m]), mean(mses[m]), m))
    return ranked


def _top_properties(
    profiles: dict[str, PropertyProfile],
) -> list[tuple[str, str, int, float]]:
    """Most frequent bin per dimension: (dimension, label, bin, percent),
    ordered by descending prevalence."""
    vectors = [bin_profile(p) for p in profiles.values()]
    n = len(vectors)
    out = []
    for dim in PROPERTY_NAMES:
        counts: dict[int, int] = {}
        for v in vectors:
            b = getattr(v, dim)
            counts[b] = counts.get(b, 0) + 1
        top_bin = max(counts, key=lambda b: (counts[b], -b))
        pct = 100.0 * counts[top_bin] / n
        out.append((dim, BIN_LABELS[dim][top_bin], top_bin, pct))
    out.sort(key=lambda t: -t[3])
    return out


def interpret(
    profiles: dict[str, PropertyProfile],
    ranking: list[tuple[str, float, float]],
    regular: dict[str, float] | None,
    strategy_map: StrategyMap,
) -> tuple[
    tuple[tuple[str, float], ...],
    tuple[str, ...],
    tuple[str, ...],
    tuple[tuple[str, float], ...],
    tuple[tuple[str, float], ...],
    tuple[str, ...],
]:
    """Derive the interpretability sections: dominant properties, strategy
    advice ordered by property prevalence, and model preference shifts
    against the all-series means."""
    tops = _top_properties(profiles)
    top_properties = tuple((label, pct) for _, label, _, pct in tops)
    adopt: list[str] = []
    avoid: list[str] = []
    for dim, _label, top_bin, _pct in tops:
        for entry in strategy_map.matching(dim, top_bin):
            for s in entry.adopt:
                if s not in adopt:
                    adopt.append(s)
            for s in entry.avoid:
                if s not in avoid:
                    avoid.append(s)

    notes: list[str] = []
    preferred: list[tuple[str, float]] = []
    unsuitable: list[tuple[str, float]] = []
    if not regular:
        notes.append("Model preference section omitted: no all-series baseline available.")
    else:
        shifts = []
        for model, mae, _mse in ranking:
            base = regular.get(model)
            if base is None or base == 0.0:
                continue
            # Negative ratio = better than the all-series mean.
            shifts.append((model, (mae - base) / base))
        shifts.sort(key=lambda t: t[1])
        preferred = [(m, r) for m, r in shifts if r < 0][:3]
        unsuitable = [(m, r) for m, r in reversed(shifts) if r > 0][:3]
    return (
        top_properties,
        tuple(adopt),
        tuple(avoid),
        tuple(preferred),
        tuple(unsuitable),
        tuple(notes),
    )


def recommend(
    store: Store,
    queries: SeriesSet,
    tau: float,
    seed: int,
    config: ProfileConfig | None = None,
    strategy_map: StrategyMap | None = None,
    profiles: dict[str, PropertyProfile] | None = None,
) -> RecommendationReport:
    """End-to-end recommendation for a practical dataset.

    Each query series (already sliced to its history segment by the
    caller) is profiled, grouped, retrieved and sampled; precomputed
    `profiles` skip the profiling pass. Deterministic given
    (store, queries, tau, seed).
    """
    if not store.index:
        raise EmptyStore("cannot recommend from an empty store")
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    config = config or ProfileConfig()
    strategy_map = strategy_map or load_strategy_map()

    skipped = 0
    if profiles is None:
        profiles = {}
        for ts in queries:
            try:
                profiles[ts.id] = profile(ts, config)
            except TsAdvisorError:
                skipped += 1
    if not profiles:
        raise EmptyInput("no query series could be profiled")

    groups = group_queries(profiles)
    rng = np.random.default_rng(seed)
    sampled: list[tuple[PerfRecord, ...]] = []
    outcomes: list[GroupOutcome] = []
    stationary_count = 0
    for group in groups:
        if group.stationary:
            stationary_count += group.weight
            continue
        key, dist = nearest_key(store, group.vector)
        count = math.ceil(tau * group.weight)
        sampled.extend(sample_values(store, key, count, rng))
        outcomes.append(GroupOutcome(group.vector, group.weight, key, dist))
    if not sampled:
        raise EmptyInput("every query series is stationary; nothing to retrieve")

    ranking = rank_models(sampled)
    tops, adopt, avoid, preferred, unsuitable, notes = interpret(
        profiles, ranking, regular_means(store), strategy_map
    )
    notes = notes + (
        "Ranking key: mean MAE (mean MSE, then name, break ties). "
        "Retrieval metric: L1 over binned property vectors.",
    )
    return RecommendationReport(
        ranked_models=tuple(ranking),
        top_properties=tops,
        strategies_adopt=adopt,
        strategies_avoid=avoid,
        preferred_models=preferred,
        unsuitable_models=unsuitable,
        stationary_query_count=stationary_count,
        skipped_query_count=skipped,
        query_count=len(profiles),
        groups=tuple(outcomes),
        tau=tau,
        seed=seed,
        notes=notes,
    )
