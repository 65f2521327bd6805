"""Acceptance suite: nine criteria, each printing one PASS/FAIL line.

Run with `pytest -v -s tests/test_acceptance.py` to see the lines as they
complete. Every criterion asserts its stated tolerances; a red criterion
here means the implementation genuinely misses the target, not that the
test is loose.
"""

import time

import numpy as np
import pytest

from tsadvisor.baselines import evaluate, results_to_log
from tsadvisor.profiling import profile, profile_set
from tsadvisor.recommend import (
    hit_ratio_at_k,
    ndcg_at_k,
    nearest_key,
    rank_models,
    recommend,
    true_ranking,
)
from tsadvisor.series import SeriesSet, SplitSpec, TimeSeries
from tsadvisor.stattests import adf_test, arch_lm_test, kpss_test
from tsadvisor.store import PerfRecord, PropertyVector, Store, bin_profile, build_store
from tsadvisor.synth import SynthConfig, generate_dataset, sample_composite, sample_gp


def _sinusoid(amplitude=1.0, period=24, phase_deg=0.0, offset=0.0, length=336):
    t = np.arange(length)
    phase = np.deg2rad(phase_deg)
    return amplitude * np.sin(2 * np.pi * t / period + phase) + offset


def _report(criterion: int, failures: list[str], elapsed: float) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"\nACCEPTANCE CRITERION {criterion}: {status} ({elapsed:.1f}s)")
    for f in failures:
        print(f"  - {f}")
    assert not failures, f"criterion {criterion}: {failures}"


class TestCriterion1:
    def test_sinusoid_anchors(self):
        t0 = time.perf_counter()
        p = profile(TimeSeries("anchor", _sinusoid()))
        elapsed = time.perf_counter() - t0
        failures = []
        if p.is_stationary:
            failures.append("expected non-stationary")
        if not abs(abs(p.trend_strength) - 0.035) <= 0.02:
            failures.append(f"|tau| {abs(p.trend_strength):.4f} outside 0.035±0.02")
        if 24 not in p.seasons:
            failures.append(f"seasons {p.seasons} missing 24")
        if not abs(p.season_strength - 0.977) <= 0.02:
            failures.append(f"season_strength {p.season_strength:.4f} outside 0.977±0.02")
        if not abs(p.volatility - 0.7071) <= 0.005:
            failures.append(f"volatility {p.volatility:.4f} outside 0.7071±0.005")
        if p.anomaly_rate != 0.0:
            failures.append(f"anomaly_rate {p.anomaly_rate} != 0")
        if not abs(p.memory - 0.289) <= 0.15:
            failures.append(f"hurst {p.memory:.4f} outside 0.289±0.15")
        if elapsed >= 1.0:
            failures.append(f"runtime {elapsed:.2f}s >= 1s")
        _report(1, failures, elapsed)


class TestCriterion2:
    def test_invariance_sweeps(self):
        t0 = time.perf_counter()
        failures = []
        base = profile(TimeSeries("base", _sinusoid()))

        def compare(tag, p):
            if p.is_stationary != base.is_stationary:
                failures.append(f"{tag}: stationarity flipped")
            if abs(p.trend_strength - base.trend_strength) > 1e-6:
                failures.append(
                    f"{tag}: tau {p.trend_strength:.7f} vs base {base.trend_strength:.7f}"
                )
            if p.seasons != base.seasons:
                failures.append(f"{tag}: seasons {p.seasons} vs base {base.seasons}")
            if abs(p.season_strength - base.season_strength) > 1e-6:
                failures.append(f"{tag}: season_strength drifted")
            if abs(p.volatility - base.volatility) > 1e-6:
                failures.append(f"{tag}: volatility drifted")
            if abs(p.memory - base.memory) > 1e-6:
                failures.append(
                    f"{tag}: hurst {p.memory:.7f} vs base {base.memory:.7f}"
                )
            if abs(p.anomaly_rate - base.anomaly_rate) > 1e-6:
                failures.append(f"{tag}: anomaly drifted")

        for amplitude in (1.0, 10.0, 100.0):
            for offset in (0.0, 50.0, 100.0):
                for phase in (0.0, 90.0, 180.0):
                    if (amplitude, offset, phase) == (1.0, 0.0, 0.0):
                        continue
                    p = profile(
                        TimeSeries("s", _sinusoid(amplitude, 24, phase, offset))
                    )
                    compare(f"A={amplitude:g},b={offset:g},phi={phase:g}", p)

        for length in (336, 672, 984):
            p = profile(TimeSeries("s", _sinusoid(length=length)))
            if p.is_stationary:
                failures.append(f"L={length}: stationarity decision unstable")
            if 24 not in p.seasons:
                failures.append(f"L={length}: season 24 not detected")

        elapsed = time.perf_counter() - t0
        if elapsed >= 10.0:
            failures.append(f"runtime {elapsed:.1f}s >= 10s")
        _report(2, failures, elapsed)


class TestCriterion3:
    def test_statistical_calibration(self):
        t0 = time.perf_counter()
        failures = []
        n_seeds, length = 50, 1024
        adf_wn = kpss_wn = arch_wn = 0
        adf_rw = kpss_rw = arch_hit = 0
        anomaly_rates, hursts = [], []
        from tsadvisor.profiling import anomaly_rate as anomaly_fn, hurst as hurst_fn
        from tsadvisor.stattests import is_stationary

        for seed in range(n_seeds):
            rng = np.random.default_rng(seed)
            wn = rng.standard_normal(length)
            rw = np.cumsum(rng.standard_normal(length))
            arch = np.empty(length)
            arch[0] = rng.standard_normal()
            for i in range(1, length):
                arch[i] = rng.standard_normal() * np.sqrt(0.2 + 0.6 * arch[i - 1] ** 2)
            adf_wn += adf_test(wn).reject
            kpss_wn += not kpss_test(wn).reject
            arch_wn += not arch_lm_test(wn, 12).is_heteroscedastic
            adf_rw += not adf_test(rw).reject
            kpss_rw += kpss_test(rw).reject
            arch_hit += arch_lm_test(arch, 12).is_heteroscedastic
            anomaly_rates.append(anomaly_fn(wn))
            hursts.append(hurst_fn(wn))

        checks = [
            ("white noise ADF rejects", adf_wn),
            ("white noise KPSS non-rejects", kpss_wn),
            ("white noise ARCH non-flags", arch_wn),
            ("random walk ADF non-rejects", adf_rw),
            ("random walk KPSS rejects", kpss_rw),
            ("ARCH(1) flagged", arch_hit),
        ]
        for name, count in checks:
            if count < 0.9 * n_seeds:
                failures.append(f"{name}: {count}/{n_seeds} < 90%")
        mean_anomaly = float(np.mean(anomaly_rates))
        if not abs(mean_anomaly - 0.05) <= 0.015:
            failures.append(f"anomaly rate {mean_anomaly:.4f} outside 0.05±0.015")
        mean_hurst = float(np.mean(hursts))
        if not abs(mean_hurst - 0.5) <= 0.1:
            failures.append(f"hurst {mean_hurst:.4f} outside 0.5±0.1")

        elapsed = time.perf_counter() - t0
        if elapsed >= 60.0:
            failures.append(f"runtime {elapsed:.1f}s >= 60s")
        _report(3, failures, elapsed)


class TestCriterion4:
    def test_generator_round_trips(self):
        t0 = time.perf_counter()
        failures = []
        n_seeds, length = 50, 1024
        from tsadvisor.profiling import detect_seasons
        from tsadvisor.stattests import is_stationary, mann_kendall

        season_hits = trend_hits = stationary_hits = 0
        from tsadvisor.synth import PERIOD_STEPS, CompositeKernel, KernelSpec

        for seed in range(n_seeds):
            # Periodic composite: ExpSineSquared plus a small white-noise
            # leaf (a noiseless smooth draw hides long periods from any
            # difference-ACF detector).
            rng = np.random.default_rng([1000, seed])
            planted = int(PERIOD_STEPS[int(rng.integers(0, len(PERIOD_STEPS)))])
            length_scale = float(np.exp(rng.uniform(np.log(0.02), np.log(1.0))))
            k = CompositeKernel(
                (
                    KernelSpec(
                        "ExpSineSquared",
                        {
                            "length_scale": length_scale,
                            "periodicity": planted / length,
                            "period_steps": planted,
                        },
                    ),
                    KernelSpec("WhiteNoise", {"noise_level": 0.01}),
                ),
                ("add",),
            )
            ts = sample_gp(k, length, rng)
            found = detect_seasons(ts.values)
            if any(abs(p - planted) <= 1 for p in found):
                season_hits += 1

            rng = np.random.default_rng([2000, seed])
            k = sample_composite(rng, length, ("DotProduct",), max_leaves=1)
            ts = sample_gp(k, length, rng)
            if abs(mann_kendall(ts.values)) > 0.9:
                trend_hits += 1

            rng = np.random.default_rng([3000, seed])
            k = sample_composite(rng, length, ("WhiteNoise",), max_leaves=1)
            ts = sample_gp(k, length, rng)
            if is_stationary(ts.values):
                stationary_hits += 1

        for name, count in [
            ("planted period recovered", season_hits),
            ("DotProduct |tau| > 0.9", trend_hits),
            ("WhiteNoise stationary", stationary_hits),
        ]:
            if count < 0.9 * n_seeds:
                failures.append(f"{name}: {count}/{n_seeds} < 90%")

        elapsed = time.perf_counter() - t0
        if elapsed >= 120.0:
            failures.append(f"runtime {elapsed:.1f}s >= 2min")
        _report(4, failures, elapsed)


_RANGES = (2, 4, 4, 3, 4, 4, 2, 4)


class TestCriterion5:
    def test_retrieval_oracle(self):
        t0 = time.perf_counter()
        failures = []
        rng = np.random.default_rng(55)

        def random_vector():
            return PropertyVector(*(int(rng.integers(0, r)) for r in _RANGES))

        keys = {random_vector() for _ in range(500)}
        store = Store(
            index={k: ((PerfRecord("m", 0.1, 0.1),),) for k in keys},
            model_universe=frozenset({"m"}),
            excluded_stationary=0,
        )
        for i in range(1000):
            q = random_vector()
            got_key, got_dist = nearest_key(store, q)
            oracle = min(
                sorted(keys), key=lambda k: (sum(abs(a - b) for a, b in zip(k, q)), k)
            )
            if got_key != oracle:
                failures.append(f"query {i}: {got_key} != oracle {oracle}")
                break

        models = [f"m{i}" for i in range(8)]
        bags = [
            tuple(
                PerfRecord(m, float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
                for m in models
            )
            for _ in range(50)
        ]
        ranked = rank_models(bags)
        brute = sorted(
            models,
            key=lambda m: (
                np.mean([r.mae for bag in bags for r in bag if r.model == m]),
                np.mean([r.mse for bag in bags for r in bag if r.model == m]),
                m,
            ),
        )
        if [m for m, _, _ in ranked] != brute:
            failures.append("rank_models diverges from brute force")

        _report(5, failures, time.perf_counter() - t0)


class TestCriterion6:
    def test_metric_unit_values(self):
        t0 = time.perf_counter()
        failures = []
        models = [f"m{i}" for i in range(10)]
        other = [f"x{i}" for i in range(10)]
        for k in (3, 5, 7, 10):
            if hit_ratio_at_k(models, models, k) != 1.0:
                failures.append(f"HR@{k} identical != 1")
            if abs(ndcg_at_k(models, models, k) - 1.0) > 1e-12:
                failures.append(f"NDCG@{k} identical != 1")
            if hit_ratio_at_k(models, other, k) != 0.0:
                failures.append(f"HR@{k} disjoint != 0")
            if ndcg_at_k(models, other, k) != 0.0:
                failures.append(f"NDCG@{k} disjoint != 0")
        expected = (1 + 2 / np.log2(3)) / (2 + 1 / np.log2(3))
        got = ndcg_at_k(["B", "A"], ["A", "B"], 2)
        if abs(got - expected) > 1e-6:
            failures.append(f"worked example {got:.7f} != {expected:.7f}")
        _report(6, failures, time.perf_counter() - t0)


@pytest.fixture(scope="module")
def closed_loop():
    """Criterion-7 fixture shared with criterion 8: 200 synthetic series,
    profiles on the train+val history prefix, baseline log, store."""
    t0 = time.perf_counter()
    config = SynthConfig(n_series=200, length=1024, seed=42)
    dataset, _ = generate_dataset(config)
    spec = SplitSpec(history_len=336, horizon=96, stride=32)
    n_hist = int(1024 * 0.7) + int(1024 * 0.1)
    histories = SeriesSet(
        tuple(TimeSeries(s.id, s.values[:n_hist]) for s in dataset)
    )
    profiles = profile_set(histories)
    results, skipped = evaluate(
        ("hi", "naive_mean", "seasonal_naive", "ar", "linear"), dataset, spec
    )
    store = build_store(profiles, results_to_log(results))
    build_elapsed = time.perf_counter() - t0
    return dataset, histories, profiles, store, skipped, build_elapsed


class TestCriterion7:
    def test_closed_loop(self, closed_loop):
        t0 = time.perf_counter()
        failures = []
        dataset, histories, profiles, store, skipped, build_elapsed = closed_loop
        report = recommend(store, histories, tau=1.0, seed=0, profiles=profiles)

        bad = [g for g in report.groups if g.distance != 0]
        if bad:
            failures.append(f"{len(bad)} groups retrieved at nonzero distance")
        truth = true_ranking(store)
        recommended = [m for m, _, _ in report.ranked_models]
        hr3 = hit_ratio_at_k(recommended, truth, 3)
        if hr3 != 1.0:
            failures.append(f"HR@3 {hr3} != 1.0 (rec {recommended}, truth {truth})")

        seasonal = {
            sid: p
            for sid, p in profiles.items()
            if not p.is_stationary and bin_profile(p).season_strength == 3
        }
        if not seasonal:
            failures.append("no strongly seasonal queries in fixture")
        else:
            sub = recommend(store, histories, tau=1.0, seed=0, profiles=seasonal)
            order = [m for m, _, _ in sub.ranked_models]
            if order.index("seasonal_naive") > order.index("naive_mean"):
                failures.append(
                    f"seasonal subset ranks naive_mean above seasonal_naive: {order}"
                )

        elapsed = build_elapsed + (time.perf_counter() - t0)
        if elapsed >= 600.0:
            failures.append(f"pipeline runtime {elapsed:.0f}s >= 10min")
        _report(7, failures, elapsed)


class TestCriterion8:
    def test_sampling_rate_robustness(self, closed_loop):
        t0 = time.perf_counter()
        failures = []
        _, histories, profiles, store, _, _ = closed_loop
        agree = 0
        for seed in range(20):
            low = recommend(store, histories, tau=0.01, seed=seed, profiles=profiles)
            high = recommend(store, histories, tau=1.0, seed=seed, profiles=profiles)
            top3_low = [m for m, _, _ in low.ranked_models[:3]]
            top3_high = [m for m, _, _ in high.ranked_models[:3]]
            agree += top3_low == top3_high
        if agree < 18:
            failures.append(f"top-3 agreement {agree}/20 < 90%")
        _report(8, failures, time.perf_counter() - t0)


class TestCriterion9:
    def test_mstl_reconstruction(self):
        t0 = time.perf_counter()
        failures = []
        from tsadvisor.decompose import mstl_decompose
        from tsadvisor.profiling import detect_seasons

        dataset, _ = generate_dataset(SynthConfig(n_series=100, length=512, seed=77))
        worst = 0.0
        for ts in dataset:
            seasons = detect_seasons(ts.values)
            d = mstl_decompose(ts.values, seasons)
            err = float(
                np.max(np.abs(ts.values - d.trend - d.seasonal_sum() - d.residual))
            )
            worst = max(worst, err)
        if worst > 1e-8:
            failures.append(f"worst reconstruction error {worst:.2e} > 1e-8")
        _report(9, failures, time.perf_counter() - t0)
