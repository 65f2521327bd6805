"""Synthetic series generation from randomly composed Gaussian-process
kernels.

A composite kernel is 1-3 draws from a seven-family bank combined with
+ or * in a left fold; each series is one sample from the zero-mean GP
prior with that covariance on the unit-interval grid t_i = i / L.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveDefinite
from .series import SeriesSet, TimeSeries

FAMILIES = (
    "RBF",
    "Matern",
    "RationalQuadratic",
    "ExpSineSquared",
    "DotProduct",
    "WhiteNoise",
    "Constant",
)

# Periodicities are drawn in grid steps and mapped to the unit interval, so
# a planted season stays detectable at the configured length.
PERIOD_STEPS = (12, 24, 48, 96, 168)
MATERN_NU = (0.5, 1.5, 2.5)


@dataclass(frozen=True)
class KernelSpec:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        for key, value in self.params.items():
            if key in ("length_scale", "alpha", "periodicity", "noise_level", "constant_value"):
                if value <= 0:
                    raise ValueError(f"{self.family}.{key} must be positive, got {value}")

    def expr(self) -> str:
        args = ", ".join(f"{k}={v:.4g}" for k, v in sorted(self.params.items()))
        return f"{self.family}({args})"


@dataclass(frozen=True)
class CompositeKernel:
    leaves: tuple[KernelSpec, ...]
    ops: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.leaves) <= 3:
            raise ValueError("composite kernels use 1-3 leaves")
        if len(self.ops) != len(self.leaves) - 1:
            raise ValueError("need exactly one operator between consecutive leaves")
        for op in self.ops:
            if op not in ("add", "multiply"):
                raise ValueError(f"unknown operator {op!r}")

    def expr(self) -> str:
        out = self.leaves[0].expr()
        for op, leaf in zip(self.ops, self.leaves[1:]):
            symbol = "+" if op == "add" else "*"
            out = f"({out} {symbol} {leaf.expr()})"
        return out


@dataclass(frozen=True)
class SynthConfig:
    n_series: int = 200
    length: int = 1024
    seed: int = 0
    jitter: float = 1e-6
    max_leaves: int = 3
    families: tuple[str, ...] = FAMILIES

    def __post_init__(self):
        if self.length < 16:
            raise ValueError("length must be >= 16")
        if self.n_series < 1:
            raise ValueError("n_series must be >= 1")
        if not 1 <= self.max_leaves <= 3:
            raise ValueError("max_leaves must be in 1..3")
        object.__setattr__(self, "families", tuple(self.families))
        for fam in self.families:
            if fam not in FAMILIES:
                raise ValueError(f"unknown kernel family {fam!r}")


def _leaf_matrix(spec: KernelSpec, t: np.ndarray) -> np.ndarray:
    d = np.abs(t[:, None] - t[None, :])
    p = spec.params
    if spec.family == "RBF":
        return np.exp(-(d**2) / (2.0 * p["length_scale"] ** 2))
    if spec.family == "Matern":
        ls, nu = p["length_scale"], p["nu"]
        r = d / ls
        if nu == 0.5:
            return np.exp(-r)
        if nu == 1.5:
            z = np.sqrt(3.0) * r
            return (1.0 + z) * np.exp(-z)
        if nu == 2.5:
            z = np.sqrt(5.0) * r
            return (1.0 + z + z**2 / 3.0) * np.exp(-z)
        raise ValueError(f"unsupported Matern nu {nu}")
    if spec.family == "RationalQuadratic":
        ls, alpha = p["length_scale"], p["alpha"]
        return (1.0 + d**2 / (2.0 * alpha * ls**2)) ** (-alpha)
    if spec.family == "ExpSineSquared":
        ls, period = p["length_scale"], p["periodicity"]
        return np.exp(-2.0 * np.sin(np.pi * d / period) ** 2 / ls**2)
    if spec.family == "DotProduct":
        return p["sigma0"] ** 2 + np.outer(t, t)
    if spec.family == "WhiteNoise":
        return p["noise_level"] * np.eye(len(t))
    if spec.family == "Constant":
        return np.full((len(t), len(t)), p["constant_value"])
    raise ValueError(f"unknown kernel family {spec.family!r}")


def kernel_eval(kernel: CompositeKernel, t: float, t_prime: float) -> float:
    """Pointwise covariance k(t, t') of a composite kernel."""
    grid = np.array([t, t_prime])
    values = [_leaf_matrix(leaf, grid)[0, 1 if t != t_prime else 0] for leaf in kernel.leaves]
    out = values[0]
    for op, v in zip(kernel.ops, values[1:]):
        out = out + v if op == "add" else out * v
    return float(out)


def build_covariance(kernel: CompositeKernel, length: int) -> np.ndarray:
    """Covariance matrix on the unit-interval grid t_i = i / length."""
    if length < 2:
        raise ValueError("length must be >= 2")
    t = np.arange(length) / length
    out = _leaf_matrix(kernel.leaves[0], t)
    for op, leaf in zip(kernel.ops, kernel.leaves[1:]):
        m = _leaf_matrix(leaf, t)
        out = out + m if op == "add" else out * m
    return (out + out.T) / 2.0


def _cholesky_with_jitter(cov: np.ndarray, jitter: float) -> np.ndarray:
    eps = jitter
    while eps <= 1e-2:
        try:
            return np.linalg.cholesky(cov + eps * np.eye(len(cov)))
        except np.linalg.LinAlgError:
            eps *= 10.0
    raise NotPositiveDefinite(f"factorization failed with jitter up to 1e-2 (started {jitter})")


def sample_composite(rng: np.random.Generator, length: int,
                     families: tuple[str, ...] = FAMILIES,
                     max_leaves: int = 3) -> CompositeKernel:
    """Draw j ~ U(1, max_leaves) leaves uniformly from the bank, parameters
    from the documented ranges, operators uniformly from {+, *}."""
    j = int(rng.integers(1, max_leaves + 1))
    leaves = tuple(_sample_leaf(rng, length, families) for _ in range(j))
    ops = tuple("add" if rng.random() < 0.5 else "multiply" for _ in range(j - 1))
    return CompositeKernel(leaves, ops)


def _log_uniform(rng, lo, hi) -> float:
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def _sample_leaf(rng, length, families) -> KernelSpec:
    family = families[int(rng.integers(0, len(families)))]
    if family == "RBF":
        return KernelSpec(family, {"length_scale": _log_uniform(rng, 0.02, 1.0)})
    if family == "Matern":
        return KernelSpec(family, {
            "length_scale": _log_uniform(rng, 0.02, 1.0),
            "nu": float(MATERN_NU[int(rng.integers(0, len(MATERN_NU)))]),
        })
    if family == "RationalQuadratic":
        return KernelSpec(family, {
            "length_scale": _log_uniform(rng, 0.02, 1.0),
            "alpha": _log_uniform(rng, 0.1, 10.0),
        })
    if family == "ExpSineSquared":
        steps = int(PERIOD_STEPS[int(rng.integers(0, len(PERIOD_STEPS)))])
        return KernelSpec(family, {
            "length_scale": _log_uniform(rng, 0.02, 1.0) if rng.random() < 0.5 else 1.0,
            "periodicity": steps / length,
            "period_steps": steps,
        })
    if family == "DotProduct":
        return KernelSpec(family, {"sigma0": float(rng.uniform(0.0, 1.0))})
    if family == "WhiteNoise":
        return KernelSpec(family, {"noise_level": _log_uniform(rng, 1e-3, 0.5)})
    if family == "Constant":
        return KernelSpec(family, {"constant_value": float(rng.uniform(0.1, 2.0))})
    raise ValueError(f"unknown kernel family {family!r}")


def sample_gp(kernel: CompositeKernel, length: int, rng: np.random.Generator,
              jitter: float = 1e-6, series_id: str = "gp") -> TimeSeries:
    """One sample x = chol(K) z with z iid standard normal."""
    cov = build_covariance(kernel, length)
    chol = _cholesky_with_jitter(cov, jitter)
    return TimeSeries(series_id, chol @ rng.standard_normal(length))


def generate_dataset(config: SynthConfig) -> tuple[SeriesSet, list[dict]]:
    """Generate n_series independent GP samples with per-series provenance.

    Each series gets its own RNG stream derived from (seed, index), so
    parallel generation equals sequential generation bit for bit. A
    non-factorizable composite is resampled up to 5 times before failing.
    """
    series = []
    provenance = []
    for i in range(config.n_series):
        rng = np.random.default_rng([config.seed, i])
        last_error = None
        for _ in range(5):
            kernel = sample_composite(rng, config.length, config.families, config.max_leaves)
            try:
                ts = sample_gp(kernel, config.length, rng, config.jitter, f"synth-{i}")
            except NotPositiveDefinite as exc:
                last_error = exc
                continue
            series.append(ts)
            provenance.append({"id": ts.id, "kernel_expr": kernel.expr(), "seed": config.seed})
            break
        else:
            raise NotPositiveDefinite(
                f"series {i}: no factorizable kernel in 5 attempts ({last_error})"
            )
    return SeriesSet(tuple(series)), provenance


def save_provenance(provenance: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in provenance:
            fh.write(json.dumps(record) + "\n")
