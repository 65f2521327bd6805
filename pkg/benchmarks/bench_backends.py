"""Compare the compiled extension against the NumPy fallback on the two
hot kernels (Kendall pair counting and autocorrelation).

Run: python benchmarks/bench_backends.py [--length 4096] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tsadvisor import _purecore

try:
    from tsadvisor import _fastcore
except ImportError:
    _fastcore = None


def bench(fn, *args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--length", type=int, default=4096)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    x = rng.standard_normal(args.length)
    tol = 1e-9 * float(x.max() - x.min())
    max_lag = args.length // 2

    rows = []
    for name, fn, fargs in [
        ("kendall_s", None, (x, tol)),
        ("autocorr", None, (x, max_lag)),
    ]:
        pure_t = bench(getattr(_purecore, name), *fargs, repeats=args.repeats)
        if _fastcore is not None:
            fast_t = bench(getattr(_fastcore, name), *fargs, repeats=args.repeats)
            ref = getattr(_purecore, name)(*fargs)
            got = getattr(_fastcore, name)(*fargs)
            assert np.allclose(ref, got, atol=1e-10), f"{name}: backend mismatch"
            rows.append((name, pure_t, fast_t, pure_t / fast_t))
        else:
            rows.append((name, pure_t, None, None))

    print(f"L = {args.length}, best of {args.repeats}")
    print(f"{'kernel':<12} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, pure_t, fast_t, speedup in rows:
        if fast_t is None:
            print(f"{name:<12} {pure_t * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>8}")
        else:
            print(f"{name:<12} {pure_t * 1e3:>8.2f}ms {fast_t * 1e3:>8.2f}ms {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
