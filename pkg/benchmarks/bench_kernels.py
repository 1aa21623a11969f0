"""Compare the compiled kernels against the pure-NumPy fallback.

Times the three hot kernels (pairwise distances, membership update,
weighted centers) and a full type-2 clustering run on random data at a few
sizes, then prints a table with the speedup of the compiled path.

Usage: python benchmarks/bench_kernels.py [--sizes 1000 4000] [--reps 5]
"""
import argparse
import time

import numpy as np

from it2fcm import clustering, kernels


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_size(n, d, c, reps):
    rng = np.random.default_rng(0)
    data = rng.standard_normal((n, d))
    centers = rng.standard_normal((c, d))
    dist = kernels.pairwise_distances(data, centers)
    weights = kernels.memberships_from_distances(dist, 2.0) ** 2

    rows = []
    if kernels.BACKEND != "compiled":
        raise SystemExit(
            "compiled backend not available (build the extension first, or "
            "unset IT2FCM_FORCE_PY)")
    from it2fcm import _ckernels

    cases = [
        ("pairwise_distances",
         lambda: _ckernels.pairwise_distances(data, centers),
         lambda: kernels.py_pairwise_distances(data, centers)),
        ("memberships_from_distances",
         lambda: _ckernels.memberships_from_distances(dist, 2.0),
         lambda: kernels.py_memberships_from_distances(dist, 2.0)),
        ("weighted_centers",
         lambda: _ckernels.weighted_centers(weights, data),
         lambda: kernels.py_weighted_centers(weights, data)),
    ]
    for name, compiled, pure in cases:
        a, b = compiled(), pure()
        first = a[0] if isinstance(a, tuple) else a
        second = b[0] if isinstance(b, tuple) else b
        assert np.allclose(first, second, atol=1e-12), name
        t_c = _time(compiled, reps)
        t_p = _time(pure, reps)
        rows.append((name, n, t_c, t_p))
    return rows


def bench_full_run(n, d, reps):
    rng = np.random.default_rng(1)
    data = rng.standard_normal((n, d))
    config = clustering.FcmConfig(c=3, seed=0)

    import importlib
    import os

    def compiled():
        clustering.fcm_type2(data, config)

    t_c = _time(compiled, reps)

    os.environ["IT2FCM_FORCE_PY"] = "1"
    try:
        importlib.reload(kernels)
        assert kernels.BACKEND == "python"
        t_p = _time(compiled, reps)
    finally:
        del os.environ["IT2FCM_FORCE_PY"]
        importlib.reload(kernels)
    return [("fcm_type2 (full run)", n, t_c, t_p)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[1000, 4000])
    parser.add_argument("--dims", type=int, default=8)
    parser.add_argument("--clusters", type=int, default=3)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    rows = []
    for n in args.sizes:
        rows += bench_size(n, args.dims, args.clusters, args.reps)
        rows += bench_full_run(n, args.dims, args.reps)

    header = (f"{'kernel':<28} {'n':>6} {'compiled (s)':>13} "
              f"{'python (s)':>12} {'speedup':>8}")
    print(header)
    print("-" * len(header))
    for name, n, t_c, t_p in rows:
        print(f"{name:<28} {n:>6} {t_c:>13.6f} {t_p:>12.6f} "
              f"{t_p / t_c:>7.2f}x")


if __name__ == "__main__":
    main()
