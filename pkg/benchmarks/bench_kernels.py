#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Runs the same workloads through ``electwit.kernels._fast`` (when built) and
``electwit.kernels._pure`` and prints a timing table. The tree workload also
cross-checks that both implementations return bit-identical node arrays.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from electwit.kernels import _pure

try:
    from electwit.kernels import _fast
except ImportError:
    _fast = None


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_tree(n: int, m: int, repeats: int):
    rng = np.random.default_rng(0)
    X = np.asfortranarray(rng.poisson(1.0, size=(n, m)).astype(np.float64))
    y = rng.integers(0, 2, n).astype(np.int8)
    w = np.ones(n)
    args = (X, y, w, -1, max(1, int(np.sqrt(m))), 12345)

    results = {}
    pure_nodes = _pure.build_tree(*args)
    results["python"] = _time(lambda: _pure.build_tree(*args), repeats)
    if _fast is not None:
        fast_nodes = _fast.build_tree(*args)
        for a, b in zip(pure_nodes, fast_nodes):
            assert np.array_equal(a, b), "compiled and fallback trees diverged"
        results["compiled"] = _time(lambda: _fast.build_tree(*args), repeats)
    return results, len(pure_nodes[0])


def bench_smo(n: int, repeats: int):
    rng = np.random.default_rng(1)
    X = np.vstack([rng.normal(0, 1, (n // 2, 10)), rng.normal(1.5, 1, (n - n // 2, 10))])
    y = np.hstack([-np.ones(n // 2), np.ones(n - n // 2)])
    sq = (X**2).sum(1)
    K = np.exp(-0.1 * np.maximum(sq[:, None] + sq[None, :] - 2 * X @ X.T, 0))

    def run(mod):
        alpha = np.zeros(n)
        b, state = 0.0, 7
        for _ in range(5):
            _, b, state = mod.smo_epoch(K, y, alpha, b, 1.0, 1e-3, state)

    results = {"python": _time(lambda: run(_pure), repeats)}
    if _fast is not None:
        results["compiled"] = _time(lambda: run(_fast), repeats)
    return results


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    if _fast is None:
        print("compiled extension not built; timing the fallback only\n")

    tree_n, tree_m = (800, 40) if args.quick else (4000, 120)
    smo_n = 400 if args.quick else 1500
    repeats = 3

    print(f"CART tree build ({tree_n} x {tree_m}, sqrt-feature subsampling, full depth)")
    tree_res, n_nodes = bench_tree(tree_n, tree_m, repeats)
    for name, secs in tree_res.items():
        print(f"  {name:9s} {secs * 1e3:9.1f} ms   ({n_nodes} nodes)")
    if "compiled" in tree_res:
        print(f"  speedup   {tree_res['python'] / tree_res['compiled']:9.1f} x (bit-identical output)")

    print(f"\nSMO sweeps (5 epochs over {smo_n} samples, precomputed RBF kernel)")
    smo_res = bench_smo(smo_n, repeats)
    for name, secs in smo_res.items():
        print(f"  {name:9s} {secs * 1e3:9.1f} ms")
    if "compiled" in smo_res:
        print(f"  speedup   {smo_res['python'] / smo_res['compiled']:9.1f} x")


if __name__ == "__main__":
    main()
