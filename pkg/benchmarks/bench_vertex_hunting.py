#!/usr/bin/env python3
"""Time the clustering kernels: compiled extension vs numpy fallback.

Runs assign_points and accumulate_clusters on synthetic embedding rows for
each available backend, then times a full kmeans call with the backend that
specmix actually imported. Use SPECMIX_PURE_PYTHON=1 to force the fallback
for the end-to-end number.
"""
import argparse
import time

import numpy as np

from specmix._kernels import BACKEND, _vhcore_py
from specmix.vertex_hunting import kmeans

try:
    from specmix._kernels import _vhcore
except ImportError:
    _vhcore = None

BACKENDS = [("python", _vhcore_py)] + ([("cython", _vhcore)] if _vhcore else [])


def best_of(repeats, fn):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(n, k, dims, repeats, rng):
    rows = np.ascontiguousarray(rng.standard_normal((n, dims)))
    centers = np.ascontiguousarray(rng.standard_normal((k, dims)))
    labels = rng.integers(0, k, size=n).astype(np.int64)
    out = {}
    for name, module in BACKENDS:
        assign = best_of(repeats, lambda m=module: m.assign_points(rows, centers, False))
        accumulate = best_of(repeats, lambda m=module: m.accumulate_clusters(rows, labels, k))
        out[name] = (assign, accumulate)
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, nargs="+", default=[500, 5000, 50000])
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--dims", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"active backend: {BACKEND}")
    print(f"{'n':>8} {'kernel':<12} " + " ".join(f"{name:>12}" for name, _ in BACKENDS) + "  speedup")
    for n in args.rows:
        timings = bench_kernels(n, args.k, args.dims, args.repeats, rng)
        for idx, kernel in enumerate(("assign", "accumulate")):
            cells = " ".join(f"{timings[name][idx] * 1e6:>10.1f}us" for name, _ in BACKENDS)
            if _vhcore:
                ratio = timings["python"][idx] / timings["cython"][idx]
                cells += f"  {ratio:6.2f}x"
            print(f"{n:>8} {kernel:<12} {cells}")

    rows = np.ascontiguousarray(rng.standard_normal((args.rows[-1], args.dims)))
    elapsed = best_of(3, lambda: kmeans(rows, args.k, seed=0, restarts=10))
    print(f"\nkmeans n={args.rows[-1]} k={args.k} restarts=10 ({BACKEND}): {elapsed * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
