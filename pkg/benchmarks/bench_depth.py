#!/usr/bin/env python3
"""Benchmark the depth-count kernels: numba @njit vs the pure-numpy fallback.

The block kernel is the hot path of every depth/summary pipeline (one
member-set per grid location). Run:

    python benchmarks/bench_depth.py [--locations N] [--members M] [--repeat R]

The numba timings exclude JIT compilation (warmed up first, and cached on
disk after the first ever run). Both paths are checked for exact integer
agreement before timing.
"""

import argparse
import time

import numpy as np

from vecuq import _kernels
from vecuq.spherical import cartesian_to_spherical


def make_block(locations: int, members: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return cartesian_to_spherical(rng.normal(size=(locations, members, 3)))


def timeit(fn, block, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(block)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--locations", type=int, default=4000)
    parser.add_argument("--members", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    block = make_block(args.locations, args.members)
    print(f"block: {args.locations} locations x {args.members} members")
    print(f"active backend: {_kernels.BACKEND}")

    np_counts = _kernels.np_counts_for_block(block)
    rows = [("numpy", _kernels.np_counts_for_block)]
    if _kernels.HAVE_NUMBA:
        _kernels.warmup()
        nb_counts = _kernels.nb_counts_for_block(block)
        assert np.array_equal(nb_counts, np_counts), "backends disagree"
        rows.append(("numba", _kernels.nb_counts_for_block))
        print("backends agree exactly on this block")
    else:
        print("numba unavailable or disabled (VECUQ_NO_NUMBA); timing numpy only")

    timings = {}
    for name, fn in rows:
        timings[name] = timeit(fn, block, args.repeat)
        per_loc = timings[name] / args.locations * 1e6
        print(f"{name:>6}: {timings[name] * 1000:8.1f} ms   ({per_loc:6.2f} us/location)")
    if len(timings) == 2:
        print(f"speedup: {timings['numpy'] / timings['numba']:.1f}x (numba over numpy)")


if __name__ == "__main__":
    main()
