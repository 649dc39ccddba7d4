"""Vector depth in spherical coordinates, median selection, outlier filtering.

The depth of x against members V is the fraction of size-4 subsets of V
whose closed per-axis bounding box in (r, theta, phi) space contains x.
Subsets containing x itself count. Azimuth is treated as a plain linear
coordinate on (-pi, pi]; no wrap-around.

`vector_depth_bruteforce` enumerates subsets and is the oracle;
`vector_depth_fast` uses the O(n) inclusion-exclusion kernel and must
agree exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import _kernels
from .errors import UsageError

MIN_MEMBERS = 5


@dataclass(frozen=True)
class DepthResult:
    """Per-member depth of one member set."""

    counts: np.ndarray  # (n,) int64 containing-subset counts
    values: np.ndarray  # (n,) float, counts / C(n,4)
    median_index: int  # argmax depth, lowest index on ties


@dataclass(frozen=True)
class DepthMatrix:
    """Depth of every member at every location of a region (heatmap backing)."""

    locations: np.ndarray  # (L, 3) int, rows of (i, j, k)
    t: int
    counts: np.ndarray  # (L, n) int64
    values: np.ndarray  # (L, n) float


def _check_members(sph: np.ndarray) -> np.ndarray:
    sph = np.asarray(sph, dtype=np.float64)
    if sph.ndim != 2 or sph.shape[1] != 3:
        raise UsageError(f"expected (n, 3) spherical triples, got shape {sph.shape}")
    if sph.shape[0] < MIN_MEMBERS:
        raise UsageError(f"need at least {MIN_MEMBERS} members, got {sph.shape[0]}")
    return sph


def _subset_boxes(sph: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis (lo, hi) of every 4-member subset, each (C(n,4), 3)."""
    n = sph.shape[0]
    subsets = np.fromiter(
        (i for subset in combinations(range(n), 4) for i in subset), dtype=np.int64
    ).reshape(-1, 4)
    corners = sph[subsets]
    return corners.min(axis=1), corners.max(axis=1)


def vector_depth_bruteforce(sph, query) -> tuple[int, float]:
    """Exact depth of `query` by enumerating all C(n,4) subsets."""
    sph = _check_members(sph)
    q = np.asarray(query, dtype=np.float64).reshape(3)
    lo, hi = _subset_boxes(sph)
    count = int(np.count_nonzero(np.all((lo <= q) & (q <= hi), axis=1)))
    return count, count / comb(sph.shape[0], 4)


def vector_depth_fast(sph, query) -> tuple[int, float]:
    """Depth of `query` via inclusion-exclusion; equals the brute force exactly."""
    sph = _check_members(sph)
    q = np.asarray(query, dtype=np.float64).reshape(3)
    count = _kernels.count_for_query(sph, q)
    return count, count / comb(sph.shape[0], 4)


def depth_all_members(sph) -> DepthResult:
    """Depth of every member against its own set; median = argmax."""
    sph = _check_members(sph)
    counts = np.asarray(_kernels.counts_for_members(sph), dtype=np.int64)
    values = counts / comb(sph.shape[0], 4)
    return DepthResult(counts=counts, values=values, median_index=int(np.argmax(values)))


def depth_block(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Member depth counts and values for a (L, n, 3) spherical block."""
    block = np.ascontiguousarray(block, dtype=np.float64)
    if block.ndim != 3 or block.shape[2] != 3:
        raise UsageError(f"expected (L, n, 3) block, got shape {block.shape}")
    if block.shape[1] < MIN_MEMBERS:
        raise UsageError(f"need at least {MIN_MEMBERS} members, got {block.shape[1]}")
    counts = np.asarray(_kernels.counts_for_block(block), dtype=np.int64)
    return counts, counts / comb(block.shape[1], 4)


def removal_order(result: DepthResult) -> np.ndarray:
    """Member indices in outlier-removal priority: lowest depth first,
    higher index first on ties."""
    n = result.counts.shape[0]
    idx = np.arange(n)
    return idx[np.lexsort((-idx, result.counts))]


def filter_outliers(sph, k: int) -> np.ndarray:
    """Indices surviving removal of the k lowest-depth members, ascending."""
    sph = _check_members(sph)
    n = sph.shape[0]
    if not 0 <= k <= n - MIN_MEMBERS:
        raise UsageError(f"k must be in [0, {n - MIN_MEMBERS}], got {k}")
    if k == 0:
        return np.arange(n)
    removed = removal_order(depth_all_members(sph))[:k]
    keep = np.setdiff1d(np.arange(n), removed)
    return keep


def write_depth_csv(matrix: DepthMatrix, path) -> None:
    """Long-format export: one row per (location, member)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["location", "member", "depth", "count"])
        for li, loc in enumerate(matrix.locations):
            label = f"{loc[0]}:{loc[1]}:{loc[2]}"
            for m in range(matrix.values.shape[1]):
                writer.writerow(
                    [label, m, repr(float(matrix.values[li, m])), int(matrix.counts[li, m])]
                )


def write_heatmap_csv(matrix: DepthMatrix, path) -> None:
    """Grid export: locations x members, header row of member indices."""
    n = matrix.values.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["location"] + [str(m) for m in range(n)])
        for li, loc in enumerate(matrix.locations):
            label = f"{loc[0]}:{loc[1]}:{loc[2]}"
            writer.writerow([label] + [repr(float(v)) for v in matrix.values[li]])
