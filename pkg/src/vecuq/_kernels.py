"""Depth-counting kernels.

The depth of a query point x against n member triples is the number of
size-4 member subsets whose per-axis closed bounding box contains x.
Enumerating C(n,4) subsets is avoided with inclusion-exclusion: a subset
misses x iff on some axis all four members lie strictly on one side, so

    count(x) = sum over c in {none,-,+}^3 of (-1)^{#chosen} * C(|I_c|, 4)

where I_c intersects, per axis with a chosen side, the members strictly
on that side of x. Terms picking both sides of one axis are empty, which
leaves the 27 combinations below. Classification is O(n) per query.

Each member gets a base-3 signature (below/equal/above per axis); the 27
intersection sizes are read off a 27-bin histogram of signatures.

Two implementations are provided: numba @njit kernels (parallel over
locations) and a vectorized pure-numpy fallback. Selection: numpy when
the VECUQ_NO_NUMBA environment variable is set to a non-empty value or
numba is not importable, numba otherwise. `benchmarks/bench_depth.py`
compares the two.
"""

from __future__ import annotations

import os

import numpy as np


def _combo_tables() -> tuple[np.ndarray, np.ndarray]:
    # COMPAT[c, s] = 1 iff signature s is compatible with combination c;
    # SIGNS[c] = (-1)^(number of chosen sides in c).
    compat = np.zeros((27, 27), dtype=np.int64)
    signs = np.zeros(27, dtype=np.int64)
    for c in range(27):
        choice = (c // 9, (c // 3) % 3, c % 3)  # 0 none, 1 minus, 2 plus
        signs[c] = (-1) ** sum(1 for ck in choice if ck != 0)
        for s in range(27):
            digit = (s // 9, (s // 3) % 3, s % 3)  # 0 below, 1 equal, 2 above
            ok = True
            for k in range(3):
                if choice[k] == 1 and digit[k] != 0:
                    ok = False
                elif choice[k] == 2 and digit[k] != 2:
                    ok = False
            compat[c, s] = 1 if ok else 0
    return compat, signs


_COMPAT, _SIGNS = _combo_tables()


# --- pure numpy path ---------------------------------------------------


def _np_c4(m: np.ndarray) -> np.ndarray:
    m = m.astype(np.int64)
    out = m * (m - 1) * (m - 2) * (m - 3) // 24
    return np.where(m >= 4, out, 0)


def _np_signature_hist(sph: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Histogram of member signatures relative to each query, (nq, 27)."""
    d = (np.sign(sph[None, :, :] - queries[:, None, :]) + 1).astype(np.int64)
    s = d[..., 0] * 9 + d[..., 1] * 3 + d[..., 2]
    nq = queries.shape[0]
    hist = np.zeros((nq, 27), dtype=np.int64)
    np.add.at(hist, (np.arange(nq)[:, None], s), 1)
    return hist


def np_counts_for_members(sph: np.ndarray) -> np.ndarray:
    """Containing-subset count with each member as the query, (n,) int64."""
    hist = _np_signature_hist(sph, sph)
    inter = hist @ _COMPAT.T
    return (_SIGNS[None, :] * _np_c4(inter)).sum(axis=1)


def np_count_for_query(sph: np.ndarray, query: np.ndarray) -> int:
    hist = _np_signature_hist(sph, query.reshape(1, 3))
    inter = hist @ _COMPAT.T
    return int((_SIGNS[None, :] * _np_c4(inter)).sum())


def np_counts_for_block(block: np.ndarray) -> np.ndarray:
    """Per-location member counts for a (L, n, 3) block, (L, n) int64."""
    nloc, n = block.shape[0], block.shape[1]
    out = np.empty((nloc, n), dtype=np.int64)
    for li in range(nloc):
        out[li] = np_counts_for_members(block[li])
    return out


# --- numba path ---------------------------------------------------------

_env_disabled = bool(os.environ.get("VECUQ_NO_NUMBA", ""))

if not _env_disabled:
    try:
        import numba
        from numba import njit, prange
    except ImportError:  # pragma: no cover - exercised via env flag instead
        numba = None
else:
    numba = None

HAVE_NUMBA = numba is not None

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_count_from_hist(hist):
        total = np.int64(0)
        for c in range(27):
            m = np.int64(0)
            for s in range(27):
                if _COMPAT[c, s]:
                    m += hist[s]
            if m >= 4:
                total += _SIGNS[c] * (m * (m - 1) * (m - 2) * (m - 3) // 24)
        return total

    @njit(cache=True)
    def _nb_counts_for_members(sph):
        n = sph.shape[0]
        out = np.empty(n, dtype=np.int64)
        hist = np.empty(27, dtype=np.int64)
        for q in range(n):
            hist[:] = 0
            for i in range(n):
                s = 0
                for k in range(3):
                    a = sph[i, k]
                    b = sph[q, k]
                    if a < b:
                        d = 0
                    elif a > b:
                        d = 2
                    else:
                        d = 1
                    s = s * 3 + d
                hist[s] += 1
            out[q] = _nb_count_from_hist(hist)
        return out

    @njit(cache=True)
    def _nb_count_for_query(sph, query):
        n = sph.shape[0]
        hist = np.zeros(27, dtype=np.int64)
        for i in range(n):
            s = 0
            for k in range(3):
                a = sph[i, k]
                b = query[k]
                if a < b:
                    d = 0
                elif a > b:
                    d = 2
                else:
                    d = 1
                s = s * 3 + d
            hist[s] += 1
        return _nb_count_from_hist(hist)

    @njit(cache=True, parallel=True)
    def _nb_counts_for_block(block):
        nloc = block.shape[0]
        n = block.shape[1]
        out = np.empty((nloc, n), dtype=np.int64)
        for li in prange(nloc):
            out[li] = _nb_counts_for_members(block[li])
        return out

    def nb_counts_for_members(sph: np.ndarray) -> np.ndarray:
        return _nb_counts_for_members(np.ascontiguousarray(sph, dtype=np.float64))

    def nb_count_for_query(sph: np.ndarray, query: np.ndarray) -> int:
        return int(
            _nb_count_for_query(
                np.ascontiguousarray(sph, dtype=np.float64),
                np.ascontiguousarray(query, dtype=np.float64),
            )
        )

    def nb_counts_for_block(block: np.ndarray) -> np.ndarray:
        return _nb_counts_for_block(np.ascontiguousarray(block, dtype=np.float64))

    counts_for_members = nb_counts_for_members
    count_for_query = nb_count_for_query
    counts_for_block = nb_counts_for_block
    BACKEND = "numba"
else:
    counts_for_members = np_counts_for_members
    count_for_query = np_count_for_query
    counts_for_block = np_counts_for_block
    BACKEND = "numpy"


def set_thread_count(jobs: int | None) -> None:
    """Cap the worker threads used by the block kernel (numba path only)."""
    if jobs is None or not HAVE_NUMBA:
        return
    jobs = max(1, min(int(jobs), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(jobs)


def warmup() -> None:
    """Force JIT compilation (cached) so timed sections exclude it."""
    sph = np.zeros((5, 3), dtype=np.float64)
    counts_for_members(sph)
    count_for_query(sph, np.zeros(3))
    counts_for_block(sph.reshape(1, 5, 3))
