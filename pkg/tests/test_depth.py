from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests.conftest import DEVIANT_INDEX
from vecuq import _kernels
from vecuq.depth import (
    depth_all_members,
    depth_block,
    filter_outliers,
    removal_order,
    vector_depth_bruteforce,
    vector_depth_fast,
)
from vecuq.errors import UsageError
from vecuq.spherical import cartesian_to_spherical


def random_spherical(rng, n):
    return cartesian_to_spherical(rng.normal(size=(n, 3)))


def collinear_five():
    # five members along one ray, magnitudes 1..5
    return np.array([[r, 0.3, 0.7] for r in (1.0, 2.0, 3.0, 4.0, 5.0)])


def test_collinear_middle_depth_one():
    sph = collinear_five()
    count, value = vector_depth_bruteforce(sph, sph[2])
    assert (count, value) == (5, 1.0)
    assert vector_depth_fast(sph, sph[2]) == (5, 1.0)


def test_collinear_extreme_four_fifths():
    sph = collinear_five()
    assert vector_depth_bruteforce(sph, sph[0]) == (4, 0.8)
    assert vector_depth_fast(sph, sph[0]) == (4, 0.8)


def test_outside_global_box_zero():
    sph = collinear_five()
    outside = np.array([10.0, 0.3, 0.7])
    assert vector_depth_bruteforce(sph, outside)[0] == 0
    assert vector_depth_fast(sph, outside)[0] == 0


def test_all_identical_depth_one():
    sph = np.tile(np.array([1.0, 0.5, 0.5]), (6, 1))
    count, value = vector_depth_fast(sph, sph[0])
    assert value == 1.0


def test_min_members_enforced():
    sph = collinear_five()[:4]
    with pytest.raises(UsageError):
        vector_depth_fast(sph, sph[0])
    with pytest.raises(UsageError):
        vector_depth_bruteforce(sph, sph[0])


def test_fast_equals_bruteforce_members_and_offset_queries():
    rng = np.random.default_rng(42)
    for _ in range(30):
        n = int(rng.integers(5, 13))
        sph = random_spherical(rng, n)
        for i in range(n):
            assert vector_depth_fast(sph, sph[i]) == vector_depth_bruteforce(sph, sph[i])
        q = random_spherical(rng, 1)[0]
        assert vector_depth_fast(sph, q) == vector_depth_bruteforce(sph, q)


def test_fast_equals_bruteforce_with_ties():
    rng = np.random.default_rng(11)
    for _ in range(20):
        # quantized coordinates force many exact ties across members
        sph = np.abs(rng.integers(0, 3, size=(8, 3))).astype(float) * 0.5
        for i in range(8):
            assert vector_depth_fast(sph, sph[i]) == vector_depth_bruteforce(sph, sph[i])


def test_backend_paths_agree():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n = int(rng.integers(5, 15))
        sph = random_spherical(rng, n)
        assert np.array_equal(
            _kernels.counts_for_members(sph), _kernels.np_counts_for_members(sph)
        )
    block = random_spherical(rng, 60).reshape(10, 6, 3)
    assert np.array_equal(_kernels.counts_for_block(block), _kernels.np_counts_for_block(block))


def test_member_depth_floor_exact():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(5, 12))
        res = depth_all_members(random_spherical(rng, n))
        assert int(res.counts.min()) >= comb(n - 1, 3)
        assert res.values.max() <= 1.0


def test_depth_all_members_symmetric_center():
    # center of a 7-member star (center +- one offset per coordinate,
    # symmetric in the spherical domain) attains the maximum depth
    center = np.array([2.0, 1.5, 0.3])
    sph = np.vstack(
        [
            center,
            center + [0.3, 0, 0],
            center - [0.3, 0, 0],
            center + [0, 0.2, 0],
            center - [0, 0.2, 0],
            center + [0, 0, 0.25],
            center - [0, 0, 0.25],
        ]
    )
    res = depth_all_members(sph)
    brute = [vector_depth_bruteforce(sph, sph[i])[0] for i in range(7)]
    assert list(res.counts) == brute
    assert res.median_index == 0
    assert res.counts[0] == max(brute)
    assert all(res.counts[0] > c for c in brute[1:])


def test_median_tie_breaks_low_index():
    sph = np.tile(np.array([1.0, 0.5, 0.5]), (6, 1))
    assert depth_all_members(sph).median_index == 0


def test_permutation_equivariance():
    rng = np.random.default_rng(21)
    sph = random_spherical(rng, 9)
    res = depth_all_members(sph)
    perm = rng.permutation(9)
    res_p = depth_all_members(sph[perm])
    assert np.array_equal(res_p.counts, res.counts[perm])


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_monotone_map_invariance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 10))
    sph = random_spherical(rng, n)
    base = depth_all_members(sph).counts
    mapped = sph.copy()
    for col in range(3):
        a = float(rng.uniform(0.5, 2.0))
        b = float(rng.uniform(-0.5, 0.5))
        mapped[:, col] = a * mapped[:, col] + b
    assert np.array_equal(depth_all_members(mapped).counts, base)


def test_depth_block_matches_per_set():
    rng = np.random.default_rng(31)
    block = random_spherical(rng, 48).reshape(8, 6, 3)
    counts, values = depth_block(block)
    for li in range(8):
        res = depth_all_members(block[li])
        assert np.array_equal(counts[li], res.counts)
        assert np.array_equal(values[li], res.values)


def test_filter_outliers_identity():
    rng = np.random.default_rng(1)
    sph = random_spherical(rng, 8)
    assert np.array_equal(filter_outliers(sph, 0), np.arange(8))


def test_filter_outliers_bounds():
    rng = np.random.default_rng(2)
    sph = random_spherical(rng, 7)
    with pytest.raises(UsageError):
        filter_outliers(sph, 3)
    with pytest.raises(UsageError):
        filter_outliers(sph, -1)


def test_filter_outliers_removes_planted_deviant(fig3_members):
    sph = cartesian_to_spherical(fig3_members)
    res = depth_all_members(sph)
    brute = np.array([vector_depth_bruteforce(sph, sph[i])[0] for i in range(10)])
    assert np.array_equal(res.counts, brute)
    # the deviant sits exactly on the member floor, everyone else above it
    assert res.counts[DEVIANT_INDEX] == comb(9, 3)
    others = np.delete(res.counts, DEVIANT_INDEX)
    assert (others > res.counts[DEVIANT_INDEX]).all()
    keep = filter_outliers(sph, 1)
    assert DEVIANT_INDEX not in keep
    assert len(keep) == 9


def test_filter_outliers_tie_removes_higher_index():
    # identical members: all depths tie, so removal starts from the top index
    sph = np.tile(np.array([2.0, 1.0, 0.5]), (7, 1))
    order = removal_order(depth_all_members(sph))
    assert list(order[:2]) == [6, 5]
    assert np.array_equal(filter_outliers(sph, 2), np.arange(5))
