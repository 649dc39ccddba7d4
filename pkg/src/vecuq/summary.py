"""Per-location uncertainty summaries feeding glyph geometry.

For one set of member vectors the summary holds the depth-median
direction, magnitude band [h, h+delta_h], the directional apex angle
alpha0 (twice the maximum angular deviation from the median), and the
anisotropic spread frame (sigma0, sigma1) of member-ray intersections
with the plane orthogonal to the median at distance h+delta_h. Base
semi-axes follow

    r0 = (h + delta_h) * tan(alpha0 / 2)
    r1 = r0 * |sigma1| / |sigma0|
    alpha1 = arctan((h + delta_h) / r1)

Members at >= 90 degrees from the median cannot hit the tip plane; they
are excluded from the spread fit and reported in `clipped_members`, and
alpha0 is clamped just below pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import depth as depth_mod
from .errors import DegenerateError, UsageError
from .field import EnsembleField, Region, slice_region
from .spherical import cartesian_to_spherical

INTERSECT_EPS = 1e-6
ALPHA0_MAX = math.pi - 1e-3

ZERO_MEDIAN = "zero-median"
ZERO_SPREAD = "zero-spread"


@dataclass(frozen=True)
class UncertaintySummary:
    median_index: int
    median_dir: np.ndarray  # unit 3-vector ((0,0,0) when zero-median)
    h: float
    delta_h: float
    alpha0: float
    sigma0: np.ndarray  # 3-vector, |sigma0| = first principal std
    sigma1: np.ndarray
    r0: float
    r1: float
    alpha1: float
    flags: tuple[str, ...]
    clipped_members: int

    @property
    def degenerate(self) -> bool:
        return ZERO_MEDIAN in self.flags

    @property
    def max_magnitude(self) -> float:
        return self.h + self.delta_h


def magnitude_stats(members: np.ndarray) -> tuple[float, float, int]:
    """(min magnitude, magnitude range, argmax index) of a member set."""
    members = np.asarray(members, dtype=np.float64)
    if members.ndim != 2 or members.shape[0] < 1 or members.shape[1] != 3:
        raise UsageError(f"expected non-empty (n, 3) members, got shape {members.shape}")
    mags = np.linalg.norm(members, axis=1)
    h = float(mags.min())
    return h, float(mags.max() - h), int(np.argmax(mags))


def _angles_to(members: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Angle of each member to a unit direction; zero members get 0."""
    dots = members @ direction
    crosses = np.linalg.norm(np.cross(members, direction[None, :]), axis=1)
    ang = np.arctan2(crosses, dots)
    return np.where(np.linalg.norm(members, axis=1) > 0.0, ang, 0.0)


def max_angular_deviation(members: np.ndarray, median_dir: np.ndarray) -> tuple[float, int]:
    """Full apex angle 2*max angle(member, median) over nonzero members,
    clamped below pi, plus the count of members clipped by the tip plane."""
    members = np.asarray(members, dtype=np.float64)
    median_dir = np.asarray(median_dir, dtype=np.float64)
    mags = np.linalg.norm(members, axis=1)
    nonzero = mags > 0.0
    if not nonzero.any():
        raise DegenerateError("all members are zero vectors")
    angles = _angles_to(members[nonzero], median_dir)
    alpha0 = min(2.0 * float(angles.max()), ALPHA0_MAX)
    clipped = int(np.count_nonzero(members @ median_dir <= INTERSECT_EPS * mags))
    return alpha0, clipped


def plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal in-plane basis for a unit normal.

    e1 projects out the global axis least aligned with the normal
    (lowest index on ties); e2 = normal x e1.
    """
    axis = int(np.argmin(np.abs(normal)))
    a = np.zeros(3)
    a[axis] = 1.0
    e1 = a - (a @ normal) * normal
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return e1, e2


def plane_intersections(
    members: np.ndarray, median: np.ndarray, max_magnitude: float
) -> tuple[np.ndarray, int, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Intersect member rays with the plane orthogonal to the median at its
    scaled tip; returns in-plane 2D offsets, clipped count, and (e1, e2, n)."""
    members = np.asarray(members, dtype=np.float64)
    median = np.asarray(median, dtype=np.float64)
    mnorm = np.linalg.norm(median)
    if mnorm == 0.0:
        raise DegenerateError("median vector is zero")
    if max_magnitude <= 0.0:
        raise DegenerateError("plane distance must be positive")
    normal = median / mnorm
    e1, e2 = plane_basis(normal)

    mags = np.linalg.norm(members, axis=1)
    dots = members @ normal
    hits = dots > INTERSECT_EPS * mags
    clipped = int(np.count_nonzero(~hits))
    vh = members[hits]
    scale = max_magnitude / (vh @ normal)
    pts3 = scale[:, None] * vh - max_magnitude * normal[None, :]
    pts2 = np.stack([pts3 @ e1, pts3 @ e2], axis=1)
    return pts2, clipped, (e1, e2, normal)


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    for c in v:
        if c != 0.0:
            return v if c > 0.0 else -v
    return v


def principal_spread(points: np.ndarray) -> tuple[float, float, np.ndarray, bool]:
    """(sigma0, sigma1, first axis, degenerate-fallback flag) of 2D points.

    Covariance uses divisor n about the mean; axis sign is canonicalized
    (first nonzero component positive). Fewer than 2 points fall back to
    an isotropic zero spread.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        points = points.reshape(-1, 2)
    if points.shape[0] < 2:
        return 0.0, 0.0, np.array([1.0, 0.0]), True
    if np.ptp(points, axis=0).max() == 0.0:
        return 0.0, 0.0, np.array([1.0, 0.0]), False
    centered = points - points.mean(axis=0)
    cov = centered.T @ centered / points.shape[0]
    evals, evecs = np.linalg.eigh(cov)
    s0 = math.sqrt(max(float(evals[1]), 0.0))
    s1 = math.sqrt(max(float(evals[0]), 0.0))
    axis0 = _canonical_sign(evecs[:, 1].copy())
    return s0, s1, axis0, False


def _zero_median_summary(median_index: int, h: float, delta_h: float) -> UncertaintySummary:
    zero = np.zeros(3)
    return UncertaintySummary(
        median_index=median_index,
        median_dir=zero,
        h=h,
        delta_h=delta_h,
        alpha0=0.0,
        sigma0=zero,
        sigma1=zero,
        r0=0.0,
        r1=0.0,
        alpha1=0.0,
        flags=(ZERO_MEDIAN,),
        clipped_members=0,
    )


def summarize(
    members: np.ndarray, depth_result: depth_mod.DepthResult | None = None
) -> UncertaintySummary:
    """Full per-location summary of a (n >= 5, 3) cartesian member set."""
    members = np.asarray(members, dtype=np.float64)
    if depth_result is None:
        depth_result = depth_mod.depth_all_members(cartesian_to_spherical(members))
    median_index = depth_result.median_index
    h, delta_h, _ = magnitude_stats(members)

    median = members[median_index]
    mnorm = np.linalg.norm(median)
    if mnorm == 0.0 or h + delta_h <= 0.0:
        return _zero_median_summary(median_index, h, delta_h)
    median_dir = median / mnorm

    alpha0, _ = max_angular_deviation(members, median_dir)
    pts2, clipped, (e1, e2, _) = plane_intersections(members, median, h + delta_h)
    s0, s1, axis0, fallback = principal_spread(pts2)

    flags: tuple[str, ...] = ()
    if fallback or s0 == 0.0:
        flags = (ZERO_SPREAD,)
        ratio = 1.0
        axis0 = np.array([1.0, 0.0])
        s1 = s0
    else:
        ratio = s1 / s0

    r0 = (h + delta_h) * math.tan(0.5 * alpha0)
    r1 = r0 * ratio
    alpha1 = math.atan2(h + delta_h, r1)

    axis1 = _canonical_sign(np.array([-axis0[1], axis0[0]]))
    sigma0 = s0 * (axis0[0] * e1 + axis0[1] * e2)
    sigma1 = s1 * (axis1[0] * e1 + axis1[1] * e2)

    return UncertaintySummary(
        median_index=median_index,
        median_dir=median_dir,
        h=h,
        delta_h=delta_h,
        alpha0=alpha0,
        sigma0=sigma0,
        sigma1=sigma1,
        r0=r0,
        r1=r1,
        alpha1=alpha1,
        flags=flags,
        clipped_members=clipped,
    )


def summarize_region(
    field: EnsembleField, region: Region, t: int
) -> tuple[np.ndarray, list[UncertaintySummary]]:
    """Summaries for every location of a region; depth runs on the block
    kernel, per-location assembly follows in scan order."""
    view = slice_region(field, region, t)
    members_block = view.vectors.astype(np.float64)
    sph_block = cartesian_to_spherical(members_block)
    counts, values = depth_mod.depth_block(sph_block)
    summaries = []
    for li in range(members_block.shape[0]):
        res = depth_mod.DepthResult(
            counts=counts[li], values=values[li], median_index=int(np.argmax(values[li]))
        )
        summaries.append(summarize(members_block[li], depth_result=res))
    return view.locations, summaries


def summarize_field(field: EnsembleField, t: int) -> tuple[np.ndarray, list[UncertaintySummary]]:
    return summarize_region(field, field.full_region(), t)


def magvar_series(field: EnsembleField) -> np.ndarray:
    """Per-time maximum magnitude range over all locations, (nt,)."""
    mags = np.linalg.norm(field.data.astype(np.float64), axis=-1)
    delta = mags.max(axis=1) - mags.min(axis=1)  # (nt, nz, ny, nx)
    return delta.reshape(field.nt, -1).max(axis=1)


def magvar_slice(field: EnsembleField, t: int) -> np.ndarray:
    """Magnitude range at every location for one time step, scan order."""
    field.check_time(t)
    mags = np.linalg.norm(field.data[t].astype(np.float64), axis=-1)
    return (mags.max(axis=0) - mags.min(axis=0)).ravel()


# --- export records -------------------------------------------------------


def summary_record(s: UncertaintySummary, location=None) -> dict:
    """JSON-ready record; field names match the summary type."""
    rec = {}
    if location is not None:
        rec["location"] = [int(c) for c in location]
    rec.update(
        {
            "median_index": int(s.median_index),
            "median_dir": [float(c) for c in s.median_dir],
            "h": float(s.h),
            "delta_h": float(s.delta_h),
            "alpha0": float(s.alpha0),
            "sigma0": [float(c) for c in s.sigma0],
            "sigma1": [float(c) for c in s.sigma1],
            "r0": float(s.r0),
            "r1": float(s.r1),
            "alpha1": float(s.alpha1),
            "degenerate": {
                "zero_median": ZERO_MEDIAN in s.flags,
                "zero_spread": ZERO_SPREAD in s.flags,
                "clipped_members": int(s.clipped_members),
            },
        }
    )
    return rec


SUMMARY_CSV_FIELDS = [
    "location",
    "median_index",
    "median_dir_x",
    "median_dir_y",
    "median_dir_z",
    "h",
    "delta_h",
    "alpha0",
    "sigma0_x",
    "sigma0_y",
    "sigma0_z",
    "sigma1_x",
    "sigma1_y",
    "sigma1_z",
    "r0",
    "r1",
    "alpha1",
    "degenerate_zero_median",
    "degenerate_zero_spread",
    "clipped_members",
]


def summary_csv_row(s: UncertaintySummary, location) -> list:
    return [
        f"{location[0]}:{location[1]}:{location[2]}",
        int(s.median_index),
        *[repr(float(c)) for c in s.median_dir],
        repr(float(s.h)),
        repr(float(s.delta_h)),
        repr(float(s.alpha0)),
        *[repr(float(c)) for c in s.sigma0],
        *[repr(float(c)) for c in s.sigma1],
        repr(float(s.r0)),
        repr(float(s.r1)),
        repr(float(s.alpha1)),
        int(ZERO_MEDIAN in s.flags),
        int(ZERO_SPREAD in s.flags),
        int(s.clipped_members),
    ]
