"""Per-point distribution detail and region depth heatmaps.

Backs the detail views: per-member (magnitude, angle-to-median, depth)
triplets with outlier flags, plus paired summaries with and without the
flagged members, and the locations x members depth matrix for a region.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import depth as depth_mod
from .errors import UsageError
from .field import EnsembleField, GridIndex, Region, slice_region
from .spherical import cartesian_to_spherical
from .summary import UncertaintySummary, _angles_to, summarize


@dataclass(frozen=True)
class PointDetail:
    member_index: int
    magnitude: float
    angle_to_median: float
    depth: float
    is_outlier_candidate: bool


def point_detail(
    field: EnsembleField, idx: GridIndex, k_outliers: int = 0
) -> tuple[list[PointDetail], UncertaintySummary, UncertaintySummary]:
    """Member records plus (full, outliers-removed) summary pair.

    The flagged members are exactly the k lowest-depth ones under the
    removal tie rule; the retained summary is recomputed on the survivors.
    """
    members = field.members_at(idx).astype(np.float64)
    n = members.shape[0]
    if k_outliers < 0 or n - k_outliers < depth_mod.MIN_MEMBERS:
        raise UsageError(
            f"k_outliers must leave at least {depth_mod.MIN_MEMBERS} members "
            f"(n={n}, k={k_outliers})"
        )

    sph = cartesian_to_spherical(members)
    res = depth_mod.depth_all_members(sph)
    full = summarize(members, depth_result=res)

    mags = np.linalg.norm(members, axis=1)
    if np.linalg.norm(full.median_dir) > 0:
        angles = _angles_to(members, full.median_dir)
    else:
        angles = np.zeros(n)

    flagged = set(depth_mod.removal_order(res)[:k_outliers].tolist())
    details = [
        PointDetail(
            member_index=m,
            magnitude=float(mags[m]),
            angle_to_median=float(angles[m]),
            depth=float(res.values[m]),
            is_outlier_candidate=m in flagged,
        )
        for m in range(n)
    ]

    if k_outliers == 0:
        retained = full
    else:
        keep = np.setdiff1d(np.arange(n), np.fromiter(flagged, dtype=int))
        retained = summarize(members[keep])
    return details, full, retained


def depth_heatmap(field: EnsembleField, region: Region, t: int) -> depth_mod.DepthMatrix:
    """Depth of every member at every region location, rows in scan order."""
    view = slice_region(field, region, t)
    sph = cartesian_to_spherical(view.vectors.astype(np.float64))
    counts, values = depth_mod.depth_block(sph)
    return depth_mod.DepthMatrix(locations=view.locations, t=t, counts=counts, values=values)


POINT_CSV_FIELDS = ["member", "magnitude", "angle_to_median", "depth", "is_outlier_candidate"]


def write_point_csv(details: list[PointDetail], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(POINT_CSV_FIELDS)
        for d in details:
            writer.writerow(
                [
                    d.member_index,
                    repr(d.magnitude),
                    repr(d.angle_to_median),
                    repr(d.depth),
                    int(d.is_outlier_candidate),
                ]
            )


def point_record(details: list[PointDetail]) -> list[dict]:
    return [
        {
            "member_index": d.member_index,
            "magnitude": d.magnitude,
            "angle_to_median": d.angle_to_median,
            "depth": d.depth,
            "is_outlier_candidate": d.is_outlier_candidate,
        }
        for d in details
    ]
