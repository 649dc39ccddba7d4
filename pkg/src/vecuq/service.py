"""Payload builders shared by the CLI and the HTTP API.

The byte-stability contract (CLI JSON export == API response for the
same parameters) holds because both sides call these functions and the
canonical JSON writer; nothing here depends on transport.
"""

from __future__ import annotations

import numpy as np

from .analysis import depth_heatmap, point_detail, point_record
from .field import EnsembleField, GridIndex, Region
from .glyphs import GlyphStyle, build_scene, normalize_scene, scene_payload
from .jsonutil import canonical_json
from .summary import (
    magvar_series,
    magvar_slice,
    summarize_field,
    summarize_region,
    summary_record,
)


def field_summaries(field: EnsembleField, t: int):
    """Full-extent summaries at one time step; cache key material upstream."""
    field.check_time(t)
    return summarize_field(field, t)


def glyph_scene_payload(
    field: EnsembleField,
    t: int,
    kind: str = "squid",
    region: Region | None = None,
    exponent: float = 2.5,
    segments: int = 48,
    user_scale: float = 1.0,
    full_summaries=None,
) -> bytes:
    """Scene JSON for a region (or the full extent).

    Normalization always runs over the full field at t so global and
    region views share one scale; `full_summaries` short-circuits the
    full-extent computation when a cache already holds it.
    """
    if full_summaries is None:
        full_summaries = field_summaries(field, t)
    full_locs, full_sums = full_summaries
    scale = normalize_scene(full_sums, min(field.spacing), user_scale)
    style = GlyphStyle(kind=kind, exponent=exponent, segments=segments, scale=scale)

    if region is None:
        locs, sums = full_locs, full_sums
    else:
        locs, sums = summarize_region(field, region, t)
    origins = np.array([field.world_position(i, j, k) for i, j, k in locs]).reshape(-1, 3)
    scene = build_scene(field.name, t, locs, origins, sums, style)
    return scene_payload(scene)


def glyph_scene(
    field: EnsembleField,
    t: int,
    kind: str = "squid",
    region: Region | None = None,
    exponent: float = 2.5,
    segments: int = 48,
    user_scale: float = 1.0,
):
    """Scene object (for OBJ export); same construction as the payload."""
    full_locs, full_sums = field_summaries(field, t)
    scale = normalize_scene(full_sums, min(field.spacing), user_scale)
    style = GlyphStyle(kind=kind, exponent=exponent, segments=segments, scale=scale)
    if region is None:
        locs, sums = full_locs, full_sums
    else:
        locs, sums = summarize_region(field, region, t)
    origins = np.array([field.world_position(i, j, k) for i, j, k in locs]).reshape(-1, 3)
    return build_scene(field.name, t, locs, origins, sums, style)


def depth_payload(field: EnsembleField, t: int, region: Region | None = None) -> bytes:
    matrix = depth_heatmap(field, region or field.full_region(), t)
    doc = {
        "dataset": field.name,
        "t": int(t),
        "locations": [[int(c) for c in loc] for loc in matrix.locations],
        "members": list(range(field.n_members)),
        "depth": [[float(v) for v in row] for row in matrix.values],
        "counts": [[int(c) for c in row] for row in matrix.counts],
    }
    return canonical_json(doc)


def point_payload(field: EnsembleField, idx: GridIndex, outliers: int = 0) -> bytes:
    details, full, retained = point_detail(field, idx, outliers)
    doc = {
        "dataset": field.name,
        "t": int(idx.t),
        "location": [idx.i, idx.j, idx.k],
        "outliers": int(outliers),
        "details": point_record(details),
        "summary_full": summary_record(full),
        "summary_retained": summary_record(retained),
    }
    return canonical_json(doc)


def magvar_payload(field: EnsembleField, t: int | None = None) -> bytes:
    doc: dict = {
        "dataset": field.name,
        "series": [float(v) for v in magvar_series(field)],
    }
    if t is not None:
        field.check_time(t)
        doc["t"] = int(t)
        doc["slice"] = [float(v) for v in magvar_slice(field, t)]
        from .field import region_locations

        doc["locations"] = [
            [int(c) for c in loc] for loc in region_locations(field.full_region())
        ]
    return canonical_json(doc)


def datasets_payload(fields: dict[str, EnsembleField]) -> bytes:
    docs = []
    for ds_id in sorted(fields):
        f = fields[ds_id]
        docs.append(
            {
                "id": ds_id,
                "name": f.name,
                "dims": list(f.dims),
                "nt": f.nt,
                "n_members": f.n_members,
                "spacing": [float(s) for s in f.spacing],
                "origin": [float(o) for o in f.origin],
            }
        )
    return canonical_json(docs)
