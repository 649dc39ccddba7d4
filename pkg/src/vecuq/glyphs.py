"""Procedural glyph meshes: squid, cone, comet, tailed-disc.

All glyphs grow along the summary's median direction with the apex at
the local origin; vertices are oriented in world axes but untranslated,
and the placement origin travels in the mesh transform. Cross-sections
are superellipses sampled in the (sigma0, sigma1) frame, so exponent 2
gives circles and higher exponents the rounded-square profile that
breaks rotational symmetry about the axis.

Each part (body 0 / head 1 / disc 2) is an independently closed surface:
every edge is shared by exactly two triangles of the part. Coincident
caps at part junctions sit inside the glyph.

Floors: a head or disc shorter than 0.02*scale is extended to that
length, and cross-section semi-axes that vanish are widened to
0.01*scale, so degenerate summaries still yield valid meshes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, UsageError
from .jsonutil import canonical_json
from .summary import UncertaintySummary, plane_basis, summary_record

PART_BODY = 0
PART_HEAD = 1
PART_DISC = 2

GLYPH_KINDS = ("squid", "cone", "comet", "tailed-disc")

LENGTH_FLOOR = 0.02  # of scene scale
RADIUS_FLOOR = 0.01
TINY = 1e-12

COMET_SHAFT_FRACTION = 0.25  # of r0
ARROW_SHAFT_RADIUS = 0.03  # of total arrow length
ARROW_HEAD_RADIUS = 0.08
ARROW_HEAD_FRACTION = 0.25


@dataclass(frozen=True)
class SuperellipseParams:
    a: float
    b: float
    exponent: float
    segments: int = 48

    def __post_init__(self):
        if self.exponent <= 0:
            raise UsageError(f"superellipse exponent must be > 0, got {self.exponent}")
        if self.segments < 8:
            raise UsageError(f"segments must be >= 8, got {self.segments}")


@dataclass(frozen=True)
class GlyphStyle:
    kind: str = "squid"
    exponent: float = 2.5
    segments: int = 48
    scale: float = 1.0
    tapered_body: bool = True

    def __post_init__(self):
        if self.kind not in GLYPH_KINDS:
            raise UsageError(f"unknown glyph kind {self.kind!r}, expected one of {GLYPH_KINDS}")
        if self.exponent <= 0:
            raise UsageError(f"superellipse exponent must be > 0, got {self.exponent}")
        if self.segments < 8:
            raise UsageError(f"segments must be >= 8, got {self.segments}")
        if self.scale <= 0:
            raise UsageError(f"scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class GlyphMesh:
    positions: np.ndarray  # (V, 3) float64, apex-local, world-oriented
    normals: np.ndarray  # (V, 3) float64 unit
    indices: np.ndarray  # (T, 3) int32
    part_ids: np.ndarray  # (T,) int32
    origin: np.ndarray  # (3,) world placement
    axes: np.ndarray  # (3, 3) rows (u0, u1, axis)


def superellipse_profile(params: SuperellipseParams, t) -> np.ndarray:
    """Point(s) on |x/a|^n + |y/b|^n = 1 at parameter t, shape (..., 2)."""
    t = np.asarray(t, dtype=np.float64)
    q = 2.0 / params.exponent
    c, s = np.cos(t), np.sin(t)
    x = params.a * np.sign(c) * np.abs(c) ** q
    y = params.b * np.sign(s) * np.abs(s) ** q
    return np.stack([x, y], axis=-1)


def _profile_unit(exponent: float, segments: int) -> np.ndarray:
    ts = np.linspace(0.0, 2.0 * math.pi, segments, endpoint=False)
    return superellipse_profile(SuperellipseParams(1.0, 1.0, exponent, segments), ts)


class _PartBuilder:
    """Accumulates one closed part; vertices shared across its surfaces."""

    def __init__(self, u0, u1, axis):
        self.u0, self.u1, self.axis = u0, u1, axis
        self.verts: list[np.ndarray] = []
        self.tris: list[tuple[int, int, int]] = []

    def vertex(self, p) -> int:
        self.verts.append(np.asarray(p, dtype=np.float64))
        return len(self.verts) - 1

    def ring(self, z: float, a: float, b: float, profile: np.ndarray) -> np.ndarray:
        center = z * self.axis
        pts = (
            center[None, :]
            + a * profile[:, 0:1] * self.u0[None, :]
            + b * profile[:, 1:2] * self.u1[None, :]
        )
        start = len(self.verts)
        self.verts.extend(pts)
        return np.arange(start, start + profile.shape[0])

    def _quad_strip(self, lo, hi):
        n = len(lo)
        for t in range(n):
            t2 = (t + 1) % n
            self.tris.append((lo[t], lo[t2], hi[t2]))
            self.tris.append((lo[t], hi[t2], hi[t]))

    def fan_from_below(self, apex: int, ring: np.ndarray):
        n = len(ring)
        for t in range(n):
            self.tris.append((apex, ring[(t + 1) % n], ring[t]))

    def fan_from_above(self, apex: int, ring: np.ndarray):
        n = len(ring)
        for t in range(n):
            self.tris.append((apex, ring[t], ring[(t + 1) % n]))

    def lateral(self, ring_lo: np.ndarray, ring_hi: np.ndarray):
        self._quad_strip(ring_lo, ring_hi)

    def cap_up(self, center: int, ring: np.ndarray):
        self.fan_from_above(center, ring)

    def cap_down(self, center: int, ring: np.ndarray):
        self.fan_from_below(center, ring)

    def finalize(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        pos = np.array(self.verts)
        tris = np.array(self.tris, dtype=np.int32)
        fn = np.cross(
            pos[tris[:, 1]] - pos[tris[:, 0]], pos[tris[:, 2]] - pos[tris[:, 0]]
        )  # area-weighted
        normals = np.zeros_like(pos)
        for c in range(3):
            np.add.at(normals, tris[:, c], fn)
        lens = np.linalg.norm(normals, axis=1, keepdims=True)
        fallback = np.broadcast_to(self.axis, normals.shape)
        normals = np.where(lens > TINY, normals / np.where(lens > TINY, lens, 1.0), fallback)
        return pos, normals, tris


class _MeshAccum:
    """Concatenates finalized parts into one labeled mesh."""

    def __init__(self, u0, u1, axis):
        self.u0, self.u1, self.axis = u0, u1, axis
        self.positions = []
        self.normals = []
        self.indices = []
        self.part_ids = []
        self._offset = 0

    def add_part(self, part: _PartBuilder, part_id: int):
        pos, nrm, tris = part.finalize()
        self.positions.append(pos)
        self.normals.append(nrm)
        self.indices.append(tris + self._offset)
        self.part_ids.append(np.full(len(tris), part_id, dtype=np.int32))
        self._offset += len(pos)

    def mesh(self, origin) -> GlyphMesh:
        return GlyphMesh(
            positions=np.concatenate(self.positions),
            normals=np.concatenate(self.normals),
            indices=np.concatenate(self.indices).astype(np.int32),
            part_ids=np.concatenate(self.part_ids),
            origin=np.asarray(origin, dtype=np.float64),
            axes=np.stack([self.u0, self.u1, self.axis]),
        )


def glyph_frame(summary: UncertaintySummary) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right-handed (u0, u1, axis) frame; u0/u1 follow the spread axes."""
    w = np.asarray(summary.median_dir, dtype=np.float64)
    s0 = np.linalg.norm(summary.sigma0)
    if s0 > TINY:
        u0 = summary.sigma0 / s0
        s1 = np.linalg.norm(summary.sigma1)
        u1 = summary.sigma1 / s1 if s1 > TINY else np.cross(w, u0)
    else:
        u0, u1 = plane_basis(w)
    if np.dot(np.cross(u0, u1), w) < 0:
        u1 = -u1
    return u0, u1, w


def _effective_radii(r0: float, r1: float, scale: float) -> tuple[float, float]:
    r0s = r0 * scale
    r1s = r1 * scale
    if r0s <= TINY:
        r0s = RADIUS_FLOOR * scale
    if r1s <= TINY:
        r1s = min(RADIUS_FLOOR * scale, r0s)
    return r0s, r1s


def build_squid(summary: UncertaintySummary, style: GlyphStyle, origin=(0.0, 0.0, 0.0)):
    """Superelliptic body+head glyph; None when the summary is degenerate."""
    if summary.degenerate:
        return None
    u0, u1, axis = glyph_frame(summary)
    s = style.scale
    profile = _profile_unit(style.exponent, style.segments)

    total = summary.max_magnitude * s
    body_len = summary.h * s
    head_len = summary.delta_h * s
    if head_len <= TINY:
        head_len = LENGTH_FLOOR * s
    tip = body_len + head_len
    r0s, r1s = _effective_radii(summary.r0, summary.r1, s)
    # silhouette grows linearly from the apex at the nominal slope
    slope0, slope1 = r0s / total, r1s / total

    acc = _MeshAccum(u0, u1, axis)

    if body_len > TINY:
        body = _PartBuilder(u0, u1, axis)
        ring_b = body.ring(body_len, slope0 * body_len, slope1 * body_len, profile)
        if style.tapered_body:
            apex = body.vertex(np.zeros(3))
            body.fan_from_below(apex, ring_b)
        else:
            ring_0 = body.ring(0.0, slope0 * body_len, slope1 * body_len, profile)
            base_c = body.vertex(np.zeros(3))
            body.cap_down(base_c, ring_0)
            body.lateral(ring_0, ring_b)
        top_c = body.vertex(body_len * axis)
        body.cap_up(top_c, ring_b)
        acc.add_part(body, PART_BODY)
        head_lo_z = body_len
    else:
        head_lo_z = 0.0

    head = _PartBuilder(u0, u1, axis)
    if head_lo_z > TINY:
        ring_lo = head.ring(head_lo_z, slope0 * head_lo_z, slope1 * head_lo_z, profile)
        lo_c = head.vertex(head_lo_z * axis)
        head.cap_down(lo_c, ring_lo)
        ring_hi = head.ring(tip, slope0 * tip, slope1 * tip, profile)
        head.lateral(ring_lo, ring_hi)
    else:
        apex = head.vertex(np.zeros(3))
        ring_hi = head.ring(tip, slope0 * tip, slope1 * tip, profile)
        head.fan_from_below(apex, ring_hi)
    hi_c = head.vertex(tip * axis)
    head.cap_up(hi_c, ring_hi)
    acc.add_part(head, PART_HEAD)

    return acc.mesh(origin)


def _closed_cone(builder, z_base, z_apex, radius, profile):
    """Cone with apex above its base ring."""
    ring = builder.ring(z_base, radius, radius, profile)
    base_c = builder.vertex(z_base * builder.axis)
    builder.cap_down(base_c, ring)
    apex = builder.vertex(z_apex * builder.axis)
    builder.fan_from_above(apex, ring)


def _closed_cylinder(builder, z_lo, z_hi, radius, profile):
    ring_lo = builder.ring(z_lo, radius, radius, profile)
    ring_hi = builder.ring(z_hi, radius, radius, profile)
    lo_c = builder.vertex(z_lo * builder.axis)
    hi_c = builder.vertex(z_hi * builder.axis)
    builder.cap_down(lo_c, ring_lo)
    builder.lateral(ring_lo, ring_hi)
    builder.cap_up(hi_c, ring_hi)


def _build_cone(summary, style, origin):
    u0, u1, axis = glyph_frame(summary)
    s = style.scale
    circle = _profile_unit(2.0, style.segments)
    length = summary.max_magnitude * s
    radius = max(length * math.tan(0.5 * summary.alpha0), RADIUS_FLOOR * s)

    part = _PartBuilder(u0, u1, axis)
    ring = part.ring(length, radius, radius, profile=circle)
    apex = part.vertex(np.zeros(3))
    part.fan_from_below(apex, ring)
    top_c = part.vertex(length * axis)
    part.cap_up(top_c, ring)

    acc = _MeshAccum(u0, u1, axis)
    acc.add_part(part, PART_BODY)
    return acc.mesh(origin)


def _build_comet(summary, style, origin):
    u0, u1, axis = glyph_frame(summary)
    s = style.scale
    circle = _profile_unit(2.0, style.segments)
    body_len = summary.h * s
    head_len = max(summary.delta_h * s, LENGTH_FLOOR * s)
    r_head = max(summary.r0 * s, RADIUS_FLOOR * s)
    r_shaft = max(COMET_SHAFT_FRACTION * summary.r0 * s, RADIUS_FLOOR * s)

    acc = _MeshAccum(u0, u1, axis)
    if body_len > TINY:
        shaft = _PartBuilder(u0, u1, axis)
        _closed_cylinder(shaft, 0.0, body_len, r_shaft, circle)
        acc.add_part(shaft, PART_BODY)
    head = _PartBuilder(u0, u1, axis)
    _closed_cone(head, body_len, body_len + head_len, r_head, circle)
    acc.add_part(head, PART_HEAD)
    return acc.mesh(origin)


def _build_tailed_disc(summary, style, origin):
    u0, u1, axis = glyph_frame(summary)
    s = style.scale
    circle = _profile_unit(2.0, style.segments)
    length = summary.max_magnitude * s
    r_disc = max(summary.r0 * s, RADIUS_FLOOR * s)
    half_th = 0.5 * LENGTH_FLOOR * s

    shaft_len = (1.0 - ARROW_HEAD_FRACTION) * length
    acc = _MeshAccum(u0, u1, axis)

    shaft = _PartBuilder(u0, u1, axis)
    _closed_cylinder(shaft, 0.0, shaft_len, ARROW_SHAFT_RADIUS * length, circle)
    acc.add_part(shaft, PART_BODY)

    head = _PartBuilder(u0, u1, axis)
    _closed_cone(head, shaft_len, length, ARROW_HEAD_RADIUS * length, circle)
    acc.add_part(head, PART_HEAD)

    disc = _PartBuilder(u0, u1, axis)
    _closed_cylinder(disc, length - half_th, length + half_th, r_disc, circle)
    acc.add_part(disc, PART_DISC)
    return acc.mesh(origin)


def build_comparison(summary: UncertaintySummary, style: GlyphStyle, origin=(0.0, 0.0, 0.0)):
    """cone / comet / tailed-disc mesh; None when the summary is degenerate."""
    if summary.degenerate:
        return None
    if style.kind == "cone":
        return _build_cone(summary, style, origin)
    if style.kind == "comet":
        return _build_comet(summary, style, origin)
    if style.kind == "tailed-disc":
        return _build_tailed_disc(summary, style, origin)
    raise UsageError(f"not a comparison glyph kind: {style.kind!r}")


def build_glyph(summary: UncertaintySummary, style: GlyphStyle, origin=(0.0, 0.0, 0.0)):
    if style.kind == "squid":
        return build_squid(summary, style, origin)
    return build_comparison(summary, style, origin)


def normalize_scene(summaries, cell_size: float, user_scale: float) -> float:
    """Shared scene scale: cell_size*user_scale over the largest magnitude."""
    peak = 0.0
    any_ok = False
    for s in summaries:
        if s.degenerate:
            continue
        any_ok = True
        peak = max(peak, s.max_magnitude)
    if not any_ok or peak <= 0.0:
        raise ComputationError("no non-degenerate summaries to normalize against")
    return cell_size * user_scale / peak


def validate_mesh(mesh: GlyphMesh) -> None:
    """Index bounds, unit normals, NaN-free, per-part closedness."""
    nv = mesh.positions.shape[0]
    if not np.all(np.isfinite(mesh.positions)):
        raise ValueError("mesh positions contain non-finite values")
    if not np.all(np.isfinite(mesh.normals)):
        raise ValueError("mesh normals contain non-finite values")
    if mesh.indices.min() < 0 or mesh.indices.max() >= nv:
        raise ValueError("triangle index out of range")
    lens = np.linalg.norm(mesh.normals, axis=1)
    if np.abs(lens - 1.0).max() > 1e-6:
        raise ValueError("normals are not unit length")
    for part in np.unique(mesh.part_ids):
        tris = mesh.indices[mesh.part_ids == part]
        edges: dict[tuple[int, int], int] = {}
        for a, b, c in tris:
            for u, v in ((a, b), (b, c), (c, a)):
                key = (min(u, v), max(u, v))
                edges[key] = edges.get(key, 0) + 1
        bad = [e for e, n in edges.items() if n != 2]
        if bad:
            raise ValueError(f"part {part}: {len(bad)} edges not shared by exactly 2 triangles")


# --- scene assembly and export -------------------------------------------


@dataclass(frozen=True)
class GlyphScene:
    dataset: str
    t: int
    style: GlyphStyle
    scale: float
    locations: np.ndarray  # (G, 3) int
    origins: np.ndarray  # (G, 3) float world positions
    summaries: list
    meshes: list  # GlyphMesh or None per location


def build_scene(dataset_name, t, locations, origins, summaries, style: GlyphStyle) -> GlyphScene:
    meshes = [
        build_glyph(s, style, origin=o) for s, o in zip(summaries, np.asarray(origins, float))
    ]
    return GlyphScene(
        dataset=dataset_name,
        t=t,
        style=style,
        scale=style.scale,
        locations=np.asarray(locations),
        origins=np.asarray(origins, dtype=np.float64),
        summaries=list(summaries),
        meshes=meshes,
    )


def export_obj(scene: GlyphScene, path) -> None:
    """ASCII OBJ, LF endings, one group per glyph, world-space vertices."""
    lines = [
        f"# dataset: {scene.dataset}",
        f"# t: {scene.t}",
        f"# glyph: {scene.style.kind} exponent={scene.style.exponent!r}"
        f" segments={scene.style.segments} scale={scene.scale!r}",
    ]
    v_off = 1
    for loc, mesh in zip(scene.locations, scene.meshes):
        if mesh is None:
            continue
        lines.append(f"g glyph_{loc[0]}_{loc[1]}_{loc[2]}")
        world = mesh.positions + mesh.origin[None, :]
        for p in world:
            lines.append(f"v {p[0]!r} {p[1]!r} {p[2]!r}")
        for n in mesh.normals:
            lines.append(f"vn {n[0]!r} {n[1]!r} {n[2]!r}")
        for tri in mesh.indices:
            a, b, c = (int(x) + v_off for x in tri)
            lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
        v_off += mesh.positions.shape[0]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def scene_payload(scene: GlyphScene) -> bytes:
    """Canonical JSON bytes; shared verbatim by the CLI export and the API."""
    glyphs = []
    for loc, mesh, summ in zip(scene.locations, scene.meshes, scene.summaries):
        entry = {
            "location": [int(c) for c in loc],
            "summary": summary_record(summ),
        }
        if mesh is None:
            entry["skipped"] = True
        else:
            entry["transform"] = {
                "origin": [float(c) for c in mesh.origin],
                "axes": [[float(c) for c in row] for row in mesh.axes],
            }
            entry["positions"] = [float(c) for c in mesh.positions.ravel()]
            entry["normals"] = [float(c) for c in mesh.normals.ravel()]
            entry["indices"] = [int(c) for c in mesh.indices.ravel()]
            entry["part_ids"] = [int(c) for c in mesh.part_ids]
        glyphs.append(entry)
    doc = {
        "dataset": scene.dataset,
        "t": int(scene.t),
        "glyph_type": scene.style.kind,
        "exponent": float(scene.style.exponent),
        "segments": int(scene.style.segments),
        "scale": float(scene.scale),
        "glyphs": glyphs,
    }
    return canonical_json(doc)
