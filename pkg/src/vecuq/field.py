"""Time-varying ensemble vector fields: model, generation, ingestion, persistence.

On-disk dataset format
----------------------
A dataset is a directory holding ``manifest.json`` and ``data.bin``.
Manifest fields: name, dims [nx,ny,nz], nt, n_members, spacing [dx,dy,dz],
origin [x,y,z], dtype "f32", byte_order "little",
layout "t,member,z,y,x,component". ``data.bin`` is dense little-endian
float32 in exactly that layout, three components per entry, no header.

Brick input format
------------------
A single-member per-time-step field arrives as one f32 little-endian file
per component per time step (layout z,y,x) plus a brick manifest:
name, dims [nx,ny,nz], nt, spacing, origin, dtype "f32",
byte_order "little", and component_files, a Python format template with
``{component}`` (u, v or w) and ``{t}`` fields, resolved relative to the
manifest's directory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataIOError, FormatError, RangeError, UsageError

LAYOUT = "t,member,z,y,x,component"
COMPONENTS = ("u", "v", "w")


@dataclass(frozen=True)
class GridIndex:
    i: int
    j: int
    k: int
    t: int


@dataclass(frozen=True)
class Region:
    """Inclusive index bounds (i, j, k); validated against a field on use."""

    lo: tuple[int, int, int]
    hi: tuple[int, int, int]

    def __post_init__(self):
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise UsageError(f"region lo {self.lo} exceeds hi {self.hi}")

    @property
    def shape(self) -> tuple[int, int, int]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class EnsembleField:
    """Dense (t, member, z, y, x, component) ensemble of 3-vectors.

    Data lives in float64 in memory; persistence quantizes to the f32
    storage format, so a freshly generated field is quantized once at its
    first write and round-trips bit-exactly from then on. Immutable after
    construction; the buffer is marked read-only so fields can be shared
    freely across workers.
    """

    name: str
    dims: tuple[int, int, int]  # (nx, ny, nz)
    nt: int
    n_members: int
    spacing: tuple[float, float, float]
    origin: tuple[float, float, float]
    data: np.ndarray  # float64, shape (nt, n_members, nz, ny, nx, 3)

    def __post_init__(self):
        nx, ny, nz = self.dims
        if min(nx, ny, nz) < 1 or self.nt < 1 or self.n_members < 1:
            raise FormatError(
                f"invalid extents dims={self.dims} nt={self.nt} members={self.n_members}"
            )
        if any(s <= 0 for s in self.spacing):
            raise FormatError(f"spacing components must be positive, got {self.spacing}")
        expected = (self.nt, self.n_members, nz, ny, nx, 3)
        if self.data.shape != expected:
            raise FormatError(f"data shape {self.data.shape} != expected {expected}")
        if self.data.dtype != np.float64:
            raise FormatError(f"data dtype {self.data.dtype} != float64")
        self.data.setflags(write=False)

    @property
    def n_locations(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    def full_region(self) -> Region:
        nx, ny, nz = self.dims
        return Region((0, 0, 0), (nx - 1, ny - 1, nz - 1))

    def check_time(self, t: int) -> None:
        if not 0 <= t < self.nt:
            raise RangeError(f"time index {t} outside [0, {self.nt})")

    def check_index(self, idx: GridIndex) -> None:
        nx, ny, nz = self.dims
        if not (0 <= idx.i < nx and 0 <= idx.j < ny and 0 <= idx.k < nz):
            raise RangeError(f"grid index ({idx.i},{idx.j},{idx.k}) outside dims {self.dims}")
        self.check_time(idx.t)

    def check_region(self, region: Region) -> None:
        nx, ny, nz = self.dims
        for axis, (lo, hi, n) in enumerate(zip(region.lo, region.hi, (nx, ny, nz))):
            if lo < 0 or hi >= n:
                raise RangeError(
                    f"region axis {axis} bounds [{lo},{hi}] outside [0,{n - 1}]"
                )

    def members_at(self, idx: GridIndex) -> np.ndarray:
        """All member vectors at one spatiotemporal location, (n_members, 3)."""
        self.check_index(idx)
        return self.data[idx.t, :, idx.k, idx.j, idx.i, :]

    def world_position(self, i: int, j: int, k: int) -> tuple[float, float, float]:
        ox, oy, oz = self.origin
        dx, dy, dz = self.spacing
        return (ox + i * dx, oy + j * dy, oz + k * dz)


@dataclass(frozen=True)
class RegionView:
    """Member vectors of every location in a region at one time step.

    Locations scan in (k, j, i) ascending order, i fastest.
    """

    region: Region
    t: int
    locations: np.ndarray  # (L, 3) int, rows (i, j, k)
    vectors: np.ndarray  # (L, n_members, 3) float64


def region_locations(region: Region) -> np.ndarray:
    (i0, j0, k0), (i1, j1, k1) = region.lo, region.hi
    kk, jj, ii = np.meshgrid(
        np.arange(k0, k1 + 1), np.arange(j0, j1 + 1), np.arange(i0, i1 + 1), indexing="ij"
    )
    return np.stack([ii.ravel(), jj.ravel(), kk.ravel()], axis=1)


def slice_region(field: EnsembleField, region: Region, t: int) -> RegionView:
    """Deterministic (k, j, i ascending) view of member vectors in a region."""
    field.check_time(t)
    field.check_region(region)
    (i0, j0, k0), (i1, j1, k1) = region.lo, region.hi
    sub = field.data[t, :, k0 : k1 + 1, j0 : j1 + 1, i0 : i1 + 1, :]
    # (member, z, y, x, 3) -> (z, y, x, member, 3) -> (L, member, 3)
    vectors = np.moveaxis(sub, 0, 3).reshape(-1, field.n_members, 3)
    return RegionView(region=region, t=t, locations=region_locations(region), vectors=vectors)


def generate_synthetic(
    nx: int,
    ny: int,
    nt: int,
    n_members: int,
    noise_amp: float = 0.1,
    seed: int = 0,
    name: str = "synthetic",
) -> EnsembleField:
    """Rotating sine-sheet test field with per-member uniform noise.

    The base field on the [-1,1]^2 grid starts at (sin x, sin y, 0.5); at
    each of the nt time samples t_k (uniform, inclusive, over [0, 3pi/4])
    the in-plane components advance by a rotation through angle t_k while
    the vertical component stays 0.5. Every member then perturbs every
    component with independent uniform noise in [-noise_amp, +noise_amp].
    Deterministic for a given seed.
    """
    if nx < 2 or ny < 2:
        raise UsageError(f"nx and ny must be >= 2, got ({nx}, {ny})")
    if nt < 1 or n_members < 1:
        raise UsageError(f"nt and n_members must be >= 1, got ({nt}, {n_members})")
    if noise_amp < 0:
        raise UsageError(f"noise_amp must be >= 0, got {noise_amp}")

    xs = np.linspace(-1.0, 1.0, nx)
    ys = np.linspace(-1.0, 1.0, ny)
    ts = np.linspace(0.0, 0.75 * np.pi, nt)

    u = np.broadcast_to(np.sin(xs)[None, :], (ny, nx)).copy()
    v = np.broadcast_to(np.sin(ys)[:, None], (ny, nx)).copy()
    base = np.empty((nt, ny, nx, 2))
    for k in range(nt):
        base[k, ..., 0] = u
        base[k, ..., 1] = v
        c, s = math.cos(ts[k]), math.sin(ts[k])
        u, v = u * c - v * s, u * s + v * c

    data = np.empty((nt, n_members, 1, ny, nx, 3))
    data[..., 0] = base[:, None, None, :, :, 0]
    data[..., 1] = base[:, None, None, :, :, 1]
    data[..., 2] = 0.5
    if noise_amp > 0:
        rng = np.random.default_rng(seed)
        data += rng.uniform(-noise_amp, noise_amp, size=data.shape)

    return EnsembleField(
        name=name,
        dims=(nx, ny, 1),
        nt=nt,
        n_members=n_members,
        spacing=(2.0 / (nx - 1), 2.0 / (ny - 1), 1.0),
        origin=(-1.0, -1.0, 0.0),
        data=data,
    )


# --- persistence --------------------------------------------------------


def write_dataset(field: EnsembleField, path) -> None:
    """Write manifest.json + data.bin; round-trips bit-exactly."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    manifest = {
        "name": field.name,
        "dims": list(field.dims),
        "nt": field.nt,
        "n_members": field.n_members,
        "spacing": list(field.spacing),
        "origin": list(field.origin),
        "dtype": "f32",
        "byte_order": "little",
        "layout": LAYOUT,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    field.data.astype("<f4").tofile(root / "data.bin")


def _read_manifest(path: Path) -> dict:
    if not path.exists():
        raise DataIOError(f"manifest not found: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest {path} is not valid JSON: {exc}") from exc


def load_dataset(path) -> EnsembleField:
    """Load a dataset directory written by `write_dataset`."""
    root = Path(path)
    if not root.is_dir():
        raise DataIOError(f"dataset directory not found: {root}")
    manifest = _read_manifest(root / "manifest.json")

    try:
        name = manifest["name"]
        dims = tuple(int(d) for d in manifest["dims"])
        nt = int(manifest["nt"])
        n_members = int(manifest["n_members"])
        spacing = tuple(float(s) for s in manifest["spacing"])
        origin = tuple(float(o) for o in manifest["origin"])
        dtype = manifest["dtype"]
        byte_order = manifest["byte_order"]
        layout = manifest["layout"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"manifest missing or malformed field: {exc}") from exc

    if dtype != "f32":
        raise FormatError(f"unknown dtype {dtype!r} (only 'f32' supported)")
    if byte_order != "little":
        raise FormatError(f"unknown byte order {byte_order!r} (only 'little' supported)")
    if layout != LAYOUT:
        raise FormatError(f"unknown layout {layout!r} (expected {LAYOUT!r})")
    if len(dims) != 3 or min(dims) < 1 or nt < 1 or n_members < 1:
        raise FormatError(f"invalid extents dims={dims} nt={nt} n_members={n_members}")

    nx, ny, nz = dims
    binpath = root / "data.bin"
    if not binpath.exists():
        raise DataIOError(f"payload not found: {binpath}")
    expected = nt * n_members * nz * ny * nx * 3 * 4
    actual = binpath.stat().st_size
    if actual != expected:
        raise FormatError(
            f"payload size mismatch in {binpath}: expected {expected} bytes, got {actual}"
        )
    data = np.fromfile(binpath, dtype="<f4").astype(np.float64).reshape(
        nt, n_members, nz, ny, nx, 3
    )
    return EnsembleField(
        name=name,
        dims=dims,
        nt=nt,
        n_members=n_members,
        spacing=spacing,
        origin=origin,
        data=np.ascontiguousarray(data),
    )


# --- brick ingestion ------------------------------------------------------


@dataclass(frozen=True)
class Brick:
    """Lazy reader over a per-time single-member component-file field."""

    name: str
    dims: tuple[int, int, int]
    nt: int
    spacing: tuple[float, float, float]
    origin: tuple[float, float, float]
    directory: Path
    template: str

    def read_step(self, t: int) -> np.ndarray:
        """One time step as (nz, ny, nx, 3) float32."""
        nx, ny, nz = self.dims
        out = np.empty((nz, ny, nx, 3), dtype=np.float32)
        for ci, comp in enumerate(COMPONENTS):
            fpath = self.directory / self.template.format(component=comp, t=t)
            if not fpath.exists():
                raise DataIOError(f"brick component file not found: {fpath}")
            raw = np.fromfile(fpath, dtype="<f4")
            if raw.size != nx * ny * nz:
                raise FormatError(
                    f"brick file size mismatch in {fpath}: expected "
                    f"{nx * ny * nz * 4} bytes, got {raw.size * 4}"
                )
            out[..., ci] = raw.reshape(nz, ny, nx)
        return out


def load_brick(manifest_path) -> Brick:
    mpath = Path(manifest_path)
    manifest = _read_manifest(mpath)
    try:
        dims = tuple(int(d) for d in manifest["dims"])
        nt = int(manifest["nt"])
        template = manifest["component_files"]
        name = manifest.get("name", mpath.parent.name)
        spacing = tuple(float(s) for s in manifest.get("spacing", (1.0, 1.0, 1.0)))
        origin = tuple(float(o) for o in manifest.get("origin", (0.0, 0.0, 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"brick manifest missing or malformed field: {exc}") from exc
    if manifest.get("dtype", "f32") != "f32" or manifest.get("byte_order", "little") != "little":
        raise FormatError("brick payload must be f32 little-endian")
    if len(dims) != 3 or min(dims) < 1 or nt < 1:
        raise FormatError(f"invalid brick extents dims={dims} nt={nt}")
    return Brick(
        name=name,
        dims=dims,
        nt=nt,
        spacing=spacing,
        origin=origin,
        directory=mpath.parent,
        template=template,
    )


def write_brick(field_steps: list[np.ndarray], manifest: dict, directory) -> Path:
    """Test/tooling helper: lay down component files + manifest for a brick."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    template = manifest["component_files"]
    for t, step in enumerate(field_steps):
        for ci, comp in enumerate(COMPONENTS):
            np.ascontiguousarray(step[..., ci], dtype="<f4").tofile(
                root / template.format(component=comp, t=t)
            )
    mpath = root / "brick.json"
    mpath.write_text(json.dumps(manifest, indent=2) + "\n")
    return mpath


def _patch_indices(dim: int, stride: float, patch: int) -> tuple[int, np.ndarray]:
    """Output count and (n_out, patch) clamped source indices for one axis."""
    n_out = math.ceil(dim / stride)
    centers = np.minimum(np.floor(np.arange(n_out) * stride), dim - 1).astype(np.int64)
    half = patch // 2
    offsets = np.arange(-half, half + 1)
    return n_out, np.clip(centers[:, None] + offsets[None, :], 0, dim - 1)


def ensemble_geometry(
    dims: tuple[int, int, int],
    stride: tuple[float, float, float],
    patch: tuple[int, int, int],
) -> tuple[tuple[int, int, int], int]:
    """Output dims and member count of a patch scan, without reading data."""
    if any(s <= 0 for s in stride):
        raise UsageError(f"stride components must be positive, got {stride}")
    if any(p < 1 or p % 2 == 0 for p in patch):
        raise UsageError(f"patch dimensions must be odd and >= 1, got {patch}")
    out = tuple(math.ceil(d / s) for d, s in zip(dims, stride))
    return out, patch[0] * patch[1] * patch[2]


def brick_to_ensemble(
    brick: Brick,
    stride: tuple[float, float, float],
    patch: tuple[int, int, int],
    name: str | None = None,
) -> EnsembleField:
    """Build a pseudo-ensemble by scanning a spatial patch at strided samples.

    Output dims are ceil(dims/stride) per axis; members are the
    px*py*pz patch values in row-major (z outer, y, x inner) scan order.
    Patches beyond the border clamp to the valid range, so every location
    has the same member count.
    """
    (nxo, nyo, nzo), n_members = ensemble_geometry(brick.dims, stride, patch)
    nx, ny, nz = brick.dims
    px, py, pz = patch
    _, ix = _patch_indices(nx, stride[0], px)
    _, iy = _patch_indices(ny, stride[1], py)
    _, iz = _patch_indices(nz, stride[2], pz)

    data = np.empty((brick.nt, n_members, nzo, nyo, nxo, 3))
    for t in range(brick.nt):
        step = brick.read_step(t).astype(np.float64)
        # gather -> (nzo, pz, nyo, py, nxo, px, 3)
        gathered = step[
            iz[:, :, None, None, None, None],
            iy[None, None, :, :, None, None],
            ix[None, None, None, None, :, :],
        ]
        # member axis must scan (z, y, x) row-major
        g = gathered.transpose(0, 2, 4, 1, 3, 5, 6).reshape(nzo, nyo, nxo, n_members, 3)
        data[t] = np.moveaxis(g, 3, 0)

    sx, sy, sz = stride
    dx, dy, dz = brick.spacing
    return EnsembleField(
        name=name or f"{brick.name}-ensemble",
        dims=(nxo, nyo, nzo),
        nt=brick.nt,
        n_members=n_members,
        spacing=(dx * sx, dy * sy, dz * sz),
        origin=brick.origin,
        data=data,
    )
