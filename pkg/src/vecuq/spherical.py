"""Cartesian <-> spherical conversion onto the depth domain R x [0,pi] x (-pi,pi].

Degenerate canonicalization: zero vectors map to (0, 0, 0); points on the
z-axis get phi = 0; an azimuth of exactly -pi is folded to +pi so phi stays
in the half-open interval.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError


def cartesian_to_spherical(vectors: np.ndarray) -> np.ndarray:
    """Convert (..., 3) cartesian vectors to (r, theta, phi) triples."""
    v = np.asarray(vectors, dtype=np.float64)
    if v.shape[-1] != 3:
        raise UsageError(f"expected 3-vectors, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise UsageError("non-finite vector component")
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    r = np.sqrt(x * x + y * y + z * z)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.where(r > 0.0, np.arccos(np.clip(z / np.where(r > 0, r, 1.0), -1.0, 1.0)), 0.0)
    phi = np.arctan2(y, x)
    on_axis = (x == 0.0) & (y == 0.0)
    phi = np.where(on_axis, 0.0, phi)
    phi = np.where(phi == -np.pi, np.pi, phi)
    out = np.stack([r, theta, phi], axis=-1)
    out[r == 0.0] = 0.0
    return out


def to_spherical(v) -> np.ndarray:
    """Single-vector convenience wrapper returning one (r, theta, phi) triple."""
    return cartesian_to_spherical(np.asarray(v, dtype=np.float64).reshape(3))


def spherical_to_cartesian(triples: np.ndarray) -> np.ndarray:
    """Inverse map, (..., 3) triples (r, theta, phi) to cartesian."""
    s = np.asarray(triples, dtype=np.float64)
    r, theta, phi = s[..., 0], s[..., 1], s[..., 2]
    sin_t = np.sin(theta)
    return np.stack(
        [r * sin_t * np.cos(phi), r * sin_t * np.sin(phi), r * np.cos(theta)], axis=-1
    )
