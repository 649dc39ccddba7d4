"""HTTP API serving datasets, glyph scenes, depth matrices, and detail views.

Routes (all GET, JSON):
    /api/datasets
    /api/datasets/{id}/glyphs?t=&type=&region=&exponent=&segments=&scale=
    /api/datasets/{id}/depth?t=&region=
    /api/datasets/{id}/point?t=&i=&j=&k=&outliers=
    /api/datasets/{id}/magvar[?t=]

Responses for a fixed dataset and query are byte-stable across requests
and restarts: payloads come from the same builders the CLI uses. Errors
carry {"status", "code", "message"} with 400 for parameter problems,
404 for unknown datasets or out-of-range indices, 422 for degenerate
computations, 500 otherwise.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .cli import parse_region
from .errors import ComputationError, RangeError, UsageError, VecuqError
from .field import EnsembleField, GridIndex, load_dataset
from .service import (
    datasets_payload,
    depth_payload,
    field_summaries,
    glyph_scene_payload,
    magvar_payload,
    point_payload,
)


class UnknownDatasetError(VecuqError):
    exit_code = 4


class Registry:
    """Datasets scanned once at startup; per-(id, t) summary cache built
    lazily, each entry computed at most once under its own lock."""

    def __init__(self, data_dir):
        root = Path(data_dir)
        if not root.is_dir():
            raise UsageError(f"--data-dir is not a directory: {root}")
        self.fields: dict[str, EnsembleField] = {}
        for sub in sorted(root.iterdir()):
            if sub.is_dir() and (sub / "manifest.json").exists():
                self.fields[sub.name] = load_dataset(sub)
        self._cache: dict[tuple[str, int], tuple] = {}
        self._locks: dict[tuple[str, int], threading.Lock] = {}
        self._meta_lock = threading.Lock()

    def field(self, ds_id: str) -> EnsembleField:
        try:
            return self.fields[ds_id]
        except KeyError:
            raise UnknownDatasetError(f"unknown dataset {ds_id!r}") from None

    def summaries(self, ds_id: str, t: int):
        key = (ds_id, t)
        if key in self._cache:
            return self._cache[key]
        with self._meta_lock:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._cache:
                self._cache[key] = field_summaries(self.field(ds_id), t)
        return self._cache[key]


_REQUIRED = object()


def _int_param(raw: str | None, name: str, default=_REQUIRED):
    if raw is None:
        if default is _REQUIRED:
            raise UsageError(f"missing required query parameter {name!r}")
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"query parameter {name!r} must be an integer, got {raw!r}") from None


def _float_param(raw: str | None, name: str, default: float) -> float:
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"query parameter {name!r} must be a number, got {raw!r}") from None


def _json_bytes(payload: bytes) -> Response:
    return Response(content=payload, media_type="application/json")


def create_app(data_dir, cors_origins=None) -> FastAPI:
    app = FastAPI(title="vecuq explorer API", docs_url=None, redoc_url=None)
    registry = Registry(data_dir)
    app.state.registry = registry

    if cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=list(cors_origins), allow_methods=["GET"]
        )

    def _error(status: int, code: str, message: str) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={"status": status, "code": code, "message": message},
        )

    @app.exception_handler(VecuqError)
    async def _vecuq_error(request: Request, exc: VecuqError):
        if isinstance(exc, UnknownDatasetError):
            return _error(404, "unknown_dataset", str(exc))
        if isinstance(exc, RangeError):
            return _error(404, "index_out_of_range", str(exc))
        if isinstance(exc, UsageError):
            return _error(400, "bad_parameter", str(exc))
        if isinstance(exc, ComputationError):
            return _error(422, "degenerate_computation", str(exc))
        return _error(500, "internal_error", str(exc))

    @app.get("/api/datasets")
    def list_datasets():
        return _json_bytes(datasets_payload(registry.fields))

    @app.get("/api/datasets/{ds_id}/glyphs")
    def glyphs(
        ds_id: str,
        t: str | None = None,
        type: str | None = None,
        region: str | None = None,
        exponent: str | None = None,
        segments: str | None = None,
        scale: str | None = None,
    ):
        field = registry.field(ds_id)
        t_idx = _int_param(t, "t")
        field.check_time(t_idx)
        reg = None
        if region is not None:
            reg = parse_region(region)
            field.check_region(reg)
        payload = glyph_scene_payload(
            field,
            t_idx,
            kind=type or "squid",
            region=reg,
            exponent=_float_param(exponent, "exponent", 2.5),
            segments=_int_param(segments, "segments", 48),
            user_scale=_float_param(scale, "scale", 1.0),
            full_summaries=registry.summaries(ds_id, t_idx),
        )
        return _json_bytes(payload)

    @app.get("/api/datasets/{ds_id}/depth")
    def depth(ds_id: str, t: str | None = None, region: str | None = None):
        field = registry.field(ds_id)
        t_idx = _int_param(t, "t")
        field.check_time(t_idx)
        reg = None
        if region is not None:
            reg = parse_region(region)
            field.check_region(reg)
        return _json_bytes(depth_payload(field, t_idx, reg))

    @app.get("/api/datasets/{ds_id}/point")
    def point(
        ds_id: str,
        t: str | None = None,
        i: str | None = None,
        j: str | None = None,
        k: str | None = None,
        outliers: str | None = None,
    ):
        field = registry.field(ds_id)
        idx = GridIndex(
            i=_int_param(i, "i"),
            j=_int_param(j, "j"),
            k=_int_param(k, "k"),
            t=_int_param(t, "t"),
        )
        field.check_index(idx)
        n_out = _int_param(outliers, "outliers", 0)
        if n_out < 0:
            raise UsageError(f"outliers must be >= 0, got {n_out}")
        return _json_bytes(point_payload(field, idx, n_out))

    @app.get("/api/datasets/{ds_id}/magvar")
    def magvar(ds_id: str, t: str | None = None):
        field = registry.field(ds_id)
        return _json_bytes(magvar_payload(field, _int_param(t, "t", default=None)))

    return app
