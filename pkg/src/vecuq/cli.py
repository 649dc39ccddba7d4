"""Batch command-line entry point.

Subcommands: gen-synthetic, ingest-brick, depth, summarize, glyphs,
magvar, point, serve. Diagnostics go to stderr, data to the --out path
only. Exit codes: 0 ok, 1 usage, 2 format, 3 I/O, 4 computation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import _kernels
from .analysis import depth_heatmap, point_detail, point_record, write_point_csv
from .depth import write_depth_csv, write_heatmap_csv
from .errors import UsageError, VecuqError
from .field import (
    GridIndex,
    Region,
    brick_to_ensemble,
    generate_synthetic,
    load_brick,
    load_dataset,
    write_dataset,
)
from .glyphs import GLYPH_KINDS, export_obj
from .jsonutil import canonical_json
from .service import glyph_scene, glyph_scene_payload
from .summary import (
    SUMMARY_CSV_FIELDS,
    magvar_series,
    magvar_slice,
    summarize_field,
    summary_csv_row,
    summary_record,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_region(text: str) -> Region:
    """Inclusive `i0:i1,j0:j1,k0:k1` region syntax."""
    try:
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError("need three comma-separated ranges")
        bounds = []
        for part in parts:
            lo, hi = part.split(":")
            bounds.append((int(lo), int(hi)))
    except ValueError as exc:
        raise UsageError(f"bad region {text!r} (expected i0:i1,j0:j1,k0:k1): {exc}") from exc
    return Region(tuple(b[0] for b in bounds), tuple(b[1] for b in bounds))


def parse_ijk(text: str) -> tuple[int, int, int]:
    try:
        i, j, k = (int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad index {text!r} (expected i,j,k): {exc}") from exc
    return i, j, k


def parse_triple(text: str, kind: str) -> tuple[float, float, float]:
    try:
        a, b, c = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad {kind} {text!r} (expected three comma-separated values)") from exc
    return a, b, c


def build_parser() -> _Parser:
    parser = _Parser(prog="vecuq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synthetic", help="generate the rotating-sine synthetic dataset")
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--members", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, required=True, help="RNG seed (mandatory, no wall clock)")
    p.add_argument("--name", default="synthetic")
    p.add_argument("--out", required=True, help="dataset directory to write")

    p = sub.add_parser("ingest-brick", help="patch-scan a brick into a pseudo-ensemble")
    p.add_argument("--manifest", required=True, help="brick manifest path")
    p.add_argument("--stride", required=True, help="sx,sy,sz (fractions allowed)")
    p.add_argument("--patch", required=True, help="px,py,pz (odd)")
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("depth", help="export member depth as CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--region", default=None)
    p.add_argument("--ijk", default=None)
    p.add_argument(
        "--grid",
        action="store_true",
        help="locations x members grid instead of long (location,member,depth,count) rows",
    )
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("summarize", help="export per-location summaries (.json or .csv)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("glyphs", help="export a glyph scene (.obj or .json)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--type", dest="kind", default="squid", choices=GLYPH_KINDS)
    p.add_argument("--region", default=None)
    p.add_argument("--exponent", type=float, default=2.5)
    p.add_argument("--segments", type=int, default=48)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--format", dest="fmt", default="obj", choices=("obj", "json"))
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("magvar", help="magnitude-variation series (or slice with --t)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("point", help="per-member detail at one grid point (.csv or .json)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--ijk", required=True)
    p.add_argument("--outliers", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="serve datasets over HTTP for the explorer")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--cors-origin", action="append", default=None)

    return parser


def _cmd_gen_synthetic(args) -> list[str]:
    f = generate_synthetic(
        nx=args.nx,
        ny=args.ny,
        nt=args.nt,
        n_members=args.members,
        noise_amp=args.noise,
        seed=args.seed,
        name=args.name,
    )
    write_dataset(f, args.out)
    return [args.out]


def _cmd_ingest_brick(args) -> list[str]:
    brick = load_brick(args.manifest)
    stride = parse_triple(args.stride, "stride")
    patch = parse_ijk(args.patch)
    ens = brick_to_ensemble(brick, stride, patch, name=args.name)
    write_dataset(ens, args.out)
    return [args.out]


def _resolve_region(field, args) -> Region | None:
    if args.region is not None and args.ijk is not None:
        raise UsageError("--region and --ijk are mutually exclusive")
    if args.region is not None:
        return parse_region(args.region)
    if args.ijk is not None:
        i, j, k = parse_ijk(args.ijk)
        return Region((i, j, k), (i, j, k))
    return None


def _cmd_depth(args) -> list[str]:
    field = load_dataset(args.dataset)
    _kernels.set_thread_count(args.jobs)
    region = _resolve_region(field, args) or field.full_region()
    matrix = depth_heatmap(field, region, args.t)
    if args.grid:
        write_heatmap_csv(matrix, args.out)
    else:
        write_depth_csv(matrix, args.out)
    return [args.out]


def _cmd_summarize(args) -> list[str]:
    field = load_dataset(args.dataset)
    _kernels.set_thread_count(args.jobs)
    locs, summaries = summarize_field(field, args.t)
    out = Path(args.out)
    if out.suffix.lower() == ".csv":
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SUMMARY_CSV_FIELDS)
            for loc, s in zip(locs, summaries):
                writer.writerow(summary_csv_row(s, loc))
    else:
        records = [summary_record(s, location=loc) for loc, s in zip(locs, summaries)]
        out.write_bytes(canonical_json({"dataset": field.name, "t": args.t, "summaries": records}))
    return [str(out)]


def _cmd_glyphs(args) -> list[str]:
    field = load_dataset(args.dataset)
    _kernels.set_thread_count(args.jobs)
    region = parse_region(args.region) if args.region else None
    if region is not None:
        field.check_region(region)
    if args.fmt == "json":
        payload = glyph_scene_payload(
            field,
            args.t,
            kind=args.kind,
            region=region,
            exponent=args.exponent,
            segments=args.segments,
            user_scale=args.scale,
        )
        Path(args.out).write_bytes(payload)
    else:
        scene = glyph_scene(
            field,
            args.t,
            kind=args.kind,
            region=region,
            exponent=args.exponent,
            segments=args.segments,
            user_scale=args.scale,
        )
        export_obj(scene, args.out)
    return [args.out]


def _cmd_magvar(args) -> list[str]:
    field = load_dataset(args.dataset)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if args.t is None:
            writer.writerow(["t", "max_delta_h"])
            for t, v in enumerate(magvar_series(field)):
                writer.writerow([t, repr(float(v))])
        else:
            field.check_time(args.t)
            from .field import region_locations

            writer.writerow(["location", "delta_h"])
            locs = region_locations(field.full_region())
            for loc, v in zip(locs, magvar_slice(field, args.t)):
                writer.writerow([f"{loc[0]}:{loc[1]}:{loc[2]}", repr(float(v))])
    return [args.out]


def _cmd_point(args) -> list[str]:
    field = load_dataset(args.dataset)
    i, j, k = parse_ijk(args.ijk)
    idx = GridIndex(i, j, k, args.t)
    details, full, retained = point_detail(field, idx, args.outliers)
    out = Path(args.out)
    if out.suffix.lower() == ".json":
        doc = {
            "dataset": field.name,
            "t": args.t,
            "location": [i, j, k],
            "outliers": args.outliers,
            "details": point_record(details),
            "summary_full": summary_record(full),
            "summary_retained": summary_record(retained),
        }
        out.write_bytes(canonical_json(doc))
    else:
        write_point_csv(details, out)
    return [str(out)]


def _cmd_serve(args) -> list[str]:
    import uvicorn

    from .server import create_app

    app = create_app(args.data_dir, cors_origins=args.cors_origin)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return []


_COMMANDS = {
    "gen-synthetic": _cmd_gen_synthetic,
    "ingest-brick": _cmd_ingest_brick,
    "depth": _cmd_depth,
    "summarize": _cmd_summarize,
    "glyphs": _cmd_glyphs,
    "magvar": _cmd_magvar,
    "point": _cmd_point,
    "serve": _cmd_serve,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    artifacts = _COMMANDS[args.command](args)
    for path in artifacts:
        print(path, file=sys.stderr)
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except VecuqError as exc:
        print(f"vecuq: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"vecuq: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
