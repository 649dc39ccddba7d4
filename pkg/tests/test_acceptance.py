"""Acceptance suite: one test per release criterion, tolerances pinned.

Each test prints a PASS line on success; the terminal summary hook in
conftest.py prints the per-criterion verdict table after the run.
Timed criteria exclude the one-time JIT warmup (session fixture).
"""

import json
import math
import subprocess
import sys
import time
from dataclasses import replace
from math import comb

import numpy as np
import pytest
from fastapi.testclient import TestClient

from tests.conftest import DEVIANT_INDEX, clustered_with_deviant
from vecuq.depth import depth_all_members, filter_outliers, vector_depth_bruteforce
from vecuq.field import generate_synthetic, load_dataset, write_brick
from vecuq.glyphs import GlyphStyle, build_glyph, build_squid, validate_mesh
from vecuq.server import create_app
from vecuq.spherical import cartesian_to_spherical
from vecuq.summary import summarize, summarize_field

SEED = 20240817


def _random_cases(n_cases=200):
    rng = np.random.default_rng(SEED)
    cases = []
    for _ in range(n_cases):
        n = int(rng.integers(5, 13))
        cases.append(cartesian_to_spherical(rng.normal(size=(n, 3))))
    return cases


def test_c01_depth_oracle_equivalence():
    cases = _random_cases(200)
    start = time.perf_counter()
    checked = 0
    for sph in cases:
        res = depth_all_members(sph)
        for q in range(sph.shape[0]):
            count, _ = vector_depth_bruteforce(sph, sph[q])
            assert count == int(res.counts[q])
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"oracle sweep took {elapsed:.1f}s"
    print(f"ACCEPTANCE 1 PASS: {checked} member queries, fast == brute force, {elapsed:.1f}s")


def test_c02_depth_bounds_and_monotone_maps():
    cases = _random_cases(200)
    for sph in cases:
        n = sph.shape[0]
        res = depth_all_members(sph)
        assert int(res.counts.min()) >= comb(n - 1, 3)
        assert res.values.max() <= 1.0
    rng = np.random.default_rng(SEED + 1)
    for _ in range(20):
        scales = rng.uniform(0.5, 2.0, size=3)
        shifts = rng.uniform(-0.5, 0.5, size=3)
        cubics = rng.uniform(0.0, 0.3, size=3)
        for sph in cases[:40]:
            base = depth_all_members(sph).counts
            mapped = scales * sph + shifts
            mapped = mapped + cubics * mapped**3  # still strictly increasing
            assert np.array_equal(depth_all_members(mapped).counts, base)
    print("ACCEPTANCE 2 PASS: member floor/upper bounds exact; 20 monotone maps count-invariant")


def test_c03_outlier_removal_behavior():
    start = time.perf_counter()
    members = clustered_with_deviant()
    sph = cartesian_to_spherical(members)
    res = depth_all_members(sph)
    others = np.delete(res.counts, DEVIANT_INDEX)
    assert (res.counts[DEVIANT_INDEX] < others).all(), "deviant must be strict depth minimum"
    keep = filter_outliers(sph, 1)
    assert DEVIANT_INDEX not in keep
    full = summarize(members, depth_result=res)
    slim = summarize(members[keep])
    assert slim.alpha0 < full.alpha0
    assert slim.r0 < full.r0
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(
        f"ACCEPTANCE 3 PASS: deviant removed, alpha0 {full.alpha0:.3f}->{slim.alpha0:.3f}, "
        f"r0 {full.r0:.3f}->{slim.r0:.3f}, {elapsed * 1000:.0f}ms"
    )


@pytest.fixture(scope="module")
def seeded_summaries():
    field = generate_synthetic(nx=10, ny=10, nt=5, n_members=20, noise_amp=0.1, seed=7)
    locs, summaries = summarize_field(field, 2)
    return field, locs, summaries


def test_c04_formula_conformance(seeded_summaries):
    _, _, summaries = seeded_summaries
    for s in summaries:
        assert not s.degenerate
        hd = s.h + s.delta_h
        assert s.r0 == pytest.approx(hd * math.tan(s.alpha0 / 2), rel=1e-9)
        n0, n1 = np.linalg.norm(s.sigma0), np.linalg.norm(s.sigma1)
        assert s.r1 == pytest.approx(s.r0 * n1 / n0, rel=1e-9)
        assert s.alpha1 == pytest.approx(math.atan(hd / s.r1), rel=1e-9)
        assert s.r1 <= s.r0
        assert abs(float(s.sigma0 @ s.sigma1)) <= 1e-9 * n0 * n1
    print(f"ACCEPTANCE 4 PASS: r0/r1/alpha1 formulas hold at 1e-9 on {len(summaries)} locations")


def test_c05_scale_equivariance(seeded_summaries):
    field, _, _ = seeded_summaries
    rng = np.random.default_rng(SEED + 2)
    nx, ny, _ = field.dims
    checked = 0
    for _ in range(50):
        i, j = int(rng.integers(nx)), int(rng.integers(ny))
        t = int(rng.integers(field.nt))
        members = field.data[t, :, 0, j, i, :]
        a = summarize(members)
        b = summarize(3.0 * members)
        assert b.median_index == a.median_index
        assert b.alpha0 == pytest.approx(a.alpha0, rel=1e-9)
        for name in ("h", "delta_h", "r0", "r1"):
            assert getattr(b, name) == pytest.approx(3.0 * getattr(a, name), rel=1e-9)
        checked += 1
    print(f"ACCEPTANCE 5 PASS: x3 scaling equivariant on {checked} random locations")


def test_c06_mesh_validity_and_equivariance(seeded_summaries):
    field, locs, summaries = seeded_summaries
    styles = {kind: GlyphStyle(kind=kind, scale=0.2) for kind in
              ("squid", "cone", "comet", "tailed-disc")}
    n_meshes = 0
    for s in summaries:
        for kind, st in styles.items():
            mesh = build_glyph(s, st)
            assert mesh is not None
            validate_mesh(mesh)
            n_meshes += 1

    # squid base rim on the superellipse in the spread frame
    st = styles["squid"]
    for s in summaries:
        mesh = build_squid(s, st)
        u0, u1, axis = mesh.axes
        tip = s.max_magnitude * st.scale
        heights = mesh.positions @ axis
        rim = mesh.positions[np.isclose(heights, tip, atol=1e-9 * tip)]
        inplane = rim - tip * axis[None, :]
        x = inplane @ u0
        y = inplane @ u1
        vals = (
            np.abs(x / (s.r0 * st.scale)) ** st.exponent
            + np.abs(y / (s.r1 * st.scale)) ** st.exponent
        )
        on_curve = np.isclose(vals, 1.0, atol=1e-6)
        assert on_curve.sum() >= st.segments

    # rotation equivariance of build_squid
    ang = 0.61
    c, si = math.cos(ang), math.sin(ang)
    R = np.array([[c, -si, 0], [si, c, 0], [0, 0, 1.0]]) @ np.array(
        [[1, 0, 0], [0, c, -si], [0, si, c]]
    )
    for s in summaries[::7]:
        base = build_squid(s, st)
        rot = replace(s, median_dir=R @ s.median_dir, sigma0=R @ s.sigma0, sigma1=R @ s.sigma1)
        mesh = build_squid(rot, st)
        assert np.abs(mesh.positions - base.positions @ R.T).max() < 1e-6
    print(f"ACCEPTANCE 6 PASS: {n_meshes} meshes valid; rim superellipse and rotation at 1e-6")


def test_c07_generator_invariants():
    f = generate_synthetic(nx=10, ny=10, nt=5, n_members=20, noise_amp=0.0, seed=7)
    planar_sq = (f.data[..., 0] ** 2 + f.data[..., 1] ** 2)[:, 0, 0]  # (nt, ny, nx)
    assert np.abs(planar_sq - planar_sq[0]).max() < 1e-9
    assert np.all(f.data[..., 2] == 0.5)
    g1 = generate_synthetic(nx=10, ny=10, nt=5, n_members=20, noise_amp=0.1, seed=7)
    g2 = generate_synthetic(nx=10, ny=10, nt=5, n_members=20, noise_amp=0.1, seed=7)
    assert g1.data.tobytes() == g2.data.tobytes()
    print("ACCEPTANCE 7 PASS: planar norm constant at 1e-9, w = 0.5, seeded bytes reproducible")


def _cli(*args) -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "vecuq.cli", *args], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr


def test_c08_end_to_end_desk_scale(tmp_path):
    start = time.perf_counter()
    ds = tmp_path / "synthetic"
    _cli(
        "gen-synthetic", "--nx", "10", "--ny", "10", "--nt", "5",
        "--members", "20", "--noise", "0.1", "--seed", "7", "--out", str(ds),
    )
    _cli("depth", "--dataset", str(ds), "--t", "0", "--out", str(tmp_path / "depth.csv"))
    _cli("summarize", "--dataset", str(ds), "--t", "0", "--out", str(tmp_path / "summary.json"))
    _cli(
        "glyphs", "--dataset", str(ds), "--t", "0", "--type", "squid",
        "--format", "obj", "--out", str(tmp_path / "scene.obj"),
    )
    _cli("magvar", "--dataset", str(ds), "--out", str(tmp_path / "magvar.csv"))
    synthetic_elapsed = time.perf_counter() - start
    assert synthetic_elapsed < 60.0, f"synthetic pipeline took {synthetic_elapsed:.1f}s"
    for name in ("depth.csv", "summary.json", "scene.obj", "magvar.csv"):
        assert (tmp_path / name).stat().st_size > 0
    obj_groups = [
        ln for ln in (tmp_path / "scene.obj").read_text().splitlines() if ln.startswith("g ")
    ]
    assert len(obj_groups) == 100  # one group per 10x10x1 location

    start = time.perf_counter()
    rng = np.random.default_rng(SEED + 3)
    steps = [rng.normal(size=(10, 50, 50, 3)).astype(np.float32) for _ in range(4)]
    manifest = {
        "name": "isabel-shaped",
        "dims": [50, 50, 10],
        "nt": 4,
        "component_files": "wind_{component}_{t:02d}.bin",
    }
    mpath = write_brick(steps, manifest, tmp_path / "brick")
    ens_dir = tmp_path / "ensemble"
    _cli(
        "ingest-brick", "--manifest", str(mpath),
        "--stride", "5,5,1", "--patch", "5,5,1", "--out", str(ens_dir),
    )
    ens = load_dataset(ens_dir)
    assert ens.dims == (10, 10, 10)
    assert ens.nt == 4
    assert ens.n_members == 25
    for t in range(4):
        _cli(
            "summarize", "--dataset", str(ens_dir), "--t", str(t),
            "--out", str(tmp_path / f"ens_summary_{t}.json"),
        )
    brick_elapsed = time.perf_counter() - start
    assert brick_elapsed < 120.0, f"brick pipeline took {brick_elapsed:.1f}s"
    print(
        f"ACCEPTANCE 8 PASS: synthetic pipeline {synthetic_elapsed:.1f}s (<60s), "
        f"brick ingest+summaries {brick_elapsed:.1f}s (<120s)"
    )


def test_c09_server_contract(tmp_path):
    ds = tmp_path / "demo"
    _cli(
        "gen-synthetic", "--nx", "10", "--ny", "10", "--nt", "5",
        "--members", "20", "--noise", "0.1", "--seed", "7", "--out", str(ds),
    )
    from vecuq.field import EnsembleField, write_dataset

    zero = EnsembleField(
        name="allzero", dims=(2, 2, 1), nt=1, n_members=6,
        spacing=(1.0, 1.0, 1.0), origin=(0.0, 0.0, 0.0),
        data=np.zeros((1, 6, 1, 2, 2, 3)),
    )
    write_dataset(zero, tmp_path / "allzero")

    cli_out = tmp_path / "cli_glyphs.json"
    _cli(
        "glyphs", "--dataset", str(ds), "--t", "1", "--type", "squid",
        "--exponent", "2.5", "--segments", "48", "--scale", "1.0",
        "--format", "json", "--out", str(cli_out),
    )

    client = TestClient(create_app(tmp_path))
    api = client.get("/api/datasets/demo/glyphs?t=1&type=squid&exponent=2.5&segments=48&scale=1.0")
    assert api.status_code == 200
    assert api.content == cli_out.read_bytes(), "API payload must equal CLI export bytes"

    depth_doc = json.loads(client.get("/api/datasets/demo/depth?t=1").content)
    for row_idx in (0, 42, 99):
        loc = depth_doc["locations"][row_idx]
        point = json.loads(
            client.get(
                f"/api/datasets/demo/point?t=1&i={loc[0]}&j={loc[1]}&k={loc[2]}"
            ).content
        )
        assert [d["depth"] for d in point["details"]] == depth_doc["depth"][row_idx]

    injections = [
        ("/api/datasets/nope/depth?t=0", 404, "unknown_dataset"),
        ("/api/datasets/demo/point?t=0&i=99&j=0&k=0", 404, "index_out_of_range"),
        ("/api/datasets/demo/depth?t=99", 404, "index_out_of_range"),
        ("/api/datasets/demo/depth?t=zz", 400, "bad_parameter"),
        ("/api/datasets/demo/glyphs?t=0&region=bogus", 400, "bad_parameter"),
        ("/api/datasets/demo/glyphs", 400, "bad_parameter"),
        ("/api/datasets/allzero/glyphs?t=0", 422, "degenerate_computation"),
    ]
    for url, status, code in injections:
        r = client.get(url)
        assert r.status_code == status, url
        assert r.json()["code"] == code, url
    print("ACCEPTANCE 9 PASS: API == CLI bytes, depth/point consistent, error table verified")
