import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from vecuq.cli import main
from vecuq.field import EnsembleField, write_dataset
from vecuq.server import create_app


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("served")
    rc = main(
        [
            "gen-synthetic",
            "--nx", "10", "--ny", "10", "--nt", "5",
            "--members", "20", "--noise", "0.1", "--seed", "7",
            "--out", str(root / "demo"),
        ]
    )
    assert rc == 0
    zero = EnsembleField(
        name="allzero",
        dims=(2, 2, 1),
        nt=1,
        n_members=6,
        spacing=(1.0, 1.0, 1.0),
        origin=(0.0, 0.0, 0.0),
        data=np.zeros((1, 6, 1, 2, 2, 3)),
    )
    write_dataset(zero, root / "allzero")
    return root


@pytest.fixture(scope="module")
def client(data_dir):
    return TestClient(create_app(data_dir))


def test_list_datasets(client):
    r = client.get("/api/datasets")
    assert r.status_code == 200
    docs = {d["id"]: d for d in r.json()}
    assert docs["demo"]["dims"] == [10, 10, 1]
    assert docs["demo"]["nt"] == 5
    assert docs["demo"]["n_members"] == 20


def test_glyphs_matches_cli_bytes(client, data_dir, tmp_path):
    out = tmp_path / "cli.json"
    rc = main(
        [
            "glyphs", "--dataset", str(data_dir / "demo"), "--t", "2",
            "--type", "squid", "--exponent", "2.5", "--segments", "48",
            "--scale", "1.0", "--format", "json", "--out", str(out),
        ]
    )
    assert rc == 0
    r = client.get("/api/datasets/demo/glyphs?t=2&type=squid&exponent=2.5&segments=48&scale=1.0")
    assert r.status_code == 200
    assert r.content == out.read_bytes()


def test_glyphs_default_params_stable(client):
    a = client.get("/api/datasets/demo/glyphs?t=0")
    b = client.get("/api/datasets/demo/glyphs?t=0")
    assert a.status_code == 200
    assert a.content == b.content


def test_glyphs_region_scale_matches_global(client):
    full = json.loads(client.get("/api/datasets/demo/glyphs?t=1").content)
    local = json.loads(
        client.get("/api/datasets/demo/glyphs?t=1&region=2:4,2:4,0:0").content
    )
    assert local["scale"] == full["scale"]
    assert len(local["glyphs"]) == 9
    assert len(full["glyphs"]) == 100


def test_depth_matches_point_depths(client):
    depth = json.loads(client.get("/api/datasets/demo/depth?t=1").content)
    loc = depth["locations"][13]
    row = depth["depth"][13]
    r = client.get(
        f"/api/datasets/demo/point?t=1&i={loc[0]}&j={loc[1]}&k={loc[2]}&outliers=0"
    )
    pts = json.loads(r.content)["details"]
    assert [p["depth"] for p in pts] == row


def test_depth_region_rows(client):
    r = client.get("/api/datasets/demo/depth?t=0&region=0:1,0:1,0:0")
    doc = json.loads(r.content)
    assert len(doc["locations"]) == 4
    assert all(len(row) == 20 for row in doc["depth"])


def test_point_outliers_pair(client):
    r = client.get("/api/datasets/demo/point?t=0&i=3&j=3&k=0&outliers=2")
    doc = json.loads(r.content)
    flagged = [d for d in doc["details"] if d["is_outlier_candidate"]]
    assert len(flagged) == 2
    assert doc["summary_retained"] != doc["summary_full"]


def test_magvar_series_and_slice(client):
    doc = json.loads(client.get("/api/datasets/demo/magvar").content)
    assert len(doc["series"]) == 5
    doc_t = json.loads(client.get("/api/datasets/demo/magvar?t=3").content)
    assert len(doc_t["slice"]) == 100
    assert doc_t["series"] == doc["series"]


def test_payload_stable_across_instances(data_dir):
    c1 = TestClient(create_app(data_dir))
    c2 = TestClient(create_app(data_dir))
    q = "/api/datasets/demo/glyphs?t=1&type=comet"
    assert c1.get(q).content == c2.get(q).content


# --- error table ---------------------------------------------------------------


def test_unknown_dataset_404(client):
    r = client.get("/api/datasets/nope/depth?t=0")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_dataset"


def test_index_out_of_range_404(client):
    r = client.get("/api/datasets/demo/point?t=0&i=99&j=0&k=0")
    assert r.status_code == 404
    assert r.json()["code"] == "index_out_of_range"
    r = client.get("/api/datasets/demo/depth?t=9")
    assert r.status_code == 404
    r = client.get("/api/datasets/demo/glyphs?t=0&region=0:99,0:0,0:0")
    assert r.status_code == 404


def test_bad_parameter_400(client):
    r = client.get("/api/datasets/demo/depth?t=abc")
    assert r.status_code == 400
    assert r.json()["code"] == "bad_parameter"
    r = client.get("/api/datasets/demo/glyphs?t=0&region=zzz")
    assert r.status_code == 400
    r = client.get("/api/datasets/demo/glyphs")
    assert r.status_code == 400
    r = client.get("/api/datasets/demo/point?t=0&i=0&j=0&k=0&outliers=-1")
    assert r.status_code == 400
    r = client.get("/api/datasets/demo/glyphs?t=0&type=banana")
    assert r.status_code == 400


def test_degenerate_computation_422(client):
    r = client.get("/api/datasets/allzero/glyphs?t=0")
    assert r.status_code == 422
    assert r.json()["code"] == "degenerate_computation"


def test_error_body_shape(client):
    r = client.get("/api/datasets/nope/magvar")
    body = r.json()
    assert set(body) == {"status", "code", "message"}
    assert body["status"] == 404


def test_summary_cache_computed_once(data_dir, monkeypatch):
    import threading

    import vecuq.server as server_mod
    from vecuq.server import Registry

    calls = []
    real = server_mod.field_summaries

    def counting(field, t):
        calls.append(t)
        return real(field, t)

    monkeypatch.setattr(server_mod, "field_summaries", counting)
    registry = Registry(data_dir)
    threads = [
        threading.Thread(target=lambda: registry.summaries("demo", 4)) for _ in range(8)
    ]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert calls == [4]
    # cached value reused afterwards
    registry.summaries("demo", 4)
    assert calls == [4]


def test_cors_flag_enables_origin(data_dir):
    app = create_app(data_dir, cors_origins=["http://localhost:5173"])
    c = TestClient(app)
    r = c.get("/api/datasets", headers={"Origin": "http://localhost:5173"})
    assert r.headers.get("access-control-allow-origin") == "http://localhost:5173"
    plain = TestClient(create_app(data_dir)).get("/api/datasets")
    assert "access-control-allow-origin" not in plain.headers
