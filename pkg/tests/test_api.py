"""
Tests for the HTTP API
"""
import pytest
from fastapi.testclient import TestClient

from backend.main import app


@pytest.fixture
def client(output_dir):
    return TestClient(app)


@pytest.fixture
def simulated_run(client, short_scenario):
    response = client.post("/api/simulate", json={"scenario": short_scenario.model_dump(mode="json"), "seed": 5})
    assert response.status_code == 200
    return response.json()


def _radar(t, x):
    return {"timestamp": t, "modality": "radar", "position": [x, 300.0, 50.0], "track_id": 1}


def test_root_and_health(client):
    assert client.get("/").json()["docs"] == "/docs"
    assert client.get("/health").json()["status"] == "healthy"


def test_simulate_writes_run(client, simulated_run, output_dir):
    assert simulated_run["report"]["rng_seed"] == 5
    run_dir = output_dir / simulated_run["run_id"]
    for name in ("gt.csv", "radar.csv", "rf.csv", "manifest.json"):
        assert (run_dir / name).is_file()


def test_simulate_fuse_evaluate(client, simulated_run):
    fused = client.post("/api/fuse", json={"source_run_id": simulated_run["run_id"]})
    assert fused.status_code == 200
    body = fused.json()
    assert body["report"]["mode"] == "fused"
    assert body["report"]["updated"] > 0

    evaluated = client.post(
        "/api/evaluate",
        json={
            "track_run_id": body["run_id"],
            "truth_run_id": simulated_run["run_id"],
            "radar_origin": {"east_m": 0.0, "north_m": 0.0, "up_m": 10.0},
        },
    )
    assert evaluated.status_code == 200
    report = evaluated.json()
    assert report["errors"]["coverage_pct"] == 100.0
    assert report["consistency"]["count"] > 0

    stored = client.get(f"/api/runs/{body['run_id']}")
    assert stored.status_code == 200
    assert "report.json" in stored.json()["reports"]
    assert stored.json()["manifest"]["subcommand"] == "fuse"


def test_inline_fuse(client):
    radar = [_radar(0.25 * k, 200.0 + 1.25 * k) for k in range(40)]
    response = client.post("/api/fuse", json={"radar": radar, "mode": "radar-only"})
    assert response.status_code == 200
    assert response.json()["report"]["updated"] == 40


def test_unsorted_inline_input(client):
    radar = [_radar(1.0, 200.0), _radar(0.5, 200.0)]
    assert client.post("/api/fuse", json={"radar": radar}).status_code == 400


def test_empty_fuse_is_unprocessable(client):
    assert client.post("/api/fuse", json={}).status_code == 422


def test_unknown_source_run(client):
    assert client.post("/api/fuse", json={"source_run_id": "simulate_missing"}).status_code == 404


def test_unknown_run(client):
    assert client.get("/api/runs/nothing_here").status_code == 404


def test_evaluate_unknown_runs(client):
    response = client.post("/api/evaluate", json={"track_run_id": "a", "truth_run_id": "b"})
    assert response.status_code == 404
