import pytest
from fastapi.testclient import TestClient

from conftest import RUNNING_EXAMPLE_ID
from main import app
from schemas.config import RunConfig
from schemas.report import Corpus
from services.ingestion_service import add_reports
from services.pipeline_service import MiningService


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def state_dir(tmp_path, running_example, monkeypatch):
    state = tmp_path / "state"
    service = MiningService(RunConfig())
    result = service.run(add_reports(Corpus(), running_example))
    service.write(result, str(state), None)
    monkeypatch.setenv("MINER_STATE_DIR", str(state))
    return state


def test_health_without_state(client, tmp_path, monkeypatch):
    monkeypatch.setenv("MINER_STATE_DIR", str(tmp_path / "none"))
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy"
    assert body["storage"]["files"] == {"version.json": False, "keywords.tsv": False, "model.txt": False}


def test_stats_without_state_is_400(client, tmp_path, monkeypatch):
    monkeypatch.setenv("MINER_STATE_DIR", str(tmp_path / "none"))
    response = client.get("/api/stats")
    assert response.status_code == 400
    assert "mine" in response.json()["detail"]


def test_stats(client, state_dir):
    stats = client.get("/api/stats").json()
    assert stats["corpus_version"] == 1
    assert stats["model_version"] == 1
    assert stats["samples"] == 10
    assert stats["vocabulary_size"] > 0
    assert stats["fingerprint"] == RunConfig().fingerprint()
    assert all(client.get("/health").json()["storage"]["files"].values())


def test_list_samples_paged(client, state_dir):
    page = client.get("/api/samples", params={"limit": 3, "offset": 1}).json()
    assert [item["sample_id"] for item in page] == ["bg01", "bg02", "bg03"]
    assert client.get("/api/samples", params={"limit": 0}).status_code == 422


def test_sample_keywords(client, state_dir):
    response = client.get(f"/api/samples/{RUNNING_EXAMPLE_ID}/keywords")
    assert response.status_code == 200
    body = response.json()
    assert body["sample_id"] == RUNNING_EXAMPLE_ID
    assert body["keywords"][0]["token"] == "flystudio"
    assert body["formatted"].startswith("flystudio,10")
    ascii_body = client.get(f"/api/samples/{RUNNING_EXAMPLE_ID}/keywords", params={"ascii_sep": True}).json()
    assert "‖" not in ascii_body["formatted"]


def test_unknown_sample_is_404(client, state_dir):
    assert client.get("/api/samples/deadbeef/keywords").status_code == 404


def test_tokenize(client):
    response = client.post("/api/tokenize", json={"label": "Win32/Flystudio.worm.Gen"})
    assert response.status_code == 200
    assert response.json()["tokens"] == ["win32", "flystudio", "worm", "gen"]
