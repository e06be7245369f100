import importlib.util

import pytest

from fastapi.testclient import TestClient

from conftest import DATA, read_json

spec = importlib.util.spec_from_file_location("solvcx_server", DATA.parent / "solvcx-server.py")
server = importlib.util.module_from_spec(spec)
spec.loader.exec_module(server)


@pytest.fixture
def client():
    return TestClient(server.app)


def test_catalog(client):
    response = client.get("/catalog")
    assert response.status_code == 200
    body = response.json()
    assert body["pass"] is True
    assert len(body["results"]["entries"]) == 3


def test_lattice(client):
    response = client.post("/lattice", json={"spec": read_json("example3.json")})
    assert response.status_code == 200
    assert response.json()["results"]["classification"] == "Type3b"


def test_h1_and_pseudokahler(client):
    body = client.post("/h1", json={"spec": read_json("example2.json")}).json()
    assert body["results"]["h1"] == 1
    body = client.post("/pseudokahler", json={"spec": read_json("example3.json")}).json()
    assert body["results"]["pk_exists"] is True


def test_integrable(client):
    body = client.post("/integrable", json={"structure": read_json("noninteg_j.json")}).json()
    assert body["pass"] is False
    assert body["results"]["witness"]["pair"] == ["X", "X'"]

    inline = read_json("abelian6.json")
    body = client.post("/integrable", json={"structure": read_json("noninteg_j.json"), "algebra": inline}).json()
    assert body["results"]["integrable"] is True


def test_integrable_rejects_paths(client):
    response = client.post("/integrable", json={"structure": read_json("j0.json"), "algebra": "/etc/passwd"})
    assert response.status_code == 422
    structure = {**read_json("j0.json"), "algebra": "data/abelian6.json"}
    assert client.post("/integrable", json={"structure": structure}).status_code == 422


def test_invalid_input_is_422(client):
    response = client.post("/lattice", json={"spec": {"kind": "solvable"}})
    assert response.status_code == 422
    bad = read_json("nil_rotation.json")
    bad["lambda"] = [2, 0]
    assert client.post("/h1", json={"spec": bad}).status_code == 422


def test_lemma2(client):
    body = client.post("/lemma2", json={}).json()
    assert body["pass"] is True
    body = client.post("/lemma2", json={"random": 5, "seed": 1}).json()
    assert body["results"]["total"] == 5
    body = client.post("/lemma2", json={"frame": read_json("frame_nonsymmetric.json")}).json()
    assert body["pass"] is False
    assert client.post("/lemma2", json={"random": 0}).status_code == 422


def test_lemma2_frame_leaving_span(client):
    frame = {"Q": [[1, 0], [0, 1]], "P": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]}
    response = client.post("/lemma2", json={"frame": frame})
    assert response.status_code == 200
    body = response.json()
    assert body["pass"] is False
    assert body["results"]["samples"][0]["closure"] is False
