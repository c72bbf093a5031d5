import threading

import pytest
from fastapi.testclient import TestClient

from stc_engine.server import create_app


@pytest.fixture(scope="module")
def client(toy_bundle):
    return TestClient(create_app(toy_bundle), raise_server_exceptions=False)


def test_health(client):
    r = client.get("/v1/health")
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == "ok"
    assert body["n_posts"] == 4
    assert body["pv_dim"] == 8


def test_manifest(client, toy_bundle):
    r = client.get("/v1/manifest")
    assert r.status_code == 200
    assert r.json() == toy_bundle.manifest.to_dict()


def test_chat_happy_path(client):
    r = client.post("/v1/chat", json={"query": "broke up today", "seed": 1})
    assert r.status_code == 200
    body = r.json()
    assert isinstance(body["text"], str) and body["text"]
    assert "low_confidence" in body
    assert "debug" not in body


def test_chat_empty_query_422(client):
    r = client.post("/v1/chat", json={"query": "   "})
    assert r.status_code == 422
    assert r.json()["error"] == "empty_query"


def test_chat_malformed_body_400(client):
    r = client.post("/v1/chat", json={"seed": 1})
    assert r.status_code == 400
    assert r.json()["error"] == "malformed_request"


def test_chat_non_json_body_400(client):
    r = client.post(
        "/v1/chat", content=b"not json", headers={"content-type": "application/json"}
    )
    assert r.status_code == 400


def test_chat_debug_chosen_in_pool(client):
    r = client.post(
        "/v1/chat", json={"query": "anniversary trip", "seed": 4, "debug": True}
    )
    assert r.status_code == 200
    body = r.json()
    debug = body["debug"]
    assert debug["chosen"] in debug["pool"]
    assert body["text"] == debug["chosen"]["text"]
    assert len(debug["matched"]) <= 5
    assert len(debug["pool"]) <= 10


def test_seeded_requests_identical(client):
    payload = {"query": "cafe tomorrow", "seed": 9, "debug": True}
    a = client.post("/v1/chat", json=payload).json()
    b = client.post("/v1/chat", json=payload).json()
    assert a == b


def test_concurrent_requests_do_not_interleave(client):
    queries = ["broke up", "first date", "anniversary", "long distance"]
    errors = []

    def hammer(i):
        q = queries[i % len(queries)]
        r = client.post("/v1/chat", json={"query": q, "seed": i, "debug": True})
        if r.status_code != 200:
            errors.append(r.status_code)
            return
        body = r.json()
        if body["debug"]["chosen"] not in body["debug"]["pool"]:
            errors.append("chosen not in pool")
        if body["text"] != body["debug"]["chosen"]["text"]:
            errors.append("text mismatch")

    threads = [threading.Thread(target=hammer, args=(i,)) for i in range(32)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
