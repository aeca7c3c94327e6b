import json
import threading

import pytest
from fastapi.testclient import TestClient

from fridgeqa.generator import generate_scene
from fridgeqa.httpapi import create_app
from fridgeqa.oracle import answer_text, evaluate
from fridgeqa.parser import GrammarMode, parse_question
from fridgeqa.service import (
    APOLOGY_TEXT,
    FixedSceneSource,
    QaService,
    QueueFull,
    SeededRotationSource,
    UnknownRequestId,
)


@pytest.fixture()
def scene():
    return generate_scene(123)


@pytest.fixture()
def service(scene, tmp_path):
    return QaService(
        FixedSceneSource(scene), feedback_log=tmp_path / "feedback.jsonl", batch_linger_s=0.0
    )


def test_submit_assigns_increasing_ids(service):
    first = service.submit("s1", "any apples?")
    second = service.submit("s1", "any milk?")
    assert second > first


def test_queue_full_backpressure(scene):
    service = QaService(FixedSceneSource(scene), queue_bound=2)
    service.submit("s", "milk?")
    service.submit("s", "milk?")
    with pytest.raises(QueueFull):
        service.submit("s", "milk?")


def test_drain_empty_queue(service):
    assert service.drain_batch() == []


def test_batch_shares_one_snapshot(service, scene):
    for i in range(5):
        service.submit("s", "any bananas?")
    responses = service.drain_batch(8)
    assert len(responses) == 5
    assert len({r.scene_version for r in responses}) == 1
    assert service.batch_sizes == [5]
    expected = answer_text(evaluate(parse_question("any bananas?"), scene))
    assert all(r.answer_text == expected for r in responses)


def test_batch_respects_max(service):
    for _ in range(5):
        service.submit("s", "milk?")
    assert len(service.drain_batch(3)) == 3
    assert len(service.drain_batch(3)) == 2


def test_parse_failure_answers_apologetically(service):
    service.submit("s", "zzzz?")
    (response,) = service.drain_batch()
    assert response.answer_text == APOLOGY_TEXT
    assert response.program_text is None
    assert response.snapshot_link == f"/snapshot/{response.scene_version}"
    assert service.snapshot_svg(response.scene_version) is not None


def test_timing_fields(service):
    service.submit("s", "any apples?")
    (response,) = service.drain_batch()
    t = response.timing
    assert t.queue_ms >= 0 and t.parse_ms >= 0 and t.evaluate_ms >= 0
    assert t.total_ms >= t.queue_ms + t.parse_ms + t.evaluate_ms - 0.5


def test_feedback_log(service, tmp_path):
    service.submit("s", "milk?")
    (response,) = service.drain_batch()
    service.record_feedback(response.request_id, "like")
    service.record_feedback(response.request_id, "emoji:thumbs-up")
    lines = (tmp_path / "feedback.jsonl").read_text().splitlines()
    assert len(lines) == 2
    parsed = [json.loads(line) for line in lines]
    assert parsed[0]["reaction"] == "like"
    assert parsed[1]["reaction"] == "emoji:thumbs-up"
    assert all(p["request_id"] == response.request_id for p in parsed)


def test_feedback_unknown_id(service):
    with pytest.raises(UnknownRequestId):
        service.record_feedback(999, "like")


def test_feedback_bad_reaction(service):
    service.submit("s", "milk?")
    (response,) = service.drain_batch()
    with pytest.raises(ValueError):
        service.record_feedback(response.request_id, "meh")


def test_many_feedback_lines(service, tmp_path):
    service.submit("s", "milk?")
    (response,) = service.drain_batch()
    for _ in range(100):
        service.record_feedback(response.request_id, "like")
    lines = (tmp_path / "feedback.jsonl").read_text().splitlines()
    assert len(lines) == 100
    for line in lines:
        json.loads(line)


def test_rotation_keeps_recent_snapshots(tmp_path):
    service = QaService(SeededRotationSource(7, rotate_every=1), batch_linger_s=0.0)
    service.submit("s", "milk?")
    (first,) = service.drain_batch()
    service.submit("s", "milk?")
    (second,) = service.drain_batch()
    assert first.scene_version != second.scene_version
    # previous snapshot still retrievable for the session
    assert service.snapshot_svg(first.scene_version) is not None
    assert service.snapshot_svg(second.scene_version) is not None


def test_unknown_snapshot_version(service):
    assert service.snapshot_svg("v999-deadbeef") is None


def test_concurrent_load_exactly_once(scene, tmp_path):
    service = QaService(FixedSceneSource(scene), max_batch=16)
    clients, per_client = 10, 5
    responses = []
    lock = threading.Lock()

    def client(cid):
        for i in range(per_client):
            response = service.ask(f"client-{cid}", "any fresh fruits?")
            with lock:
                responses.append(response)

    with service:
        threads = [threading.Thread(target=client, args=(c,)) for c in range(clients)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    assert len(responses) == clients * per_client
    ids = [r.request_id for r in responses]
    assert len(set(ids)) == len(ids)
    assert sorted(ids) == list(range(1, clients * per_client + 1))
    expected = answer_text(evaluate(parse_question("any fresh fruits?"), scene))
    assert all(r.answer_text == expected for r in responses)


# -- HTTP layer ---------------------------------------------------------


@pytest.fixture()
def client(scene, tmp_path):
    service = QaService(
        FixedSceneSource(scene), feedback_log=tmp_path / "feedback.jsonl", batch_linger_s=0.0
    )
    with service:
        with TestClient(create_app(service)) as tc:
            yield tc, service


def test_http_ask(client, scene):
    tc, _ = client
    response = tc.post("/ask", json={"session_id": "web", "text": "any bananas?"})
    assert response.status_code == 200
    body = response.json()
    assert body["answer_text"] == answer_text(evaluate(parse_question("any bananas?"), scene))
    assert body["program_text"] == "exist class=banana"
    assert body["snapshot_link"].startswith("/snapshot/")
    assert body["timing"]["total_ms"] >= 0


def test_http_ask_parse_failure_has_no_program(client):
    tc, _ = client
    body = tc.post("/ask", json={"session_id": "web", "text": "qqqq?"}).json()
    assert body["answer_text"] == APOLOGY_TEXT
    assert body["program_text"] is None


def test_http_snapshot(client):
    tc, _ = client
    body = tc.post("/ask", json={"session_id": "web", "text": "milk?"}).json()
    snapshot = tc.get(body["snapshot_link"])
    assert snapshot.status_code == 200
    assert snapshot.headers["content-type"].startswith("image/svg+xml")
    assert snapshot.text.startswith("<svg")
    assert tc.get("/snapshot/v0-nope").status_code == 404


def test_http_feedback(client, tmp_path):
    tc, _ = client
    body = tc.post("/ask", json={"session_id": "web", "text": "milk?"}).json()
    ok = tc.post("/feedback", json={"request_id": body["request_id"], "reaction": "like"})
    assert ok.status_code == 204
    missing = tc.post("/feedback", json={"request_id": 10_000, "reaction": "like"})
    assert missing.status_code == 404
    bad = tc.post("/feedback", json={"request_id": body["request_id"], "reaction": "nah"})
    assert bad.status_code == 422
    lines = (tmp_path / "feedback.jsonl").read_text().splitlines()
    assert len(lines) == 1


def test_http_healthz(client):
    tc, _ = client
    assert tc.get("/healthz").json() == {"status": "ok"}


def test_http_queue_full_gives_429(scene):
    service = QaService(FixedSceneSource(scene), queue_bound=1)  # no executor running
    service.submit("s", "milk?")
    with TestClient(create_app(service)) as tc:
        response = tc.post("/ask", json={"session_id": "web", "text": "milk?"})
        assert response.status_code == 429
