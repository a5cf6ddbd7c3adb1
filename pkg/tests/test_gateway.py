"""Gateway HTTP contract tests (in-process via the ASGI test client)."""

import json
import shutil
import threading
import time

import pytest
from fastapi.testclient import TestClient

from govgate.gateway import GatewayRuntime, create_app
from govgate.harness import builtin_suite_path

DROP_INPUT = "Please clean up: drop the analytics database."
CRM_INPUT = "delete every contact in CRM"
HEALTHCARE_INPUT = "find primary care doctors near me"


@pytest.fixture
def store_dir(tmp_path):
    target = tmp_path / "store"
    shutil.copytree(builtin_suite_path("demo") / "policies", target)
    return target


@pytest.fixture
def runtime(store_dir):
    return GatewayRuntime(store_dir, scenario_bank=builtin_suite_path("demo"))


@pytest.fixture
def client(runtime):
    with TestClient(create_app(runtime), raise_server_exceptions=False) as test_client:
        yield test_client


def pause_session(client):
    response = client.post("/v1/sessions", json={"input": DROP_INPUT})
    assert response.status_code == 201
    body = response.json()
    assert body["phase"] == "awaiting_approval"
    return body["session_id"]


class TestSessions:
    def test_create_returns_id_and_phase(self, client):
        response = client.post("/v1/sessions", json={"input": "hello there"})
        assert response.status_code == 201
        body = response.json()
        assert body["phase"] == "completed"
        assert body["session_id"]

    def test_blocked_session_reports_phase(self, client):
        response = client.post("/v1/sessions", json={"input": CRM_INPUT})
        assert response.json()["phase"] == "blocked"

    def test_get_session_summary(self, client):
        session_id = pause_session(client)
        response = client.get(f"/v1/sessions/{session_id}")
        assert response.status_code == 200
        body = response.json()
        assert body["phase"] == "awaiting_approval"
        assert body["pending_request_id"]

    def test_unknown_session_404(self, client):
        response = client.get("/v1/sessions/nope")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_session"

    def test_missing_input_400(self, client):
        response = client.post("/v1/sessions", json={})
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_trace_is_ndjson_with_filter(self, client):
        session_id = pause_session(client)
        response = client.get(f"/v1/sessions/{session_id}/trace")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("application/x-ndjson")
        events = [json.loads(line) for line in response.text.strip().split("\n")]
        assert [e["sequence"] for e in events] == list(range(1, len(events) + 1))

        filtered = client.get(
            f"/v1/sessions/{session_id}/trace", params={"from_sequence": 5}
        )
        sequences = [json.loads(line)["sequence"] for line in filtered.text.strip().split("\n")]
        assert sequences and sequences[0] == 5
        assert all(s >= 5 for s in sequences)


class TestApprovals:
    def test_pending_lists_oldest_first(self, client):
        first = pause_session(client)
        second = pause_session(client)
        response = client.get("/v1/approvals/pending")
        assert response.status_code == 200
        pending = response.json()
        assert [p["session"] for p in pending] == [first, second]
        assert all(p["status"] == "pending" for p in pending)
        assert all(p["tool_name"] == "drop_database" for p in pending)

    def test_decision_approve_resumes_atomically(self, client):
        session_id = pause_session(client)
        request_id = client.get("/v1/approvals/pending").json()[0]["id"]
        response = client.post(
            f"/v1/approvals/{request_id}/decision",
            json={"decision": "approve", "actor": "ops@example"},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "approved"
        assert body["session_phase"] == "completed"
        # after a 200 decision the session is never still awaiting approval
        assert client.get(f"/v1/sessions/{session_id}").json()["phase"] == "completed"
        assert client.get("/v1/approvals/pending").json() == []

    def test_decision_deny_terminates(self, client):
        session_id = pause_session(client)
        request_id = client.get("/v1/approvals/pending").json()[0]["id"]
        response = client.post(
            f"/v1/approvals/{request_id}/decision",
            json={"decision": "deny", "actor": "ops"},
        )
        assert response.json()["session_phase"] == "denied"
        assert client.get(f"/v1/sessions/{session_id}").json()["phase"] == "denied"

    def test_double_decision_conflicts(self, client):
        pause_session(client)
        request_id = client.get("/v1/approvals/pending").json()[0]["id"]
        first = client.post(
            f"/v1/approvals/{request_id}/decision",
            json={"decision": "deny", "actor": "ops"},
        )
        assert first.status_code == 200
        second = client.post(
            f"/v1/approvals/{request_id}/decision",
            json={"decision": "approve", "actor": "ops"},
        )
        assert second.status_code == 409
        assert second.json()["code"] == "already_resolved"

    def test_unknown_request_404(self, client):
        response = client.post(
            "/v1/approvals/nope/decision", json={"decision": "deny", "actor": "ops"}
        )
        assert response.status_code == 404

    def test_invalid_decision_400(self, client):
        pause_session(client)
        request_id = client.get("/v1/approvals/pending").json()[0]["id"]
        response = client.post(
            f"/v1/approvals/{request_id}/decision",
            json={"decision": "maybe", "actor": "ops"},
        )
        assert response.status_code == 400

    def test_watch_times_out_with_204(self, client):
        started = time.monotonic()
        response = client.get("/v1/approvals/watch", params={"timeout_s": 0.4})
        elapsed = time.monotonic() - started
        assert response.status_code == 204
        assert elapsed >= 0.35

    def test_watch_returns_existing_pending_immediately(self, client):
        pause_session(client)
        started = time.monotonic()
        response = client.get("/v1/approvals/watch", params={"timeout_s": 5})
        assert time.monotonic() - started < 1.0
        assert response.status_code == 200
        assert len(response.json()) == 1

    def test_watch_wakes_on_new_request(self, runtime):
        app = create_app(runtime)
        with TestClient(app) as watch_client:
            result = {}

            def watch():
                result["response"] = watch_client.get(
                    "/v1/approvals/watch", params={"timeout_s": 10}
                )

            watcher = threading.Thread(target=watch)
            watcher.start()
            time.sleep(0.2)
            with TestClient(app) as other:
                other.post("/v1/sessions", json={"input": DROP_INPUT})
            watcher.join(timeout=5)
            assert not watcher.is_alive()
            assert result["response"].status_code == 200


class TestPolicies:
    def test_list_by_kind(self, client):
        response = client.get("/v1/policies", params={"kind": "tool_approval"})
        assert response.status_code == 200
        assert [p["id"] for p in response.json()] == ["database-drop-approval"]

    def test_put_get_round_trip_is_byte_identical(self, client):
        text = (
            "---\n"
            "id: export-approval\n"
            "kind: tool_approval\n"
            "priority: 75\n"
            "patterns: ['export_*']\n"
            "auto_approve: false\n"
            "---\n"
        )
        put = client.put("/v1/policies/export-approval", content=text.encode("utf-8"))
        assert put.status_code == 200, put.text
        got = client.get("/v1/policies/export-approval")
        assert got.text == text

    def test_put_invalid_policy_400_with_violations(self, client):
        bad = (
            "---\n"
            "id: bad-policy\n"
            "kind: playbook\n"
            "priority: 10\n"
            "triggers:\n"
            "- type: natural_language\n"
            "  queries: [q]\n"
            "  threshold: 1.5\n"
            "---\n"
            "body\n"
        )
        response = client.put("/v1/policies/bad-policy", content=bad.encode("utf-8"))
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "validation_failed"
        assert body["violations"]

    def test_put_id_mismatch_400(self, client):
        text = "---\nid: a\nkind: tool_approval\npriority: 5\npatterns: ['x']\n---\n"
        response = client.put("/v1/policies/b", content=text.encode("utf-8"))
        assert response.status_code == 400
        assert response.json()["code"] == "id_mismatch"

    def test_delete_policy(self, client, store_dir):
        assert client.delete("/v1/policies/crm-delete-guard").json() == {"deleted": True}
        assert client.delete("/v1/policies/crm-delete-guard").status_code == 404
        assert not (store_dir / "crm-delete-guard.md").exists()
        # the guard is gone: the CRM input now flows through
        response = client.post("/v1/sessions", json={"input": CRM_INPUT})
        assert response.json()["phase"] == "completed"

    def test_put_policy_persists_to_store_dir(self, client, store_dir):
        text = "---\nid: new-gate\nkind: tool_approval\npriority: 9\npatterns: ['rm_*']\n---\n"
        client.put("/v1/policies/new-gate", content=text.encode("utf-8"))
        assert (store_dir / "new-gate.md").read_text(encoding="utf-8") == text


class TestPersistence:
    def test_paused_sessions_survive_restart_with_flag(self, store_dir):
        first = GatewayRuntime(
            store_dir, persist_paused=True, scenario_bank=builtin_suite_path("demo")
        )
        with TestClient(create_app(first)) as client:
            session_id = pause_session(client)
            request_id = client.get("/v1/approvals/pending").json()[0]["id"]

        reborn = GatewayRuntime(
            store_dir, persist_paused=True, scenario_bank=builtin_suite_path("demo")
        )
        with TestClient(create_app(reborn)) as client:
            pending = client.get("/v1/approvals/pending").json()
            assert [p["id"] for p in pending] == [request_id]
            response = client.post(
                f"/v1/approvals/{request_id}/decision",
                json={"decision": "approve", "actor": "ops"},
            )
            assert response.json()["session_phase"] == "completed"
            summary = client.get(f"/v1/sessions/{session_id}").json()
            assert summary["phase"] == "completed"
            assert summary["tool_invocations"] == ["lookup_contacts", "drop_database"]

    def test_paused_sessions_lost_without_flag(self, store_dir):
        first = GatewayRuntime(store_dir, scenario_bank=builtin_suite_path("demo"))
        with TestClient(create_app(first)) as client:
            pause_session(client)
        reborn = GatewayRuntime(store_dir, scenario_bank=builtin_suite_path("demo"))
        with TestClient(create_app(reborn)) as client:
            assert client.get("/v1/approvals/pending").json() == []
