"""HTTP surface over sessions, policies, approvals, and traces.

Every error response is ``{"code": ..., "message": ...}`` with status in
{400, 404, 409, 500}. Traces stream as NDJSON. Approval watching is a long
poll: the request returns as soon as any request is pending, or 204 after
the timeout.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from govgate.enact.approvals import ApprovalDecision
from govgate.errors import (
    AlreadyResolved,
    PolicyFileError,
    UnknownRequest,
    ValidationFailed,
)
from govgate.gateway.runtime import GatewayRuntime
from govgate.model.parsing import parse_policy_file
from govgate.model.types import PolicyKind

NDJSON = "application/x-ndjson"


def api_error(status: int, code: str, message: str, **extra: Any) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"code": code, "message": message, **extra}
    )


def create_app(runtime: GatewayRuntime) -> FastAPI:
    app = FastAPI(title="govgate", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return api_error(400, "bad_request", str(exc))

    @app.exception_handler(Exception)
    async def fallback_handler(request: Request, exc: Exception):
        return api_error(500, "internal_error", str(exc))

    # --- sessions --------------------------------------------------------

    @app.post("/v1/sessions", status_code=201)
    def create_session(payload: dict):
        user_input = payload.get("input")
        if not isinstance(user_input, str) or not user_input:
            return api_error(400, "bad_request", "body must carry a nonempty 'input'")
        state = payload.get("state")
        if state is not None and not isinstance(state, dict):
            return api_error(400, "bad_request", "'state' must be an object")
        session = runtime.start_session(
            user_input, app_id=payload.get("app_id"), state=state
        )
        return {"session_id": session.id, "phase": session.phase.value}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        session = runtime.engine.get_session(session_id)
        if session is None:
            return api_error(404, "unknown_session", f"no session {session_id}")
        return session.summary()

    @app.get("/v1/sessions/{session_id}/trace")
    def get_trace(session_id: str, from_sequence: int = 0):
        session = runtime.engine.get_session(session_id)
        if session is None:
            return api_error(404, "unknown_session", f"no session {session_id}")
        return PlainTextResponse(
            session.trace.to_ndjson(from_sequence=from_sequence), media_type=NDJSON
        )

    # --- approvals -------------------------------------------------------

    @app.get("/v1/approvals/pending")
    def pending_approvals():
        return [request.to_dict() for request in runtime.engine.approvals.pending()]

    @app.get("/v1/approvals/watch")
    def watch_approvals(timeout_s: float = 30.0):
        pending = runtime.engine.approvals.wait_for_pending(timeout=max(0.0, timeout_s))
        if not pending:
            return Response(status_code=204)
        return JSONResponse([request.to_dict() for request in pending])

    @app.post("/v1/approvals/{request_id}/decision")
    def decide(request_id: str, payload: dict):
        raw_decision = payload.get("decision")
        actor = payload.get("actor")
        if raw_decision not in ("approve", "deny"):
            return api_error(400, "bad_request", "'decision' must be approve|deny")
        if not isinstance(actor, str) or not actor:
            return api_error(400, "bad_request", "body must carry a nonempty 'actor'")
        try:
            return runtime.decide(request_id, ApprovalDecision(raw_decision), actor)
        except UnknownRequest as exc:
            return api_error(404, "unknown_request", str(exc))
        except AlreadyResolved as exc:
            return api_error(409, "already_resolved", str(exc))

    # --- policies ----------------------------------------------------------

    @app.get("/v1/policies")
    def list_policies(kind: str | None = None):
        if kind is not None:
            try:
                kinds = [PolicyKind(kind)]
            except ValueError:
                return api_error(400, "bad_request", f"unknown kind {kind!r}")
        else:
            kinds = list(PolicyKind)
        out = []
        for k in kinds:
            for policy in runtime.store.list_by_kind(k):
                out.append(
                    {
                        "id": policy.id,
                        "kind": policy.kind.value,
                        "priority": policy.priority,
                        "enabled": policy.enabled,
                    }
                )
        return out

    @app.get("/v1/policies/{policy_id}")
    def get_policy(policy_id: str):
        stored = runtime.store.get_stored(policy_id)
        if stored is None:
            return api_error(404, "unknown_policy", f"no policy {policy_id}")
        return PlainTextResponse(stored.markdown(), media_type="text/markdown")

    @app.put("/v1/policies/{policy_id}")
    async def put_policy(policy_id: str, request: Request):
        text = (await request.body()).decode("utf-8", errors="replace")
        try:
            policy = parse_policy_file(text)
        except PolicyFileError as exc:
            return api_error(
                400,
                "validation_failed",
                str(exc),
                violations=[{"field": "file", "rule": str(exc)}],
            )
        if policy.id != policy_id:
            return api_error(
                400,
                "id_mismatch",
                f"policy id {policy.id!r} does not match URL id {policy_id!r}",
            )
        try:
            runtime.put_policy(policy, text)
        except ValidationFailed as exc:
            return api_error(
                400,
                "validation_failed",
                str(exc),
                violations=[{"field": v.field, "rule": v.rule} for v in exc.violations],
            )
        return {
            "id": policy.id,
            "kind": policy.kind.value,
            "priority": policy.priority,
            "enabled": policy.enabled,
        }

    @app.delete("/v1/policies/{policy_id}")
    def delete_policy(policy_id: str):
        if not runtime.delete_policy(policy_id):
            return api_error(404, "unknown_policy", f"no policy {policy_id}")
        return {"deleted": True}

    return app
