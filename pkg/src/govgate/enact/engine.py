"""The execution-layer orchestrator.

Drives a session through the five intervention points: intent guarding
(fail closed), playbook injection (fail open), tool enrichment, approval
gating after code generation, and final-response formatting (fail open).

Concurrency contract: each session advances under its own lock — the loop
and a later ``resolve_approval`` call never interleave — while distinct
sessions progress fully in parallel. A paused session holds no lock and
blocks nobody.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Mapping, Protocol, Sequence

from govgate.agent.matching import (
    Checkpoint,
    match_intent_guards,
    match_output_formatters,
    match_playbooks,
    match_tool_approvals,
    match_tool_guides,
)
from govgate.agent.resolver import Resolver
from govgate.clock import Clock, IdFactory, SystemClock, random_ids
from govgate.enact.approvals import (
    ApprovalDecision,
    ApprovalRegistry,
    ApprovalRequest,
    ApprovalStatus,
)
from govgate.enact.formatting import FormatterModel, PassthroughFormatterModel, format_output
from govgate.enact.injection import inject_playbook
from govgate.enact.session import ExecutionSession, SessionPhase, ToolInvocation
from govgate.enact.tools import ToolDefinition, ToolRegistry, enrich_tools, scan_code_for_tools
from govgate.enact.trace import LIFECYCLE
from govgate.errors import IllegalTransition, ResolverFailure, ScriptExhausted
from govgate.model.types import ToolStage
from govgate.store.store import PolicyStore

ToolImplementation = Callable[[Mapping[str, Any]], Any]


@dataclass(frozen=True)
class AgentEmission:
    """One agent turn: pseudo-code to scan, per-tool arguments for whatever
    the scan finds, and optionally the final response that ends the session."""

    code: str = ""
    response: str | None = None
    arguments: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)


class AgentPort(Protocol):
    """The generative agent behind the engine; scripted in tests."""

    def emit(self, system_prompt: str, tools: Sequence[ToolDefinition]) -> AgentEmission: ...


@dataclass
class _Round:
    """Execution round: the not-yet-executed suffix of one emission's plan."""

    emission: AgentEmission
    plan: list[str]
    gate_index: int | None = None


class GovernanceEngine:
    def __init__(
        self,
        store: PolicyStore,
        resolver: Resolver,
        registry: ToolRegistry,
        tool_implementations: Mapping[str, ToolImplementation] | None = None,
        formatter_model: FormatterModel | None = None,
        clock: Clock | None = None,
        id_factory: IdFactory | None = None,
    ):
        self.store = store
        self.embedder = store.embedder
        self.resolver = resolver
        self.registry = registry
        self.tool_implementations = dict(tool_implementations or {})
        self.formatter_model = formatter_model or PassthroughFormatterModel()
        self.clock = clock or SystemClock()
        self.id_factory = id_factory or random_ids()
        self.approvals = ApprovalRegistry(self.clock, self.id_factory)
        self._sessions: dict[str, ExecutionSession] = {}
        self._agents: dict[str, AgentPort] = {}
        self._formatters: dict[str, FormatterModel] = {}
        self._rounds: dict[str, _Round] = {}
        self._registry_lock = threading.Lock()

    # --- session lifecycle -------------------------------------------------

    def create_session(
        self,
        user_input: str,
        agent: AgentPort,
        app_id: str | None = None,
        intent: str | None = None,
        state: Mapping[str, Any] | None = None,
        formatter_model: FormatterModel | None = None,
    ) -> ExecutionSession:
        session = ExecutionSession(
            id=self.id_factory(),
            user_input=user_input,
            clock=self.clock,
            app_id=app_id,
            intent=intent,
            state=dict(state or {}),
        )
        with self._registry_lock:
            self._sessions[session.id] = session
            self._agents[session.id] = agent
            if formatter_model is not None:
                self._formatters[session.id] = formatter_model
        return session

    def get_session(self, session_id: str) -> ExecutionSession | None:
        with self._registry_lock:
            return self._sessions.get(session_id)

    def sessions(self) -> list[ExecutionSession]:
        with self._registry_lock:
            return list(self._sessions.values())

    def run(self, session: ExecutionSession) -> ExecutionSession:
        """Advance a freshly created session until it blocks, pauses for
        approval, completes, or fails."""
        with session.lock:
            if session.phase is not SessionPhase.CREATED:
                raise IllegalTransition(session.phase.value, "run")
            if not self._checkpoint_intent(session):
                return session
            self._prepare_tools(session)
            self._advance(session)
            return session

    def resolve_approval(
        self, request_id: str, decision: ApprovalDecision, actor: str
    ) -> SessionPhase:
        """Resolve a pending request; an approval resumes the paused session
        synchronously, so the returned phase is already post-resumption."""
        request = self.approvals.mark_resolved(request_id, decision, actor)
        session = self.get_session(request.session)
        if session is None:
            return SessionPhase.FAILED
        with session.lock:
            session.trace.append(
                Checkpoint.POST_CODE_GENERATION.value,
                {
                    "event": "approval_resolved",
                    "request_id": request.id,
                    "decision": decision.value,
                    "actor": actor,
                    "tool_name": request.tool_name,
                    "policy": request.policy,
                },
            )
            session.pending_request_id = None
            if decision is ApprovalDecision.DENY:
                session.transition_to(SessionPhase.DENIED)
                return session.phase
            session.transition_to(SessionPhase.EXECUTING)
            round_ = self._rounds[session.id]
            self._execute_prefix(session, round_, round_.gate_index + 1)
            round_.gate_index = None
            self._advance(session)
            return session.phase

    # --- checkpoint: intent analysis ----------------------------------------

    def _checkpoint_intent(self, session: ExecutionSession) -> bool:
        ctx = session.match_context()
        try:
            decision = match_intent_guards(ctx, self.store, self.embedder, self.resolver)
        except ResolverFailure as exc:
            session.block_message = (
                "Request blocked: guard resolution failed and guards fail closed."
            )
            session.trace.append(
                Checkpoint.INTENT_ANALYSIS.value,
                {"event": "blocked", "reason": "resolver_failure", "error": str(exc)},
            )
            session.transition_to(SessionPhase.BLOCKED)
            return False
        if decision.selected is not None:
            guard = self.store.get(decision.selected)
            session.block_message = guard.payload.block_message
            session.trace.append(
                Checkpoint.INTENT_ANALYSIS.value,
                {
                    "event": "blocked",
                    "policy": decision.selected,
                    "block_message": session.block_message,
                },
                decision,
            )
            session.transition_to(SessionPhase.BLOCKED)
            return False
        session.trace.append(
            Checkpoint.INTENT_ANALYSIS.value, {"event": "intent_clear"}, decision
        )

        try:
            playbook_decision = match_playbooks(ctx, self.store, self.embedder, self.resolver)
        except ResolverFailure as exc:
            playbook_decision = None
            session.trace.append(
                Checkpoint.INTENT_ANALYSIS.value,
                {
                    "event": "playbook_skipped",
                    "reason": "resolver_failure",
                    "error": str(exc),
                },
            )
        session.transition_to(SessionPhase.PLANNING)
        if playbook_decision is not None and playbook_decision.selected is not None:
            playbook = self.store.get(playbook_decision.selected)
            session.playbook_policy_id = playbook.id
            session.system_prompt = inject_playbook(
                session.system_prompt, playbook.id, playbook.payload
            )
            session.trace.append(
                Checkpoint.INTENT_ANALYSIS.value,
                {"event": "playbook_injected", "policy": playbook.id},
                playbook_decision,
            )
        elif playbook_decision is not None:
            session.trace.append(
                Checkpoint.INTENT_ANALYSIS.value,
                {"event": "no_playbook"},
                playbook_decision,
            )
        return True

    # --- checkpoint: tool preparation ----------------------------------------

    def _prepare_tools(self, session: ExecutionSession) -> None:
        session.transition_to(SessionPhase.TOOL_PREP)
        ctx = session.match_context()
        matches = match_tool_guides(self.registry.names(), ctx, self.store, self.embedder)
        applications = [(self.store.get(pid), tool) for pid, tool in matches]
        session.enriched_tools = enrich_tools(self.registry.definitions(), applications)
        session.trace.append(
            Checkpoint.TOOL_PREPARATION.value,
            {"event": "tools_enriched", "applied": [[pid, tool] for pid, tool in matches]},
        )

    # --- code generation / execution loop -------------------------------------

    def _advance(self, session: ExecutionSession) -> None:
        agent = self._agents[session.id]
        while True:
            round_ = self._rounds.get(session.id)
            if round_ is not None and not round_.plan:
                # round fully executed: its response (if any) ends the session
                self._rounds.pop(session.id, None)
                if round_.emission.response is not None:
                    self._respond(session, round_.emission.response)
                    return
                round_ = None
            if round_ is None:
                try:
                    emission = agent.emit(session.system_prompt, session.enriched_tools)
                except ScriptExhausted:
                    session.fail("agent script exhausted before a final response")
                    return
                session.transition_to(SessionPhase.CODE_GENERATED)
                session.trace.append(
                    LIFECYCLE, {"event": "code_generated", "code": emission.code}
                )
                plan = scan_code_for_tools(emission.code, self.registry.names())
                for name in plan:
                    session.see_tool(name, ToolStage.PRE)
                round_ = _Round(emission=emission, plan=plan)
                self._rounds[session.id] = round_
            elif session.phase is not SessionPhase.CODE_GENERATED:
                # picked up a paused/partially executed round: re-scan it
                session.transition_to(SessionPhase.CODE_GENERATED)
                session.trace.append(
                    LIFECYCLE,
                    {"event": "plan_rescan", "remaining": list(round_.plan)},
                )

            gate = match_tool_approvals(round_.plan, self.store)
            if gate is None:
                session.transition_to(SessionPhase.EXECUTING)
                self._execute_prefix(session, round_, len(round_.plan))
                if round_.emission.response is not None:
                    self._rounds.pop(session.id, None)
                    self._respond(session, round_.emission.response)
                    return
                continue

            policy_id, tool_name = gate
            policy = self.store.get(policy_id)
            round_.gate_index = round_.plan.index(tool_name)
            arguments = round_.emission.arguments.get(tool_name, {})
            if policy.payload.auto_approve:
                request = self.approvals.create(
                    session.id, policy_id, tool_name, arguments, auto_approved=True
                )
                session.trace.append(
                    Checkpoint.POST_CODE_GENERATION.value,
                    {
                        "event": "auto_approved",
                        "request_id": request.id,
                        "policy": policy_id,
                        "tool_name": tool_name,
                    },
                )
                session.transition_to(SessionPhase.EXECUTING)
                self._execute_prefix(session, round_, round_.gate_index + 1)
                round_.gate_index = None
                continue

            request = self.approvals.create(session.id, policy_id, tool_name, arguments)
            session.pending_request_id = request.id
            session.trace.append(
                Checkpoint.POST_CODE_GENERATION.value,
                {
                    "event": "approval_pending",
                    "request_id": request.id,
                    "policy": policy_id,
                    "tool_name": tool_name,
                },
            )
            session.transition_to(SessionPhase.AWAITING_APPROVAL)
            return

    def _execute_prefix(self, session: ExecutionSession, round_: _Round, count: int) -> None:
        to_run, round_.plan = round_.plan[:count], round_.plan[count:]
        for tool_name in to_run:
            arguments = round_.emission.arguments.get(tool_name, {})
            implementation = self.tool_implementations.get(tool_name)
            result = implementation(arguments) if implementation else None
            session.record_invocation(tool_name, arguments, result)

    # --- checkpoint: final response --------------------------------------------

    def _respond(self, session: ExecutionSession, response: str) -> None:
        session.transition_to(SessionPhase.RESPONDING)
        ctx = session.match_context(final_response=response)
        decision = None
        try:
            decision = match_output_formatters(ctx, self.store, self.embedder, self.resolver)
        except ResolverFailure as exc:
            session.trace.append(
                Checkpoint.FINAL_RESPONSE.value,
                {
                    "event": "formatter_skipped",
                    "reason": "resolver_failure",
                    "error": str(exc),
                },
            )
        payload = None
        if decision is not None and decision.selected is not None:
            payload = self.store.get(decision.selected).payload
        model = self._formatters.get(session.id, self.formatter_model)
        result = format_output(response, payload, model)
        detail: dict[str, Any] = {
            "event": "response_formatted" if payload is not None else "response_passthrough",
        }
        if decision is not None and decision.selected is not None:
            detail["policy"] = decision.selected
        if result.diagnostic is not None:
            detail["diagnostic"] = result.diagnostic
        session.trace.append(Checkpoint.FINAL_RESPONSE.value, detail, decision)
        session.final_response = result.output
        session.transition_to(SessionPhase.COMPLETED)
        session.trace.append(
            LIFECYCLE, {"event": "session_completed", "final_response": result.output}
        )

    # --- paused-session snapshots (restart survival) ------------------------------

    def snapshot_paused(self, session_id: str) -> dict[str, Any] | None:
        """JSON-safe snapshot of an AwaitingApproval session, or None."""
        session = self.get_session(session_id)
        if session is None:
            return None
        with session.lock:
            if session.phase is not SessionPhase.AWAITING_APPROVAL:
                return None
            round_ = self._rounds.get(session_id)
            request = (
                self.approvals.get(session.pending_request_id)
                if session.pending_request_id
                else None
            )
            agent = self._agents.get(session_id)
            agent_state = agent.state() if hasattr(agent, "state") else None
            return {
                "session": {
                    "id": session.id,
                    "user_input": session.user_input,
                    "app_id": session.app_id,
                    "intent": session.intent,
                    "state": dict(session.state),
                    "system_prompt": session.system_prompt,
                    "playbook_policy_id": session.playbook_policy_id,
                    "pending_request_id": session.pending_request_id,
                    "tools_seen": [[s.tool_name, s.stage.value] for s in session.tools_seen],
                    "invocations": [
                        {
                            "tool_name": inv.tool_name,
                            "arguments": dict(inv.arguments),
                            "result": inv.result,
                        }
                        for inv in session.invocations
                    ],
                    "enriched_tools": [
                        {
                            "name": t.name,
                            "description": t.description,
                            "parameters": dict(t.parameters),
                        }
                        for t in session.enriched_tools
                    ],
                },
                "trace": [e.to_dict() for e in session.trace.events()],
                "round": {
                    "plan": list(round_.plan),
                    "gate_index": round_.gate_index,
                    "emission": {
                        "code": round_.emission.code,
                        "response": round_.emission.response,
                        "arguments": {
                            k: dict(v) for k, v in round_.emission.arguments.items()
                        },
                    },
                },
                "request": request.to_dict() if request else None,
                "agent_state": agent_state,
            }

    def restore_paused(self, snapshot: Mapping[str, Any], agent: AgentPort) -> ExecutionSession:
        """Rebuild an AwaitingApproval session from a snapshot; the caller
        supplies the agent (rebuilt from ``agent_state`` where applicable)."""
        data = snapshot["session"]
        session = ExecutionSession(
            id=data["id"],
            user_input=data["user_input"],
            clock=self.clock,
            app_id=data.get("app_id"),
            intent=data.get("intent"),
            state=data.get("state", {}),
        )
        session.system_prompt = data.get("system_prompt", "")
        session.playbook_policy_id = data.get("playbook_policy_id")
        session.pending_request_id = data.get("pending_request_id")
        session.phase = SessionPhase.AWAITING_APPROVAL
        for tool_name, stage in data.get("tools_seen", []):
            session.see_tool(tool_name, ToolStage(stage))
        for inv in data.get("invocations", []):
            session.invocations.append(
                ToolInvocation(inv["tool_name"], inv["arguments"], inv["result"])
            )
        session.enriched_tools = [
            ToolDefinition(
                name=t["name"], description=t["description"], parameters=t["parameters"]
            )
            for t in data.get("enriched_tools", [])
        ]
        session.trace.restore_events(snapshot.get("trace", []))

        round_data = snapshot["round"]
        emission = AgentEmission(
            code=round_data["emission"]["code"],
            response=round_data["emission"]["response"],
            arguments=round_data["emission"]["arguments"],
        )
        self._rounds[session.id] = _Round(
            emission=emission,
            plan=list(round_data["plan"]),
            gate_index=round_data.get("gate_index"),
        )

        request_data = snapshot.get("request")
        if request_data is not None:
            request = ApprovalRequest(
                id=request_data["id"],
                session=request_data["session"],
                policy=request_data["policy"],
                tool_name=request_data["tool_name"],
                tool_arguments=request_data["tool_arguments"],
                requested_at=datetime.fromisoformat(request_data["requested_at"]),
                status=ApprovalStatus(request_data["status"]),
                resolved_by=request_data.get("resolved_by"),
                resolved_at=(
                    datetime.fromisoformat(request_data["resolved_at"])
                    if request_data.get("resolved_at")
                    else None
                ),
            )
            self.approvals.restore(request)

        with self._registry_lock:
            self._sessions[session.id] = session
            self._agents[session.id] = agent
        return session
