"""Execution session state machine.

Phases move only along the legal transition map; anything else raises
IllegalTransition. Blocked, Denied, Completed, and Failed are terminal.
Each session is single-writer: one context advances it at a time (enforced
with a per-session lock by the engine), while distinct sessions are fully
independent.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from govgate.clock import Clock
from govgate.enact.tools import ToolDefinition
from govgate.enact.trace import LIFECYCLE, TraceLog
from govgate.errors import IllegalTransition
from govgate.model.types import ToolStage
from govgate.triggers.context import MatchContext, ToolSighting


class SessionPhase(str, Enum):
    CREATED = "created"
    BLOCKED = "blocked"
    PLANNING = "planning"
    TOOL_PREP = "tool_prep"
    CODE_GENERATED = "code_generated"
    AWAITING_APPROVAL = "awaiting_approval"
    EXECUTING = "executing"
    RESPONDING = "responding"
    COMPLETED = "completed"
    DENIED = "denied"
    FAILED = "failed"


TERMINAL_PHASES = frozenset(
    {SessionPhase.BLOCKED, SessionPhase.DENIED, SessionPhase.COMPLETED, SessionPhase.FAILED}
)

LEGAL_TRANSITIONS: Mapping[SessionPhase, frozenset[SessionPhase]] = {
    SessionPhase.CREATED: frozenset({SessionPhase.BLOCKED, SessionPhase.PLANNING}),
    SessionPhase.PLANNING: frozenset({SessionPhase.TOOL_PREP}),
    SessionPhase.TOOL_PREP: frozenset({SessionPhase.CODE_GENERATED}),
    SessionPhase.CODE_GENERATED: frozenset(
        {SessionPhase.AWAITING_APPROVAL, SessionPhase.EXECUTING}
    ),
    SessionPhase.AWAITING_APPROVAL: frozenset(
        {SessionPhase.EXECUTING, SessionPhase.DENIED}
    ),
    SessionPhase.EXECUTING: frozenset(
        {SessionPhase.RESPONDING, SessionPhase.CODE_GENERATED}
    ),
    SessionPhase.RESPONDING: frozenset({SessionPhase.COMPLETED}),
    SessionPhase.BLOCKED: frozenset(),
    SessionPhase.DENIED: frozenset(),
    SessionPhase.COMPLETED: frozenset(),
    SessionPhase.FAILED: frozenset(),
}


def can_transition(current: SessionPhase, requested: SessionPhase) -> bool:
    if requested is SessionPhase.FAILED:
        return current not in TERMINAL_PHASES
    return requested in LEGAL_TRANSITIONS[current]


@dataclass
class ToolInvocation:
    tool_name: str
    arguments: Mapping[str, Any]
    result: Any


@dataclass
class ExecutionSession:
    id: str
    user_input: str
    clock: Clock
    app_id: str | None = None
    intent: str | None = None
    state: Mapping[str, Any] = field(default_factory=dict)
    phase: SessionPhase = SessionPhase.CREATED
    system_prompt: str = ""
    playbook_policy_id: str | None = None
    block_message: str | None = None
    enriched_tools: list[ToolDefinition] = field(default_factory=list)
    tools_seen: list[ToolSighting] = field(default_factory=list)
    invocations: list[ToolInvocation] = field(default_factory=list)
    pending_request_id: str | None = None
    final_response: Any = None
    failure: str | None = None

    def __post_init__(self):
        self.lock = threading.RLock()
        self.trace = TraceLog(self.id, self.clock)
        self.trace.append(LIFECYCLE, {"event": "session_created", "user_input": self.user_input})

    @property
    def is_terminal(self) -> bool:
        return self.phase in TERMINAL_PHASES

    def transition_to(self, requested: SessionPhase) -> None:
        """The only phase mutator; illegal moves raise, never silently apply."""
        if not can_transition(self.phase, requested):
            raise IllegalTransition(self.phase.value, requested.value)
        previous = self.phase
        self.phase = requested
        self.trace.append(
            LIFECYCLE,
            {"event": "phase_transition", "from": previous.value, "to": requested.value},
        )

    def fail(self, reason: str) -> None:
        self.failure = reason
        self.transition_to(SessionPhase.FAILED)
        self.trace.append(LIFECYCLE, {"event": "session_failed", "reason": reason})

    def see_tool(self, tool_name: str, stage: ToolStage) -> None:
        self.tools_seen.append(ToolSighting(tool_name, stage))

    def record_invocation(self, tool_name: str, arguments: Mapping[str, Any], result: Any) -> None:
        self.invocations.append(ToolInvocation(tool_name, arguments, result))
        self.see_tool(tool_name, ToolStage.POST)
        self.trace.append(
            LIFECYCLE,
            {
                "event": "tool_invoked",
                "tool_name": tool_name,
                "arguments": dict(arguments),
                "result": result,
            },
        )

    def match_context(self, final_response: str | None = None) -> MatchContext:
        return MatchContext(
            user_input=self.user_input,
            intent=self.intent,
            sub_task=None,
            final_response=final_response,
            app_id=self.app_id,
            state=self.state,
            tools_seen=tuple(self.tools_seen),
        )

    def summary(self) -> dict[str, Any]:
        return {
            "session_id": self.id,
            "phase": self.phase.value,
            "user_input": self.user_input,
            "app_id": self.app_id,
            "playbook_policy_id": self.playbook_policy_id,
            "block_message": self.block_message,
            "pending_request_id": self.pending_request_id,
            "final_response": self.final_response,
            "failure": self.failure,
            "tool_invocations": [inv.tool_name for inv in self.invocations],
        }
