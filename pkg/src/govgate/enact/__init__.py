"""Execution layer: session state machine, enactment primitives, traces."""

from govgate.enact.approvals import (
    ApprovalDecision,
    ApprovalRegistry,
    ApprovalRequest,
    ApprovalStatus,
)
from govgate.enact.engine import AgentEmission, AgentPort, GovernanceEngine
from govgate.enact.formatting import (
    FormatResult,
    FormatterModel,
    PassthroughFormatterModel,
    ScriptedFormatterModel,
    format_output,
)
from govgate.enact.injection import inject_playbook, render_playbook_block
from govgate.enact.session import (
    ExecutionSession,
    SessionPhase,
    TERMINAL_PHASES,
    ToolInvocation,
    can_transition,
)
from govgate.enact.tools import (
    ToolDefinition,
    ToolRegistry,
    enrich_tools,
    scan_code_for_tools,
)
from govgate.enact.trace import LIFECYCLE, TraceEvent, TraceLog

__all__ = [
    "AgentEmission",
    "AgentPort",
    "ApprovalDecision",
    "ApprovalRegistry",
    "ApprovalRequest",
    "ApprovalStatus",
    "ExecutionSession",
    "FormatResult",
    "FormatterModel",
    "GovernanceEngine",
    "LIFECYCLE",
    "PassthroughFormatterModel",
    "ScriptedFormatterModel",
    "SessionPhase",
    "TERMINAL_PHASES",
    "ToolDefinition",
    "ToolInvocation",
    "ToolRegistry",
    "TraceEvent",
    "TraceLog",
    "can_transition",
    "enrich_tools",
    "format_output",
    "inject_playbook",
    "render_playbook_block",
    "scan_code_for_tools",
]
