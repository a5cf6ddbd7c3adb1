"""The contextual fields a trigger can match against."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from govgate.model.types import TargetField, ToolStage


@dataclass(frozen=True)
class ToolSighting:
    tool_name: str
    stage: ToolStage


@dataclass(frozen=True)
class MatchContext:
    """Snapshot of session context at one checkpoint.

    Absent optional fields never match. ``state`` is a string-keyed tree
    addressed by dotted paths; leaves compare as strings.
    """

    user_input: str
    intent: str | None = None
    sub_task: str | None = None
    final_response: str | None = None
    app_id: str | None = None
    state: Mapping[str, Any] = field(default_factory=dict)
    tools_seen: tuple[ToolSighting, ...] = ()

    def target_text(self, target: TargetField) -> str | None:
        if target is TargetField.USER_INPUT:
            return self.user_input
        if target is TargetField.INTENT:
            return self.intent
        if target is TargetField.SUB_TASK:
            return self.sub_task
        return self.final_response

    def resolve_state_path(self, path: str) -> str | None:
        """Walk the dotted path; returns the leaf as a string, or None when
        the path is absent or lands on a subtree."""
        node: Any = self.state
        for part in path.split("."):
            if not isinstance(node, Mapping) or part not in node:
                return None
            node = node[part]
        if isinstance(node, Mapping):
            return None
        return node if isinstance(node, str) else str(node)


@dataclass(frozen=True)
class TriggerOutcome:
    """Result of evaluating one trigger; score is present only for
    natural-language triggers."""

    matched: bool
    score: float | None = None
    matched_query: str | None = None
