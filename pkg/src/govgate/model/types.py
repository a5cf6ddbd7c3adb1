"""Typed policy primitives: the five governance kinds, the trigger union,
and the kind-specific payloads.

Everything here is an immutable value; parsing and validation live in
sibling modules. Policy ids are plain strings constrained to
``[a-z0-9_-]``, max 128 chars (enforced by validation, unique per store).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Union

PolicyId = str

POLICY_ID_MAX_LENGTH = 128


class PolicyKind(str, Enum):
    INTENT_GUARD = "intent_guard"
    PLAYBOOK = "playbook"
    TOOL_GUIDE = "tool_guide"
    TOOL_APPROVAL = "tool_approval"
    OUTPUT_FORMATTER = "output_formatter"


class TargetField(str, Enum):
    USER_INPUT = "user_input"
    INTENT = "intent"
    SUB_TASK = "sub_task"
    FINAL_RESPONSE = "final_response"


class KeywordMode(str, Enum):
    AND = "and"
    OR = "or"


class StateOperator(str, Enum):
    EQ = "eq"
    CONTAINS = "contains"
    REGEX = "regex"


class ToolStage(str, Enum):
    PRE = "pre"
    POST = "post"


class Placement(str, Enum):
    APPEND = "append"
    PREPEND = "prepend"


class FormatterMode(str, Enum):
    TEMPLATE = "template"
    MARKDOWN = "markdown"
    JSON_SCHEMA = "json_schema"


# --- trigger union ----------------------------------------------------------


@dataclass(frozen=True)
class NaturalLanguageTrigger:
    """Embedding-similarity match of any query against one contextual field."""

    queries: tuple[str, ...]
    threshold: float
    target: TargetField = TargetField.USER_INPUT


@dataclass(frozen=True)
class KeywordTrigger:
    """Substring keyword match with AND/OR composition and optional
    per-word fuzzy tolerance (bounded edit distance over word spans)."""

    keywords: tuple[str, ...]
    mode: KeywordMode = KeywordMode.OR
    case_sensitive: bool = False
    fuzzy_max_edits: int = 0
    target: TargetField = TargetField.USER_INPUT


@dataclass(frozen=True)
class ApplicationTrigger:
    """Exact, case-sensitive match against the session's application id."""

    app_id: str


@dataclass(frozen=True)
class StateTrigger:
    """Operator match against one dotted path into the session state tree."""

    path: str
    operator: StateOperator
    value: str


@dataclass(frozen=True)
class ToolTrigger:
    """Matches when the named tool was seen at the given execution stage."""

    tool_name: str
    stage: ToolStage


Trigger = Union[
    NaturalLanguageTrigger,
    KeywordTrigger,
    ApplicationTrigger,
    StateTrigger,
    ToolTrigger,
]


# --- kind-specific payloads --------------------------------------------------


@dataclass(frozen=True)
class PlaybookStep:
    instruction: str
    expected_outcome: str | None = None
    allowed_tools: tuple[str, ...] | None = None


@dataclass(frozen=True)
class PlaybookPayload:
    content: str
    steps: tuple[PlaybookStep, ...] | None = None


@dataclass(frozen=True)
class IntentGuardPayload:
    block_message: str


@dataclass(frozen=True)
class ToolGuidePayload:
    tool_names: tuple[str, ...]
    guidance: str
    placement: Placement = Placement.APPEND


@dataclass(frozen=True)
class ToolApprovalPayload:
    tool_patterns: tuple[str, ...]
    auto_approve: bool = False


@dataclass(frozen=True)
class OutputFormatterPayload:
    mode: FormatterMode
    template: str | None = None
    schema: Mapping[str, Any] | None = None


Payload = Union[
    PlaybookPayload,
    IntentGuardPayload,
    ToolGuidePayload,
    ToolApprovalPayload,
    OutputFormatterPayload,
]

PAYLOAD_TYPE_BY_KIND: Mapping[PolicyKind, type] = {
    PolicyKind.PLAYBOOK: PlaybookPayload,
    PolicyKind.INTENT_GUARD: IntentGuardPayload,
    PolicyKind.TOOL_GUIDE: ToolGuidePayload,
    PolicyKind.TOOL_APPROVAL: ToolApprovalPayload,
    PolicyKind.OUTPUT_FORMATTER: OutputFormatterPayload,
}


@dataclass(frozen=True)
class Policy:
    """One governance primitive.

    Higher priority wins conflicts; ties break by id ascending. Triggers may
    be empty only for tool-approval policies, which match on scanned tool
    names instead.
    """

    id: PolicyId
    kind: PolicyKind
    priority: int
    payload: Payload
    triggers: tuple[Trigger, ...] = ()
    enabled: bool = True

    def natural_language_triggers(self) -> tuple[NaturalLanguageTrigger, ...]:
        return tuple(
            t for t in self.triggers if isinstance(t, NaturalLanguageTrigger)
        )

    def deterministic_triggers(self) -> tuple[Trigger, ...]:
        """All triggers evaluable without an embedding provider."""
        return tuple(
            t for t in self.triggers if not isinstance(t, NaturalLanguageTrigger)
        )


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by validation; data, not an exception."""

    field: str
    rule: str
