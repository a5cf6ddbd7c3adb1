"""Typed policy schemas, the trigger union, and the policy file format."""

from govgate.model.parsing import parse_policy_file, serialize_policy
from govgate.model.types import (
    ApplicationTrigger,
    FormatterMode,
    IntentGuardPayload,
    KeywordMode,
    KeywordTrigger,
    NaturalLanguageTrigger,
    OutputFormatterPayload,
    Placement,
    PlaybookPayload,
    PlaybookStep,
    Policy,
    PolicyId,
    PolicyKind,
    StateOperator,
    StateTrigger,
    TargetField,
    ToolApprovalPayload,
    ToolGuidePayload,
    ToolStage,
    ToolTrigger,
    Trigger,
    Violation,
)
from govgate.model.validation import validate_policy

__all__ = [
    "ApplicationTrigger",
    "FormatterMode",
    "IntentGuardPayload",
    "KeywordMode",
    "KeywordTrigger",
    "NaturalLanguageTrigger",
    "OutputFormatterPayload",
    "Placement",
    "PlaybookPayload",
    "PlaybookStep",
    "Policy",
    "PolicyId",
    "PolicyKind",
    "StateOperator",
    "StateTrigger",
    "TargetField",
    "ToolApprovalPayload",
    "ToolGuidePayload",
    "ToolStage",
    "ToolTrigger",
    "Trigger",
    "Violation",
    "parse_policy_file",
    "serialize_policy",
    "validate_policy",
]
