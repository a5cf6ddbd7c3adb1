"""Policy invariant checks.

``validate_policy`` returns violations as data; it never raises. An empty
list means every type invariant holds and the policy is safe to store,
serialize, and match against.
"""

from __future__ import annotations

import re
from typing import Any

import jsonschema

from govgate.model.types import (
    POLICY_ID_MAX_LENGTH,
    ApplicationTrigger,
    FormatterMode,
    IntentGuardPayload,
    KeywordTrigger,
    NaturalLanguageTrigger,
    OutputFormatterPayload,
    PAYLOAD_TYPE_BY_KIND,
    Placement,
    PlaybookPayload,
    Policy,
    PolicyKind,
    StateOperator,
    StateTrigger,
    TargetField,
    ToolApprovalPayload,
    ToolGuidePayload,
    ToolStage,
    ToolTrigger,
    Violation,
)

POLICY_ID_RE = re.compile(r"^[a-z0-9_-]+$")

# Formatter triggers may consider only the request and the generated response.
FORMATTER_TARGETS = {TargetField.USER_INPUT, TargetField.FINAL_RESPONSE}


def validate_policy(policy: Policy) -> list[Violation]:
    """Check every type invariant; returns one Violation per breached rule."""
    violations: list[Violation] = []

    _check_id(policy, violations)

    if not isinstance(policy.kind, PolicyKind):
        violations.append(Violation("kind", "must be one of the five policy kinds"))
        return violations

    if not isinstance(policy.priority, int) or isinstance(policy.priority, bool):
        violations.append(Violation("priority", "must be an integer"))
    elif not 0 <= policy.priority <= 100:
        violations.append(Violation("priority", "must be within [0, 100]"))

    if not isinstance(policy.enabled, bool):
        violations.append(Violation("enabled", "must be a boolean"))

    if not policy.triggers and policy.kind is not PolicyKind.TOOL_APPROVAL:
        violations.append(
            Violation("triggers", "required for kind!=tool_approval")
        )
    for i, trigger in enumerate(policy.triggers):
        _check_trigger(trigger, f"triggers[{i}]", policy.kind, violations)

    expected_payload = PAYLOAD_TYPE_BY_KIND[policy.kind]
    if not isinstance(policy.payload, expected_payload):
        violations.append(
            Violation(
                "payload",
                f"kind {policy.kind.value} requires {expected_payload.__name__}",
            )
        )
        return violations

    _check_payload(policy.payload, violations)
    return violations


def _check_id(policy: Policy, violations: list[Violation]) -> None:
    pid = policy.id
    if not isinstance(pid, str) or not pid:
        violations.append(Violation("id", "must be a nonempty string"))
        return
    if len(pid) > POLICY_ID_MAX_LENGTH:
        violations.append(
            Violation("id", f"must be at most {POLICY_ID_MAX_LENGTH} chars")
        )
    if not POLICY_ID_RE.match(pid):
        violations.append(Violation("id", "must match [a-z0-9_-]+"))


def _check_trigger(
    trigger: object, where: str, kind: PolicyKind, violations: list[Violation]
) -> None:
    if isinstance(trigger, NaturalLanguageTrigger):
        if not trigger.queries or any(
            not isinstance(q, str) or not q for q in trigger.queries
        ):
            violations.append(
                Violation(f"{where}.queries", "must be a nonempty list of nonempty strings")
            )
        if not isinstance(trigger.threshold, (int, float)) or isinstance(
            trigger.threshold, bool
        ):
            violations.append(Violation(f"{where}.threshold", "must be a number"))
        elif not 0.0 <= trigger.threshold <= 1.0:
            violations.append(
                Violation(f"{where}.threshold", "threshold out of [0,1]")
            )
        _check_target(trigger.target, where, kind, violations)
    elif isinstance(trigger, KeywordTrigger):
        if not trigger.keywords or any(
            not isinstance(k, str) or not k for k in trigger.keywords
        ):
            violations.append(
                Violation(f"{where}.keywords", "must be a nonempty list of nonempty strings")
            )
        if not isinstance(trigger.fuzzy_max_edits, int) or isinstance(
            trigger.fuzzy_max_edits, bool
        ) or trigger.fuzzy_max_edits < 0:
            violations.append(
                Violation(f"{where}.fuzzy_max_edits", "must be an integer >= 0")
            )
        if not isinstance(trigger.case_sensitive, bool):
            violations.append(
                Violation(f"{where}.case_sensitive", "must be a boolean")
            )
        _check_target(trigger.target, where, kind, violations)
    elif isinstance(trigger, ApplicationTrigger):
        if not isinstance(trigger.app_id, str) or not trigger.app_id:
            violations.append(Violation(f"{where}.app_id", "must be a nonempty string"))
    elif isinstance(trigger, StateTrigger):
        if not isinstance(trigger.path, str) or not trigger.path:
            violations.append(Violation(f"{where}.path", "must be a nonempty dotted path"))
        if not isinstance(trigger.operator, StateOperator):
            violations.append(Violation(f"{where}.operator", "must be eq|contains|regex"))
        if not isinstance(trigger.value, str):
            violations.append(Violation(f"{where}.value", "must be a string"))
        elif trigger.operator is StateOperator.REGEX:
            try:
                re.compile(trigger.value)
            except re.error:
                violations.append(Violation(f"{where}.value", "regex does not compile"))
    elif isinstance(trigger, ToolTrigger):
        if not isinstance(trigger.tool_name, str) or not trigger.tool_name:
            violations.append(Violation(f"{where}.tool_name", "must be a nonempty string"))
        if not isinstance(trigger.stage, ToolStage):
            violations.append(Violation(f"{where}.stage", "must be pre|post"))
    else:
        violations.append(Violation(where, "not a recognized trigger type"))


def _check_target(
    target: object, where: str, kind: PolicyKind, violations: list[Violation]
) -> None:
    if not isinstance(target, TargetField):
        violations.append(Violation(f"{where}.target", "must be a target field"))
        return
    if kind is PolicyKind.OUTPUT_FORMATTER and target not in FORMATTER_TARGETS:
        violations.append(
            Violation(
                f"{where}.target",
                "formatter triggers may target only user_input or final_response",
            )
        )


def _check_payload(payload: object, violations: list[Violation]) -> None:
    if isinstance(payload, PlaybookPayload):
        _check_body_text(payload.content, "content", violations)
        if payload.steps is not None:
            if not payload.steps:
                violations.append(Violation("steps", "must be nonempty when present"))
            for i, step in enumerate(payload.steps):
                if not isinstance(step.instruction, str) or not step.instruction:
                    violations.append(
                        Violation(f"steps[{i}].instruction", "must be a nonempty string")
                    )
                if step.allowed_tools is not None and (
                    not step.allowed_tools
                    or any(not isinstance(t, str) or not t for t in step.allowed_tools)
                ):
                    violations.append(
                        Violation(
                            f"steps[{i}].allowed_tools",
                            "must be a nonempty list of tool names when present",
                        )
                    )
    elif isinstance(payload, IntentGuardPayload):
        if not isinstance(payload.block_message, str) or not payload.block_message:
            violations.append(Violation("block_message", "must be a nonempty string"))
    elif isinstance(payload, ToolGuidePayload):
        if not payload.tool_names or any(
            not isinstance(t, str) or not t for t in payload.tool_names
        ):
            violations.append(
                Violation("tools", "must be a nonempty list of tool names")
            )
        _check_body_text(payload.guidance, "guidance", violations)
        if not isinstance(payload.placement, Placement):
            violations.append(Violation("placement", "must be append|prepend"))
    elif isinstance(payload, ToolApprovalPayload):
        if not payload.tool_patterns or any(
            not isinstance(p, str) or not p for p in payload.tool_patterns
        ):
            violations.append(
                Violation("patterns", "must be a nonempty list of glob patterns")
            )
        if not isinstance(payload.auto_approve, bool):
            violations.append(Violation("auto_approve", "must be a boolean"))
    elif isinstance(payload, OutputFormatterPayload):
        if not isinstance(payload.mode, FormatterMode):
            violations.append(Violation("mode", "must be template|markdown|json_schema"))
            return
        if payload.mode is FormatterMode.TEMPLATE:
            if not isinstance(payload.template, str):
                violations.append(Violation("template", "required when mode=template"))
            if payload.schema is not None:
                violations.append(Violation("schema", "only allowed when mode=json_schema"))
        elif payload.mode is FormatterMode.JSON_SCHEMA:
            if payload.template is not None:
                violations.append(Violation("template", "only allowed when mode=template"))
            _check_schema(payload.schema, violations)
        else:
            if payload.template is not None:
                violations.append(Violation("template", "only allowed when mode=template"))
            if payload.schema is not None:
                violations.append(Violation("schema", "only allowed when mode=json_schema"))


def _check_body_text(value: object, name: str, violations: list[Violation]) -> None:
    # Body-carried text must be trimmed so parse(serialize(p)) is identity:
    # the parser strips the markdown body.
    if not isinstance(value, str) or not value:
        violations.append(Violation(name, "must be a nonempty string"))
    elif value != value.strip():
        violations.append(Violation(name, "must not have leading/trailing whitespace"))


def _check_schema(schema: Any, violations: list[Violation]) -> None:
    if not isinstance(schema, dict):
        violations.append(Violation("schema", "required when mode=json_schema"))
        return
    try:
        jsonschema.Draft202012Validator.check_schema(schema)
    except jsonschema.SchemaError as exc:
        violations.append(Violation("schema", f"not a valid JSON schema: {exc.message}"))
