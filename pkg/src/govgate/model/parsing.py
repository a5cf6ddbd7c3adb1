"""Policy file format: YAML front matter plus a markdown body.

A policy file is ``---\\n`` + YAML map + ``\\n---\\n`` + markdown body. The
body carries the playbook content or tool-guide guidance; every other field
lives in the front matter. Unknown keys are hard errors: governance configs
fail closed.

``parse_policy_file`` is total over :class:`~govgate.errors.PolicyFileError`:
no input string crashes, every failure maps to a named error.
``serialize_policy`` produces text that parses back to a structurally equal
policy.
"""

from __future__ import annotations

from typing import Any, Mapping

import yaml

from govgate.errors import (
    InvalidFieldValue,
    InvalidTrigger,
    MalformedFrontMatter,
    MissingRequiredField,
    UnknownField,
    UnknownKind,
)
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
    PolicyKind,
    StateOperator,
    StateTrigger,
    TargetField,
    ToolApprovalPayload,
    ToolGuidePayload,
    ToolStage,
    ToolTrigger,
    Trigger,
)
from govgate.model.validation import validate_policy

_OPEN = "---\n"
_CLOSE = "\n---\n"

_COMMON_KEYS = {"id", "kind", "priority", "enabled", "triggers"}
_KIND_KEYS: Mapping[PolicyKind, set[str]] = {
    PolicyKind.PLAYBOOK: {"steps"},
    PolicyKind.INTENT_GUARD: {"block_message"},
    PolicyKind.TOOL_GUIDE: {"tools", "placement"},
    PolicyKind.TOOL_APPROVAL: {"patterns", "auto_approve"},
    PolicyKind.OUTPUT_FORMATTER: {"mode", "template", "schema"},
}

_TRIGGER_KEYS: Mapping[str, set[str]] = {
    "natural_language": {"type", "queries", "threshold", "target"},
    "keyword": {"type", "keywords", "mode", "case_sensitive", "fuzzy_max_edits", "target"},
    "application": {"type", "app_id"},
    "state": {"type", "path", "operator", "value"},
    "tool": {"type", "tool_name", "stage"},
}


def parse_policy_file(text: str) -> Policy:
    """Parse one policy file into a validated :class:`Policy`."""
    meta, body = _split_front_matter(text)
    kind = _parse_kind(meta)

    allowed = _COMMON_KEYS | _KIND_KEYS[kind]
    for key in meta:
        if key not in allowed:
            raise UnknownField(str(key))

    policy_id = _require_str(meta, "id")
    priority = _require_int(meta, "priority")
    enabled = _optional_bool(meta, "enabled", default=True)
    triggers = tuple(_parse_trigger(entry) for entry in _trigger_entries(meta))
    payload = _parse_payload(kind, meta, body.strip())

    policy = Policy(
        id=policy_id,
        kind=kind,
        priority=priority,
        payload=payload,
        triggers=triggers,
        enabled=enabled,
    )
    _raise_on_violations(policy)
    return policy


def serialize_policy(policy: Policy) -> str:
    """Render a policy in the canonical file format.

    Writes every optional knob explicitly so defaults never change what a
    round trip reconstructs.
    """
    meta: dict[str, Any] = {
        "id": policy.id,
        "kind": policy.kind.value,
        "priority": policy.priority,
        "enabled": policy.enabled,
    }
    body = ""
    payload = policy.payload
    if isinstance(payload, PlaybookPayload):
        body = payload.content
        if payload.steps is not None:
            meta["steps"] = [_step_to_dict(s) for s in payload.steps]
    elif isinstance(payload, IntentGuardPayload):
        meta["block_message"] = payload.block_message
    elif isinstance(payload, ToolGuidePayload):
        meta["tools"] = list(payload.tool_names)
        meta["placement"] = payload.placement.value
        body = payload.guidance
    elif isinstance(payload, ToolApprovalPayload):
        meta["patterns"] = list(payload.tool_patterns)
        meta["auto_approve"] = payload.auto_approve
    elif isinstance(payload, OutputFormatterPayload):
        meta["mode"] = payload.mode.value
        if payload.template is not None:
            meta["template"] = payload.template
        if payload.schema is not None:
            meta["schema"] = payload.schema

    if policy.triggers:
        meta["triggers"] = [_trigger_to_dict(t) for t in policy.triggers]

    front = yaml.safe_dump(meta, sort_keys=False, allow_unicode=True)
    text = _OPEN + front + "---\n" + body
    if body:
        text += "\n"
    return text


# --- parse internals ---------------------------------------------------------


def _split_front_matter(text: str) -> tuple[dict, str]:
    if not isinstance(text, str) or not text.startswith(_OPEN):
        raise MalformedFrontMatter("file must begin with '---' front matter")
    rest = text[len(_OPEN):]
    marker = rest.find(_CLOSE)
    if marker >= 0:
        meta_text = rest[:marker]
        body = rest[marker + len(_CLOSE):]
    elif rest.endswith("\n---"):
        meta_text = rest[: -len("\n---")]
        body = ""
    elif rest.startswith("---\n"):
        # Immediately closed front matter ("---\n---\n...") carries no map.
        raise MissingRequiredField("kind")
    else:
        raise MalformedFrontMatter("front matter is not closed by '---'")
    try:
        meta = yaml.safe_load(meta_text)
    except yaml.YAMLError as exc:
        raise MalformedFrontMatter(f"front matter is not valid YAML: {exc}") from exc
    if not isinstance(meta, dict) or any(not isinstance(k, str) for k in meta):
        raise MalformedFrontMatter("front matter must be a string-keyed map")
    return meta, body


def _parse_kind(meta: Mapping[str, Any]) -> PolicyKind:
    if "kind" not in meta:
        raise MissingRequiredField("kind")
    raw = meta["kind"]
    try:
        return PolicyKind(raw)
    except ValueError:
        raise UnknownKind(raw) from None


def _require_str(meta: Mapping[str, Any], key: str) -> str:
    if key not in meta or meta[key] is None:
        raise MissingRequiredField(key)
    value = meta[key]
    if not isinstance(value, str):
        raise InvalidFieldValue(key, "must be a string")
    return value


def _require_int(meta: Mapping[str, Any], key: str) -> int:
    if key not in meta or meta[key] is None:
        raise MissingRequiredField(key)
    value = meta[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidFieldValue(key, "must be an integer")
    return value


def _optional_bool(meta: Mapping[str, Any], key: str, default: bool) -> bool:
    if key not in meta or meta[key] is None:
        return default
    value = meta[key]
    if not isinstance(value, bool):
        raise InvalidFieldValue(key, "must be a boolean")
    return value


def _trigger_entries(meta: Mapping[str, Any]) -> list[Mapping[str, Any]]:
    raw = meta.get("triggers")
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise InvalidTrigger("triggers must be a list")
    for entry in raw:
        if not isinstance(entry, dict):
            raise InvalidTrigger("each trigger must be a map")
    return raw


def _parse_trigger(entry: Mapping[str, Any]) -> Trigger:
    raw_type = entry.get("type")
    if raw_type not in _TRIGGER_KEYS:
        raise InvalidTrigger(f"unknown trigger type: {raw_type!r}")
    for key in entry:
        if key not in _TRIGGER_KEYS[raw_type]:
            raise InvalidTrigger(f"unknown key {key!r} for {raw_type} trigger")

    if raw_type == "natural_language":
        queries = _trigger_str_list(entry, "queries")
        threshold = entry.get("threshold")
        if threshold is None:
            raise InvalidTrigger("threshold is required for natural_language")
        if isinstance(threshold, bool) or not isinstance(threshold, (int, float)):
            raise InvalidTrigger("threshold must be a number")
        return NaturalLanguageTrigger(
            queries=queries,
            threshold=float(threshold),
            target=_trigger_target(entry),
        )
    if raw_type == "keyword":
        keywords = _trigger_str_list(entry, "keywords")
        mode = _trigger_enum(entry, "mode", KeywordMode, KeywordMode.OR)
        fuzzy = entry.get("fuzzy_max_edits", 0)
        if isinstance(fuzzy, bool) or not isinstance(fuzzy, int) or fuzzy < 0:
            raise InvalidTrigger("fuzzy_max_edits must be an integer >= 0")
        case_sensitive = entry.get("case_sensitive", False)
        if not isinstance(case_sensitive, bool):
            raise InvalidTrigger("case_sensitive must be a boolean")
        return KeywordTrigger(
            keywords=keywords,
            mode=mode,
            case_sensitive=case_sensitive,
            fuzzy_max_edits=fuzzy,
            target=_trigger_target(entry),
        )
    if raw_type == "application":
        app_id = entry.get("app_id")
        if not isinstance(app_id, str) or not app_id:
            raise InvalidTrigger("app_id must be a nonempty string")
        return ApplicationTrigger(app_id=app_id)
    if raw_type == "state":
        path = entry.get("path")
        if not isinstance(path, str) or not path:
            raise InvalidTrigger("path must be a nonempty dotted path")
        operator = _trigger_enum(entry, "operator", StateOperator, None)
        value = entry.get("value")
        if not isinstance(value, str):
            raise InvalidTrigger("value must be a string")
        return StateTrigger(path=path, operator=operator, value=value)
    # tool
    tool_name = entry.get("tool_name")
    if not isinstance(tool_name, str) or not tool_name:
        raise InvalidTrigger("tool_name must be a nonempty string")
    stage = _trigger_enum(entry, "stage", ToolStage, None)
    return ToolTrigger(tool_name=tool_name, stage=stage)


def _trigger_str_list(entry: Mapping[str, Any], key: str) -> tuple[str, ...]:
    raw = entry.get(key)
    if not isinstance(raw, list) or not raw or any(
        not isinstance(v, str) or not v for v in raw
    ):
        raise InvalidTrigger(f"{key} must be a nonempty list of nonempty strings")
    return tuple(raw)


def _trigger_target(entry: Mapping[str, Any]) -> TargetField:
    raw = entry.get("target", TargetField.USER_INPUT.value)
    try:
        return TargetField(raw)
    except ValueError:
        raise InvalidTrigger(f"unknown target field: {raw!r}") from None


def _trigger_enum(entry, key, enum_type, default):
    raw = entry.get(key)
    if raw is None:
        if default is not None:
            return default
        raise InvalidTrigger(f"{key} is required")
    try:
        return enum_type(raw)
    except ValueError:
        raise InvalidTrigger(f"invalid {key}: {raw!r}") from None


def _parse_payload(kind: PolicyKind, meta: Mapping[str, Any], body: str):
    if kind is PolicyKind.PLAYBOOK:
        if not body:
            raise MissingRequiredField("content")
        steps = _parse_steps(meta)
        return PlaybookPayload(content=body, steps=steps)
    if kind is PolicyKind.INTENT_GUARD:
        return IntentGuardPayload(block_message=_require_str(meta, "block_message"))
    if kind is PolicyKind.TOOL_GUIDE:
        tools = meta.get("tools")
        if tools is None:
            raise MissingRequiredField("tools")
        if not isinstance(tools, list) or any(not isinstance(t, str) for t in tools):
            raise InvalidFieldValue("tools", "must be a list of tool names")
        if not body:
            raise MissingRequiredField("guidance")
        placement_raw = meta.get("placement", Placement.APPEND.value)
        try:
            placement = Placement(placement_raw)
        except ValueError:
            raise InvalidFieldValue("placement", "must be append|prepend") from None
        return ToolGuidePayload(
            tool_names=tuple(tools), guidance=body, placement=placement
        )
    if kind is PolicyKind.TOOL_APPROVAL:
        patterns = meta.get("patterns")
        if patterns is None:
            raise MissingRequiredField("patterns")
        if not isinstance(patterns, list) or any(
            not isinstance(p, str) for p in patterns
        ):
            raise InvalidFieldValue("patterns", "must be a list of glob patterns")
        return ToolApprovalPayload(
            tool_patterns=tuple(patterns),
            auto_approve=_optional_bool(meta, "auto_approve", default=False),
        )
    # output_formatter
    mode_raw = meta.get("mode")
    if mode_raw is None:
        raise MissingRequiredField("mode")
    try:
        mode = FormatterMode(mode_raw)
    except ValueError:
        raise InvalidFieldValue("mode", "must be template|markdown|json_schema") from None
    template = meta.get("template")
    if mode is FormatterMode.TEMPLATE and template is None:
        raise MissingRequiredField("template")
    schema = meta.get("schema")
    if mode is FormatterMode.JSON_SCHEMA and schema is None:
        raise MissingRequiredField("schema")
    return OutputFormatterPayload(mode=mode, template=template, schema=schema)


def _parse_steps(meta: Mapping[str, Any]) -> tuple[PlaybookStep, ...] | None:
    raw = meta.get("steps")
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise InvalidFieldValue("steps", "must be a list")
    steps = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise InvalidFieldValue(f"steps[{i}]", "must be a map")
        for key in entry:
            if key not in {"instruction", "expected_outcome", "allowed_tools"}:
                raise InvalidFieldValue(f"steps[{i}]", f"unknown key {key!r}")
        instruction = entry.get("instruction")
        if not isinstance(instruction, str):
            raise InvalidFieldValue(f"steps[{i}].instruction", "must be a string")
        expected = entry.get("expected_outcome")
        if expected is not None and not isinstance(expected, str):
            raise InvalidFieldValue(f"steps[{i}].expected_outcome", "must be a string")
        allowed = entry.get("allowed_tools")
        if allowed is not None:
            if not isinstance(allowed, list) or any(
                not isinstance(t, str) for t in allowed
            ):
                raise InvalidFieldValue(
                    f"steps[{i}].allowed_tools", "must be a list of tool names"
                )
            allowed = tuple(allowed)
        steps.append(
            PlaybookStep(
                instruction=instruction,
                expected_outcome=expected,
                allowed_tools=allowed,
            )
        )
    return tuple(steps)


def _raise_on_violations(policy: Policy) -> None:
    violations = validate_policy(policy)
    if not violations:
        return
    first = violations[0]
    if first.field.startswith("triggers"):
        raise InvalidTrigger(first.rule)
    raise InvalidFieldValue(first.field, first.rule)


# --- serialize internals -----------------------------------------------------


def _step_to_dict(step: PlaybookStep) -> dict[str, Any]:
    out: dict[str, Any] = {"instruction": step.instruction}
    if step.expected_outcome is not None:
        out["expected_outcome"] = step.expected_outcome
    if step.allowed_tools is not None:
        out["allowed_tools"] = list(step.allowed_tools)
    return out


def _trigger_to_dict(trigger: Trigger) -> dict[str, Any]:
    if isinstance(trigger, NaturalLanguageTrigger):
        return {
            "type": "natural_language",
            "queries": list(trigger.queries),
            "threshold": trigger.threshold,
            "target": trigger.target.value,
        }
    if isinstance(trigger, KeywordTrigger):
        return {
            "type": "keyword",
            "keywords": list(trigger.keywords),
            "mode": trigger.mode.value,
            "case_sensitive": trigger.case_sensitive,
            "fuzzy_max_edits": trigger.fuzzy_max_edits,
            "target": trigger.target.value,
        }
    if isinstance(trigger, ApplicationTrigger):
        return {"type": "application", "app_id": trigger.app_id}
    if isinstance(trigger, StateTrigger):
        return {
            "type": "state",
            "path": trigger.path,
            "operator": trigger.operator.value,
            "value": trigger.value,
        }
    return {
        "type": "tool",
        "tool_name": trigger.tool_name,
        "stage": trigger.stage.value,
    }
