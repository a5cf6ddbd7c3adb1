"""Tool registry, session-scoped description enrichment, and code scanning.

Registry definitions are never mutated by sessions: enrichment always works
on deep copies, so the registry serializes to identical bytes before and
after any number of sessions.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from govgate.model.types import Placement, Policy


@dataclass(frozen=True)
class ToolDefinition:
    name: str
    description: str
    parameters: Mapping[str, Any] = field(default_factory=dict)


class ToolRegistry:
    """Ordered, name-unique collection of tool definitions."""

    def __init__(self, tools: Iterable[ToolDefinition] = ()):
        self._tools: dict[str, ToolDefinition] = {}
        for tool in tools:
            self.add(tool)

    def add(self, tool: ToolDefinition) -> None:
        if tool.name in self._tools:
            raise ValueError(f"duplicate tool name: {tool.name}")
        self._tools[tool.name] = tool

    def get(self, name: str) -> ToolDefinition | None:
        return self._tools.get(name)

    def names(self) -> list[str]:
        return list(self._tools)

    def definitions(self) -> list[ToolDefinition]:
        return list(self._tools.values())

    def serialize(self) -> bytes:
        """Canonical bytes for immutability comparisons."""
        payload = [
            {
                "name": t.name,
                "description": t.description,
                "parameters": t.parameters,
            }
            for t in self._tools.values()
        ]
        return json.dumps(payload, sort_keys=True).encode("utf-8")


GUIDANCE_PREFIX = "[policy guidance {policy_id}]: "


def enrich_tools(
    registry_tools: Sequence[ToolDefinition],
    guides: Sequence[tuple[Policy, str]],
) -> list[ToolDefinition]:
    """Independent copies of the given tools with matched guidance applied.

    ``guides`` arrives ordered (priority desc, id asc); appended guidance
    follows the original description in that order, prepended guidance
    precedes it in that same reading order (highest priority first).
    """
    appends: dict[str, list[str]] = {}
    prepends: dict[str, list[str]] = {}
    for policy, tool_name in guides:
        block = GUIDANCE_PREFIX.format(policy_id=policy.id) + policy.payload.guidance
        bucket = appends if policy.payload.placement is Placement.APPEND else prepends
        bucket.setdefault(tool_name, []).append(block)

    out = []
    for tool in registry_tools:
        description = tool.description
        for block in appends.get(tool.name, ()):
            description = f"{description}\n\n{block}"
        before = prepends.get(tool.name, ())
        if before:
            description = "\n\n".join(before) + "\n\n" + description
        out.append(
            ToolDefinition(
                name=tool.name,
                description=description,
                parameters=copy.deepcopy(dict(tool.parameters)),
            )
        )
    return out


def scan_code_for_tools(code: str, registry_names: Sequence[str]) -> list[str]:
    """Registered tool names invoked in the code, in first-occurrence order.

    A name counts as invoked iff it appears as a whole identifier token
    immediately followed by "(" (whitespace allowed). Lexical by design:
    language-agnostic over generated snippets, and over-detection is
    fail-safe for a gate.
    """
    positions: list[tuple[int, str]] = []
    for name in registry_names:
        pattern = re.compile(
            r"(?<![A-Za-z0-9_])" + re.escape(name) + r"(?![A-Za-z0-9_])\s*\("
        )
        match = pattern.search(code)
        if match:
            positions.append((match.start(), name))
    positions.sort()
    return [name for _, name in positions]
