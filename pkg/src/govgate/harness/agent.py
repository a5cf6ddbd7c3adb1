"""Deterministic scripted agent.

Each step declares a default emission plus optional cue-keyed overrides:
when the step reads prompt directives and a cue substring appears in the
system prompt or any enriched tool description, that override's emission is
used instead. This is how scenarios model an agent that behaves differently
once a playbook block or guidance warning is present in its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from govgate.enact.engine import AgentEmission
from govgate.enact.tools import ToolDefinition
from govgate.errors import ScriptExhausted


@dataclass(frozen=True)
class CueOverride:
    cue: str
    emission: AgentEmission


@dataclass(frozen=True)
class AgentStep:
    emission: AgentEmission
    overrides: tuple[CueOverride, ...] = ()
    reads_prompt_directives: bool = True


class ScriptedAgent:
    """Plays back steps in order; same inputs yield the same emissions."""

    def __init__(self, steps: Sequence[AgentStep], cursor: int = 0):
        self._steps = tuple(steps)
        self._cursor = cursor

    def emit(self, system_prompt: str, tools: Sequence[ToolDefinition]) -> AgentEmission:
        if self._cursor >= len(self._steps):
            raise ScriptExhausted(f"no step {self._cursor} in a {len(self._steps)}-step script")
        step = self._steps[self._cursor]
        self._cursor += 1
        if step.reads_prompt_directives:
            haystack = "\n".join([system_prompt, *(t.description for t in tools)])
            for override in step.overrides:
                if override.cue in haystack:
                    return override.emission
        return step.emission

    # --- snapshot support (restart survival) ---------------------------------

    def state(self) -> dict[str, Any]:
        return {"steps": [step_to_dict(s) for s in self._steps], "cursor": self._cursor}

    @classmethod
    def from_state(cls, state: Mapping[str, Any]) -> "ScriptedAgent":
        steps = [step_from_dict(s) for s in state["steps"]]
        return cls(steps, cursor=state.get("cursor", 0))


def emission_to_dict(emission: AgentEmission) -> dict[str, Any]:
    return {
        "code": emission.code,
        "response": emission.response,
        "arguments": {k: dict(v) for k, v in emission.arguments.items()},
    }


def emission_from_dict(data: Mapping[str, Any]) -> AgentEmission:
    return AgentEmission(
        code=data.get("code", ""),
        response=data.get("response"),
        arguments=data.get("arguments", {}),
    )


def step_to_dict(step: AgentStep) -> dict[str, Any]:
    return {
        "emission": emission_to_dict(step.emission),
        "overrides": [
            {"cue": o.cue, "emission": emission_to_dict(o.emission)} for o in step.overrides
        ],
        "reads_prompt_directives": step.reads_prompt_directives,
    }


def step_from_dict(data: Mapping[str, Any]) -> AgentStep:
    return AgentStep(
        emission=emission_from_dict(data.get("emission", {})),
        overrides=tuple(
            CueOverride(cue=o["cue"], emission=emission_from_dict(o["emission"]))
            for o in data.get("overrides", [])
        ),
        reads_prompt_directives=data.get("reads_prompt_directives", True),
    )
