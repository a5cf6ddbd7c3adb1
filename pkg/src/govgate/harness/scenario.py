"""Scenario fixtures and the single-scenario runner.

A scenario is a JSON document: the user request, which policies are enabled,
the scripted agent, an optional scripted approval decision and formatter
outputs, and expectations over observables only (terminal phase, tool
invocation log, a response predicate).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from govgate.clock import TickClock, sequential_ids
from govgate.enact.approvals import ApprovalDecision
from govgate.enact.engine import GovernanceEngine
from govgate.enact.formatting import FormatterModel, ScriptedFormatterModel
from govgate.enact.session import SessionPhase
from govgate.enact.tools import ToolRegistry
from govgate.enact.trace import TraceEvent
from govgate.harness.agent import ScriptedAgent, step_from_dict, step_to_dict
from govgate.store.store import PolicyStore


@dataclass(frozen=True)
class Expectation:
    terminal_phase: SessionPhase
    tool_invocations: tuple[str, ...] | None = None
    response: Mapping[str, str] | None = None  # {"contains"|"equals"|"regex": value}


@dataclass(frozen=True)
class Scenario:
    id: str
    user_input: str
    policy_set: tuple[str, ...]
    agent_steps: tuple = ()
    app_id: str | None = None
    intent: str | None = None
    state: Mapping[str, Any] = field(default_factory=dict)
    approval: ApprovalDecision | None = None
    formatter: Mapping[str, Any] | None = None
    expected: Expectation = Expectation(SessionPhase.COMPLETED)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Scenario":
        expected = data.get("expected", {})
        invocations = expected.get("tool_invocations")
        return cls(
            id=data["id"],
            user_input=data["user_input"],
            policy_set=tuple(data.get("policy_set", [])),
            agent_steps=tuple(step_from_dict(s) for s in data.get("agent", [])),
            app_id=data.get("app_id"),
            intent=data.get("intent"),
            state=data.get("state", {}),
            approval=ApprovalDecision(data["approval"]) if data.get("approval") else None,
            formatter=data.get("formatter"),
            expected=Expectation(
                terminal_phase=SessionPhase(expected.get("terminal_phase", "completed")),
                tool_invocations=tuple(invocations) if invocations is not None else None,
                response=expected.get("response"),
            ),
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "user_input": self.user_input,
            "policy_set": list(self.policy_set),
            "agent": [step_to_dict(s) for s in self.agent_steps],
        }
        if self.app_id is not None:
            out["app_id"] = self.app_id
        if self.intent is not None:
            out["intent"] = self.intent
        if self.state:
            out["state"] = dict(self.state)
        if self.approval is not None:
            out["approval"] = self.approval.value
        if self.formatter is not None:
            out["formatter"] = dict(self.formatter)
        expected: dict[str, Any] = {"terminal_phase": self.expected.terminal_phase.value}
        if self.expected.tool_invocations is not None:
            expected["tool_invocations"] = list(self.expected.tool_invocations)
        if self.expected.response is not None:
            expected["response"] = dict(self.expected.response)
        out["expected"] = expected
        return out


@dataclass(frozen=True)
class ScenarioOutcome:
    scenario_id: str
    terminal_phase: SessionPhase
    invocations: tuple[str, ...]
    final_response: Any
    trace: tuple[TraceEvent, ...]
    passed: bool
    failures: tuple[str, ...]


@dataclass
class HarnessRuntime:
    """Everything a scenario run needs besides the scenario itself. The store
    holds the full policy catalog; each scenario runs against a clone with
    exactly its policy_set enabled."""

    store: PolicyStore
    registry: ToolRegistry
    tool_implementations: Mapping[str, Any]
    resolver_factory: Any
    clock_factory: Any = TickClock
    id_factory_factory: Any = sequential_ids

    def engine_for(self, scenario: Scenario) -> GovernanceEngine:
        scoped = self.store.clone(enabled_ids=set(scenario.policy_set))
        formatter: FormatterModel | None = None
        if scenario.formatter is not None:
            formatter = ScriptedFormatterModel(
                restructured=scenario.formatter.get("restructure"),
                extracted=scenario.formatter.get("extract"),
            )
        return GovernanceEngine(
            store=scoped,
            resolver=self.resolver_factory(),
            registry=self.registry,
            tool_implementations=self.tool_implementations,
            formatter_model=formatter,
            clock=self.clock_factory(),
            id_factory=self.id_factory_factory(),
        )


def run_scenario(scenario: Scenario, runtime: HarnessRuntime) -> ScenarioOutcome:
    """Drive a fresh session through every checkpoint with the scripted
    agent; apply the scripted approval decision if the session pauses."""
    engine = runtime.engine_for(scenario)
    agent = ScriptedAgent(scenario.agent_steps)
    session = engine.create_session(
        scenario.user_input,
        agent,
        app_id=scenario.app_id,
        intent=scenario.intent,
        state=scenario.state,
    )
    engine.run(session)
    while session.phase is SessionPhase.AWAITING_APPROVAL and scenario.approval is not None:
        engine.resolve_approval(session.pending_request_id, scenario.approval, actor="harness")

    invocations = tuple(inv.tool_name for inv in session.invocations)
    failures = _check_expectations(scenario, session.phase, invocations, session.final_response)
    return ScenarioOutcome(
        scenario_id=scenario.id,
        terminal_phase=session.phase,
        invocations=invocations,
        final_response=session.final_response,
        trace=session.trace.events(),
        passed=not failures,
        failures=tuple(failures),
    )


def _check_expectations(
    scenario: Scenario,
    phase: SessionPhase,
    invocations: tuple[str, ...],
    final_response: Any,
) -> list[str]:
    failures = []
    expected = scenario.expected
    if phase is not expected.terminal_phase:
        failures.append(f"terminal phase {phase.value}, expected {expected.terminal_phase.value}")
    if expected.tool_invocations is not None and invocations != expected.tool_invocations:
        failures.append(
            f"tool invocations {list(invocations)}, expected {list(expected.tool_invocations)}"
        )
    if expected.response is not None:
        text = final_response if isinstance(final_response, str) else json.dumps(final_response)
        if not _response_matches(expected.response, text):
            failures.append(f"response predicate {dict(expected.response)} failed on {text!r}")
    return failures


def _response_matches(predicate: Mapping[str, str], text: str) -> bool:
    if "equals" in predicate:
        return text == predicate["equals"]
    if "contains" in predicate:
        return predicate["contains"] in text
    if "regex" in predicate:
        return re.search(predicate["regex"], text) is not None
    return True


def load_scenario_file(path: str | Path) -> Scenario:
    return Scenario.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
