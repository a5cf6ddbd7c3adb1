"""Deterministic scripted agent, scenario runner, and ablation suites."""

from govgate.harness.agent import AgentStep, CueOverride, ScriptedAgent
from govgate.harness.builtin import BUILTIN_SUITES, builtin_suite_path
from govgate.harness.scenario import (
    Expectation,
    HarnessRuntime,
    Scenario,
    ScenarioOutcome,
    load_scenario_file,
    run_scenario,
)
from govgate.harness.suite import (
    Suite,
    SuiteResult,
    compute_metrics,
    load_suite,
    run_suite,
)

__all__ = [
    "AgentStep",
    "BUILTIN_SUITES",
    "CueOverride",
    "Expectation",
    "HarnessRuntime",
    "Scenario",
    "ScenarioOutcome",
    "ScriptedAgent",
    "Suite",
    "SuiteResult",
    "builtin_suite_path",
    "compute_metrics",
    "load_scenario_file",
    "load_suite",
    "run_scenario",
    "run_suite",
]
