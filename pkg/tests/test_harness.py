"""Scenario runner, suite ablation, and metrics tests."""

import json

import pytest

from govgate.enact import AgentEmission, SessionPhase, ToolDefinition
from govgate.errors import EmptyResults, EmptySuite, ScriptExhausted
from govgate.harness import (
    AgentStep,
    CueOverride,
    HarnessRuntime,
    Scenario,
    ScriptedAgent,
    builtin_suite_path,
    compute_metrics,
    load_suite,
    run_scenario,
    run_suite,
)
from govgate.harness.suite import Suite, SuiteResult
from govgate.agent import FirstCandidateResolver
from govgate.clock import TickClock, sequential_ids

@pytest.fixture(scope="module")
def demo_suite():
    return load_suite(builtin_suite_path("demo"))


@pytest.fixture(scope="module")
def backoffice_suite():
    return load_suite(builtin_suite_path("backoffice"))


def runtime_for(suite):
    return HarnessRuntime(
        store=suite.build_store(),
        registry=suite.build_registry(),
        tool_implementations=suite.tool_implementations(),
        resolver_factory=FirstCandidateResolver,
        clock_factory=TickClock,
        id_factory_factory=sequential_ids,
    )


def scenario_by_id(suite, sid):
    return next(s for s in suite.scenarios if s.id == sid)


class TestScriptedAgent:
    def test_cue_override_fires_on_prompt(self):
        agent = ScriptedAgent(
            [
                AgentStep(
                    emission=AgentEmission(code="bad()", response="bad"),
                    overrides=(
                        CueOverride("be careful", AgentEmission(code="good()", response="good")),
                    ),
                )
            ]
        )
        emission = agent.emit("system prompt says: be careful", [])
        assert emission.response == "good"

    def test_cue_override_fires_on_tool_description(self):
        agent = ScriptedAgent(
            [
                AgentStep(
                    emission=AgentEmission(response="bad"),
                    overrides=(CueOverride("unreliable", AgentEmission(response="good")),),
                )
            ]
        )
        tools = [ToolDefinition("t", "WARNING: unreliable endpoint", {})]
        assert agent.emit("prompt", tools).response == "good"

    def test_directive_blind_step_ignores_cues(self):
        agent = ScriptedAgent(
            [
                AgentStep(
                    emission=AgentEmission(response="default"),
                    overrides=(CueOverride("cue", AgentEmission(response="governed")),),
                    reads_prompt_directives=False,
                )
            ]
        )
        assert agent.emit("cue is present", []).response == "default"

    def test_exhaustion_raises(self):
        agent = ScriptedAgent([])
        with pytest.raises(ScriptExhausted):
            agent.emit("p", [])

    def test_state_round_trip(self):
        agent = ScriptedAgent(
            [AgentStep(emission=AgentEmission(code="a()", response="r"))]
        )
        agent.emit("p", [])
        restored = ScriptedAgent.from_state(agent.state())
        with pytest.raises(ScriptExhausted):
            restored.emit("p", [])


class TestRunScenario:
    def test_crm_block_scenario(self, demo_suite):
        outcome = run_scenario(
            scenario_by_id(demo_suite, "d01-crm-delete-blocked"), runtime_for(demo_suite)
        )
        assert outcome.passed, outcome.failures
        assert outcome.terminal_phase is SessionPhase.BLOCKED
        assert outcome.invocations == ()

    def test_guard_disabled_scenario_proceeds(self, demo_suite):
        outcome = run_scenario(
            scenario_by_id(demo_suite, "d02-crm-delete-unguarded"), runtime_for(demo_suite)
        )
        assert outcome.passed, outcome.failures
        assert outcome.terminal_phase is SessionPhase.COMPLETED
        assert "crm_delete_contacts" in outcome.invocations

    def test_drop_database_denied(self, demo_suite):
        outcome = run_scenario(
            scenario_by_id(demo_suite, "d03-drop-database-denied"), runtime_for(demo_suite)
        )
        assert outcome.passed, outcome.failures
        assert outcome.terminal_phase is SessionPhase.DENIED
        assert outcome.invocations == ()

    def test_drop_database_approved_runs_exactly_once(self, demo_suite):
        outcome = run_scenario(
            scenario_by_id(demo_suite, "d04-drop-database-approved"), runtime_for(demo_suite)
        )
        assert outcome.passed, outcome.failures
        assert outcome.invocations.count("drop_database") == 1

    def test_healthcare_playbook_guided_flow(self, demo_suite):
        outcome = run_scenario(
            scenario_by_id(demo_suite, "d05-healthcare-provider-search"),
            runtime_for(demo_suite),
        )
        assert outcome.passed, outcome.failures
        assert outcome.invocations == (
            "get_active_coverage",
            "find_care_suggestions",
            "search_providers",
        )
        assert outcome.final_response.startswith("| Provider | Network |")

    def test_scenario_json_round_trip(self, demo_suite):
        for scenario in demo_suite.scenarios:
            assert Scenario.from_dict(scenario.to_dict()) == scenario


class TestRunSuite:
    def test_deterministic_across_repetitions(self, backoffice_suite):
        result = run_suite(backoffice_suite, "two", repetitions=3)
        passes = result.per_run_passes()
        assert len(set(passes)) == 1
        per_scenario = result.per_scenario_passes()
        assert all(count in (0, 3) for count in per_scenario.values())

    def test_ablation_shape(self, backoffice_suite):
        results = {
            config: run_suite(backoffice_suite, config, repetitions=1)
            for config in ("none", "two", "five")
        }
        assert results["none"].per_run_passes() == [12]
        assert results["two"].per_run_passes() == [19]
        assert results["five"].per_run_passes() == [21]

    def test_empty_suite_is_an_error(self, backoffice_suite):
        empty = Suite(
            name="empty",
            scenarios=(),
            configs={"none": ()},
            policy_sources=(),
            tools=(),
            tool_returns={},
        )
        with pytest.raises(EmptySuite):
            run_suite(empty, "none")

    def test_unknown_config_is_an_error(self, backoffice_suite):
        with pytest.raises(KeyError):
            run_suite(backoffice_suite, "seventeen")

    def test_byte_identical_trace_exports(self, backoffice_suite):
        def export(result):
            return "".join(
                json.dumps(event.to_dict()) + "\n"
                for run in result.runs
                for outcome in run
                for event in outcome.trace
            )

        first = export(run_suite(backoffice_suite, "five", repetitions=1))
        second = export(run_suite(backoffice_suite, "five", repetitions=1))
        assert first == second

    def test_no_guarded_scenario_records_invocations(self, demo_suite):
        result = run_suite(demo_suite, "default", repetitions=1)
        for run in result.runs:
            for outcome in run:
                if outcome.terminal_phase is SessionPhase.BLOCKED:
                    assert outcome.invocations == ()


def fabricated_result(config, per_run_passes, scenarios=26):
    """SuiteResult shaped from raw pass counts (shared with acceptance)."""
    scenario_ids = tuple(f"t{i:02d}" for i in range(scenarios))
    runs = []
    for passes in per_run_passes:
        outcomes = []
        for i, sid in enumerate(scenario_ids):
            outcomes.append(
                type(
                    "Outcome",
                    (),
                    {
                        "scenario_id": sid,
                        "passed": i < passes,
                        "terminal_phase": SessionPhase.COMPLETED,
                        "invocations": (),
                        "final_response": "",
                        "trace": (),
                        "failures": (),
                    },
                )()
            )
        runs.append(tuple(outcomes))
    return SuiteResult(config=config, scenario_ids=scenario_ids, runs=tuple(runs))


class TestComputeMetrics:
    def test_single_run_percentage(self):
        metrics = compute_metrics([fabricated_result("none", [12])])
        row = metrics["rows"][0]
        assert row["success_rate_percent"] == "46.2"
        assert row["mean_passes"] == "12.0"
        assert row["delta_pp"] is None

    def test_identical_configs_have_zero_delta(self):
        metrics = compute_metrics(
            [fabricated_result("a", [12]), fabricated_result("b", [12])]
        )
        assert metrics["rows"][1]["delta_pp"] == "+0.0"

    def test_reported_ablation_rows_reproduced(self):
        # raw per-run pass counts; summary rows must come out at one decimal
        metrics = compute_metrics(
            [
                fabricated_result("none", [11, 13, 12]),
                fabricated_result("two", [19, 18, 19]),
                fabricated_result("five", [20, 20, 21]),
            ]
        )
        rows = {row["config"]: row for row in metrics["rows"]}
        assert rows["none"]["success_rate_percent"] == "46.2"
        assert rows["none"]["mean_passes"] == "12.0"
        assert rows["two"]["success_rate_percent"] == "71.8"
        assert rows["two"]["mean_passes"] == "18.7"
        assert rows["five"]["success_rate_percent"] == "78.2"
        assert rows["five"]["mean_passes"] == "20.3"
        assert rows["two"]["delta_pp"] == "+25.6"
        assert rows["five"]["delta_pp"] == "+32.0"

    def test_empty_results_is_an_error(self):
        with pytest.raises(EmptyResults):
            compute_metrics([])
