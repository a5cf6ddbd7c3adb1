"""Suite running and success metrics.

A suite is a directory: ``suite.json`` naming the policy subsets
(configurations), a policy directory, a fake-tool catalog, and one JSON
scenario per file. Every repetition rebuilds the store from the policy
files, so runs never see carryover state; with the deterministic clock,
ids, agent, and resolver, repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from govgate.agent.resolver import FirstCandidateResolver
from govgate.clock import TickClock, sequential_ids
from govgate.enact.tools import ToolDefinition, ToolRegistry
from govgate.errors import EmptyResults, EmptySuite
from govgate.harness.scenario import (
    HarnessRuntime,
    Scenario,
    ScenarioOutcome,
    run_scenario,
)
from govgate.model.parsing import parse_policy_file
from govgate.store.store import PolicyStore
from govgate.triggers.embeddings import EmbeddingProvider, HashedBagOfWordsEmbedder


@dataclass(frozen=True)
class Suite:
    name: str
    scenarios: tuple[Scenario, ...]
    configs: Mapping[str, tuple[str, ...]]
    policy_sources: tuple[str, ...]  # raw markdown, one per policy file
    tools: tuple[ToolDefinition, ...]
    tool_returns: Mapping[str, Any]

    def config_ids(self, config_name: str) -> tuple[str, ...]:
        if config_name == "all":
            return tuple(
                parse_policy_file(text).id for text in self.policy_sources
            )
        if config_name not in self.configs:
            raise KeyError(
                f"unknown policy config {config_name!r}; have {sorted(self.configs)} and 'all'"
            )
        return self.configs[config_name]

    def build_store(self, embedder: EmbeddingProvider | None = None) -> PolicyStore:
        store = PolicyStore(embedder or HashedBagOfWordsEmbedder(), clock=TickClock())
        for text in self.policy_sources:
            store.upsert(parse_policy_file(text), source_text=text)
        return store

    def build_registry(self) -> ToolRegistry:
        return ToolRegistry(self.tools)

    def tool_implementations(self) -> dict[str, Callable[[Mapping[str, Any]], Any]]:
        def canned(value):
            return lambda arguments: value

        return {name: canned(value) for name, value in self.tool_returns.items()}


def load_suite(directory: str | Path) -> Suite:
    path = Path(directory)
    manifest = json.loads((path / "suite.json").read_text(encoding="utf-8"))

    policies_dir = path / manifest.get("policies_dir", "policies")
    policy_sources = tuple(
        f.read_text(encoding="utf-8") for f in sorted(policies_dir.glob("*.md"))
    )

    tool_entries = json.loads(
        (path / manifest.get("tools", "tools.json")).read_text(encoding="utf-8")
    )
    tools = tuple(
        ToolDefinition(
            name=entry["name"],
            description=entry["description"],
            parameters=entry.get("parameters", {}),
        )
        for entry in tool_entries
    )
    tool_returns = {entry["name"]: entry.get("returns") for entry in tool_entries}

    scenarios_dir = path / manifest.get("scenarios_dir", "scenarios")
    scenarios = tuple(
        Scenario.from_dict(json.loads(f.read_text(encoding="utf-8")))
        for f in sorted(scenarios_dir.glob("*.json"))
    )

    return Suite(
        name=manifest.get("name", path.name),
        scenarios=scenarios,
        configs={k: tuple(v) for k, v in manifest.get("configs", {}).items()},
        policy_sources=policy_sources,
        tools=tools,
        tool_returns=tool_returns,
    )


@dataclass(frozen=True)
class SuiteResult:
    config: str
    scenario_ids: tuple[str, ...]
    runs: tuple[tuple[ScenarioOutcome, ...], ...]

    @property
    def repetitions(self) -> int:
        return len(self.runs)

    @property
    def total_passes(self) -> int:
        return sum(outcome.passed for run in self.runs for outcome in run)

    @property
    def success_rate(self) -> float:
        total = self.repetitions * len(self.scenario_ids)
        return self.total_passes / total

    def per_run_passes(self) -> list[int]:
        return [sum(o.passed for o in run) for run in self.runs]

    def per_scenario_passes(self) -> dict[str, int]:
        counts = {sid: 0 for sid in self.scenario_ids}
        for run in self.runs:
            for outcome in run:
                counts[outcome.scenario_id] += outcome.passed
        return counts

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config,
            "repetitions": self.repetitions,
            "scenarios": len(self.scenario_ids),
            "per_run_passes": self.per_run_passes(),
            "total_passes": self.total_passes,
            "success_rate": self.success_rate,
            "per_scenario_passes": self.per_scenario_passes(),
        }


def run_suite(suite: Suite, config_name: str, repetitions: int = 1) -> SuiteResult:
    """Run every scenario under the named policy configuration; each
    repetition gets a freshly rebuilt store.

    The configuration is the enabled universe: a scenario's effective policy
    set is the intersection of its own policy_set with the configuration, so
    ablations can shrink what a scenario sees without editing scenarios.
    """
    if not suite.scenarios:
        raise EmptySuite("success rate is undefined over zero scenarios")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    universe = set(suite.config_ids(config_name))
    registry = suite.build_registry()
    implementations = suite.tool_implementations()

    runs = []
    for _ in range(repetitions):
        runtime = HarnessRuntime(
            store=suite.build_store(),
            registry=registry,
            tool_implementations=implementations,
            resolver_factory=FirstCandidateResolver,
            clock_factory=TickClock,
            id_factory_factory=sequential_ids,
        )
        outcomes = []
        for scenario in suite.scenarios:
            effective = [pid for pid in scenario.policy_set if pid in universe]
            scoped = Scenario.from_dict({**scenario.to_dict(), "policy_set": effective})
            outcomes.append(run_scenario(scoped, runtime))
        runs.append(tuple(outcomes))

    return SuiteResult(
        config=config_name,
        scenario_ids=tuple(s.id for s in suite.scenarios),
        runs=tuple(runs),
    )


def one_decimal(value: Decimal) -> Decimal:
    return value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


def compute_metrics(results: Sequence[SuiteResult]) -> dict[str, Any]:
    """Success-rate summary across configurations.

    Percentages round half-up to one decimal from exact rationals; deltas are
    differences of the rounded percentages against the first configuration.
    """
    if not results:
        raise EmptyResults("metrics are undefined over zero results")
    rows = []
    baseline_sr: Decimal | None = None
    for result in results:
        scenario_count = len(result.scenario_ids)
        total = result.repetitions * scenario_count
        sr_exact = Decimal(result.total_passes) * 100 / Decimal(total)
        sr = one_decimal(sr_exact)
        mean_passes = one_decimal(Decimal(result.total_passes) / Decimal(result.repetitions))
        if baseline_sr is None:
            baseline_sr = sr
            delta = None
        else:
            delta = sr - baseline_sr
        rows.append(
            {
                "config": result.config,
                "repetitions": result.repetitions,
                "scenarios": scenario_count,
                "per_run_passes": result.per_run_passes(),
                "mean_passes": str(mean_passes),
                "success_rate_percent": str(sr),
                "delta_pp": f"{delta:+.1f}" if delta is not None else None,
                "per_scenario_passes": result.per_scenario_passes(),
            }
        )
    return {"configs": [r["config"] for r in rows], "rows": rows}
