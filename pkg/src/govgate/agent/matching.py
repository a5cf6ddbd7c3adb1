"""Checkpoint matching and conflict resolution.

Every selection runs the same two-phase procedure: deterministic triggers
(keyword, state, application, tool) are evaluated first and decide outright
by priority; only when none match are natural-language candidates retrieved
and — if more than one crosses its threshold — handed to the resolver.
The resolver is never consulted when a deterministic trigger matched.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from govgate.errors import MissingTargetField
from govgate.model.types import (
    Policy,
    PolicyId,
    PolicyKind,
    TargetField,
)
from govgate.agent.resolver import (
    Resolver,
    ResolverCandidate,
    ResolverVerdict,
    check_verdict,
)
from govgate.store.store import PolicyStore
from govgate.triggers.context import MatchContext, TriggerOutcome
from govgate.triggers.embeddings import EmbeddingProvider
from govgate.triggers.evaluate import evaluate_trigger


class Checkpoint(str, Enum):
    INTENT_ANALYSIS = "intent_analysis"
    TOOL_PREPARATION = "tool_preparation"
    POST_CODE_GENERATION = "post_code_generation"
    FINAL_RESPONSE = "final_response"


class MatchPhase(str, Enum):
    DETERMINISTIC = "deterministic"
    SEMANTIC_RESOLVED = "semantic_resolved"
    NO_MATCH = "no_match"


@dataclass(frozen=True)
class PolicyDecision:
    checkpoint: Checkpoint
    fired: tuple[tuple[PolicyId, TriggerOutcome], ...]
    selected: PolicyId | None
    resolver_verdict: ResolverVerdict | None
    phase: MatchPhase


_ALL_TARGETS = (
    TargetField.USER_INPUT,
    TargetField.INTENT,
    TargetField.SUB_TASK,
    TargetField.FINAL_RESPONSE,
)
_FORMATTER_TARGETS = (TargetField.USER_INPUT, TargetField.FINAL_RESPONSE)


def match_intent_guards(
    ctx: MatchContext,
    store: PolicyStore,
    embedder: EmbeddingProvider,
    resolver: Resolver,
) -> PolicyDecision:
    """Guards decide before anything else runs; a selection blocks the session."""
    return _two_phase_match(
        kind=PolicyKind.INTENT_GUARD,
        checkpoint=Checkpoint.INTENT_ANALYSIS,
        ctx=ctx,
        store=store,
        embedder=embedder,
        resolver=resolver,
        targets=_ALL_TARGETS,
        resolver_context=ctx.user_input,
    )


def match_playbooks(
    ctx: MatchContext,
    store: PolicyStore,
    embedder: EmbeddingProvider,
    resolver: Resolver,
) -> PolicyDecision:
    """Same two-phase procedure as guards, over playbooks; at most one is
    selected per request."""
    return _two_phase_match(
        kind=PolicyKind.PLAYBOOK,
        checkpoint=Checkpoint.INTENT_ANALYSIS,
        ctx=ctx,
        store=store,
        embedder=embedder,
        resolver=resolver,
        targets=_ALL_TARGETS,
        resolver_context=ctx.user_input,
    )


def match_tool_guides(
    tools: Sequence[str],
    ctx: MatchContext,
    store: PolicyStore,
    embedder: EmbeddingProvider,
) -> list[tuple[PolicyId, str]]:
    """Cumulative: every enabled guide whose triggers match contributes one
    entry per tool it targets that is present, ordered (priority desc, id asc)
    then by the caller's tool order. No selection, no resolver."""
    out: list[tuple[PolicyId, str]] = []
    seen: set[tuple[PolicyId, str]] = set()
    for policy in store.list_by_kind(PolicyKind.TOOL_GUIDE):
        if not policy.enabled:
            continue
        if not _any_trigger_matches(policy, ctx, embedder):
            continue
        targeted = set(policy.payload.tool_names)
        for tool in tools:
            if tool in targeted and (policy.id, tool) not in seen:
                seen.add((policy.id, tool))
                out.append((policy.id, tool))
    return out


def match_tool_approvals(
    planned_tools: Sequence[str],
    store: PolicyStore,
) -> tuple[PolicyId, str] | None:
    """Scan the plan in order; the first tool matching any enabled approval
    pattern gates execution. Among policies matching that tool the highest
    priority wins, ties by id ascending."""
    policies = [
        p for p in store.list_by_kind(PolicyKind.TOOL_APPROVAL) if p.enabled
    ]
    if not policies:
        return None
    for tool in planned_tools:
        matching = [
            p
            for p in policies
            if any(glob_match(pattern, tool) for pattern in p.payload.tool_patterns)
        ]
        if matching:
            # list_by_kind already orders by (priority desc, id asc)
            return matching[0].id, tool
    return None


def match_output_formatters(
    ctx: MatchContext,
    store: PolicyStore,
    embedder: EmbeddingProvider,
    resolver: Resolver,
) -> PolicyDecision:
    """Formatter triggers consider the user input and the generated response;
    at most one formatter is selected."""
    if ctx.final_response is None:
        raise MissingTargetField(TargetField.FINAL_RESPONSE.value)
    return _two_phase_match(
        kind=PolicyKind.OUTPUT_FORMATTER,
        checkpoint=Checkpoint.FINAL_RESPONSE,
        ctx=ctx,
        store=store,
        embedder=embedder,
        resolver=resolver,
        targets=_FORMATTER_TARGETS,
        resolver_context=ctx.final_response,
    )


def glob_match(pattern: str, name: str) -> bool:
    """Glob limited to literal characters plus ``*`` (any run, incl. empty)."""
    parts = pattern.split("*")
    if len(parts) == 1:
        return pattern == name
    if not name.startswith(parts[0]) or not name.endswith(parts[-1]):
        return False
    position = len(parts[0])
    end_limit = len(name) - len(parts[-1])
    for part in parts[1:-1]:
        if not part:
            continue
        found = name.find(part, position, end_limit)
        if found < 0:
            return False
        position = found + len(part)
    return position <= end_limit


# --- two-phase internals ------------------------------------------------------


def _two_phase_match(
    kind: PolicyKind,
    checkpoint: Checkpoint,
    ctx: MatchContext,
    store: PolicyStore,
    embedder: EmbeddingProvider,
    resolver: Resolver,
    targets: tuple[TargetField, ...],
    resolver_context: str,
) -> PolicyDecision:
    policies = [p for p in store.list_by_kind(kind) if p.enabled]

    # Phase 1: deterministic triggers; highest priority wins, id breaks ties.
    fired: list[tuple[PolicyId, TriggerOutcome]] = []
    for policy in policies:  # already (priority desc, id asc)
        outcome = _first_deterministic_match(policy, ctx)
        if outcome is not None:
            fired.append((policy.id, outcome))
    if fired:
        return PolicyDecision(
            checkpoint=checkpoint,
            fired=tuple(fired),
            selected=fired[0][0],
            resolver_verdict=None,
            phase=MatchPhase.DETERMINISTIC,
        )

    # Phase 2: natural-language candidates via semantic retrieval.
    candidates = _semantic_candidates(kind, ctx, store, targets)
    if not candidates:
        return PolicyDecision(
            checkpoint=checkpoint,
            fired=(),
            selected=None,
            resolver_verdict=None,
            phase=MatchPhase.NO_MATCH,
        )
    fired = [
        (c.policy_id, TriggerOutcome(matched=True, score=c.score, matched_query=c.summary))
        for c in candidates
    ]
    if len(candidates) == 1:
        return PolicyDecision(
            checkpoint=checkpoint,
            fired=tuple(fired),
            selected=candidates[0].policy_id,
            resolver_verdict=None,
            phase=MatchPhase.SEMANTIC_RESOLVED,
        )
    verdict = check_verdict(
        resolver.resolve(candidates, resolver_context), len(candidates)
    )
    return PolicyDecision(
        checkpoint=checkpoint,
        fired=tuple(fired),
        selected=candidates[verdict.selected_index].policy_id,
        resolver_verdict=verdict,
        phase=MatchPhase.SEMANTIC_RESOLVED,
    )


def _any_trigger_matches(
    policy: Policy, ctx: MatchContext, embedder: EmbeddingProvider
) -> bool:
    """Any-of semantics over all trigger types; absent targets never match."""
    for trigger in policy.triggers:
        try:
            if evaluate_trigger(trigger, ctx, embedder).matched:
                return True
        except MissingTargetField:
            continue
    return False


def _first_deterministic_match(policy: Policy, ctx: MatchContext) -> TriggerOutcome | None:
    for trigger in policy.deterministic_triggers():
        outcome = evaluate_trigger(trigger, ctx)
        if outcome.matched:
            return outcome
    return None


def _semantic_candidates(
    kind: PolicyKind,
    ctx: MatchContext,
    store: PolicyStore,
    targets: tuple[TargetField, ...],
) -> list[ResolverCandidate]:
    pool = max(len(store), 1)
    best: dict[PolicyId, ResolverCandidate] = {}
    for target in targets:
        text = ctx.target_text(target)
        if text is None or not text:
            continue
        for hit in store.semantic_search(
            text, kind, top_k=pool, threshold=0.0, target=target
        ):
            current = best.get(hit.policy_id)
            if current is None or hit.score > current.score:
                policy = store.get(hit.policy_id)
                best[hit.policy_id] = ResolverCandidate(
                    policy_id=hit.policy_id,
                    priority=policy.priority if policy else 0,
                    score=hit.score,
                    summary=hit.matched_query,
                )
    return sorted(best.values(), key=lambda c: (-c.score, c.policy_id))
