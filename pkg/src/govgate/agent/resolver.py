"""Resolver port: picks one policy when several natural-language candidates
cross their thresholds.

Production wires an LLM-backed structured reasoning step here; the shipped
implementations are deterministic so every selection is replayable."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

from govgate.errors import ResolverFailure
from govgate.model.types import PolicyId


@dataclass(frozen=True)
class ResolverCandidate:
    policy_id: PolicyId
    priority: int
    score: float
    summary: str


@dataclass(frozen=True)
class ResolverVerdict:
    selected_index: int
    confidence: float
    justification: str


class Resolver(Protocol):
    def resolve(
        self, candidates: Sequence[ResolverCandidate], context_text: str
    ) -> ResolverVerdict: ...


def check_verdict(verdict: ResolverVerdict, candidate_count: int) -> ResolverVerdict:
    """Reject out-of-contract verdicts as resolver failures."""
    if not 0 <= verdict.selected_index < candidate_count:
        raise ResolverFailure(
            f"selected index {verdict.selected_index} outside 0..{candidate_count - 1}"
        )
    if not 0.0 <= verdict.confidence <= 1.0:
        raise ResolverFailure(f"confidence {verdict.confidence} outside [0,1]")
    if not verdict.justification:
        raise ResolverFailure("justification must be nonempty")
    return verdict


class FirstCandidateResolver:
    """Picks the top-scored candidate. Candidates arrive sorted by score
    descending (id ascending on ties), so index 0 is the best retrieval."""

    def __init__(self):
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        return self._calls

    def resolve(
        self, candidates: Sequence[ResolverCandidate], context_text: str
    ) -> ResolverVerdict:
        with self._lock:
            self._calls += 1
        if not candidates:
            raise ResolverFailure("no candidates to resolve")
        return ResolverVerdict(
            selected_index=0,
            confidence=1.0,
            justification="highest similarity score",
        )


class ScriptedResolver:
    """Test resolver: a map from context text (its own hash) to a verdict.

    Unscripted contexts raise ResolverFailure unless a default verdict is
    supplied, so a test never silently falls through to unplanned behavior.
    """

    def __init__(
        self,
        script: Mapping[str, ResolverVerdict] | None = None,
        default: ResolverVerdict | None = None,
    ):
        self._script = dict(script or {})
        self._default = default
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        return self._calls

    def resolve(
        self, candidates: Sequence[ResolverCandidate], context_text: str
    ) -> ResolverVerdict:
        with self._lock:
            self._calls += 1
        verdict = self._script.get(context_text, self._default)
        if verdict is None:
            raise ResolverFailure(f"no scripted verdict for context: {context_text!r}")
        return verdict
