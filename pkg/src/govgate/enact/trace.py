"""Structured explanation traces.

Every policy decision and lifecycle transition lands in an append-only,
per-session sequence of events. The export format is newline-delimited JSON
with fixed field names: sequence, session, checkpoint, decision, detail, at
(RFC3339 timestamp). Decisions are stored already serialized so a restored
session exports the same bytes it would have live.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Mapping

from govgate.agent.matching import PolicyDecision
from govgate.agent.resolver import ResolverVerdict
from govgate.clock import Clock
from govgate.triggers.context import TriggerOutcome

LIFECYCLE = "lifecycle"


@dataclass(frozen=True)
class TraceEvent:
    sequence: int
    session: str
    checkpoint: str
    decision: Mapping[str, Any] | None
    detail: Mapping[str, Any]
    at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "sequence": self.sequence,
            "session": self.session,
            "checkpoint": self.checkpoint,
            "decision": dict(self.decision) if self.decision is not None else None,
            "detail": dict(self.detail),
            "at": self.at.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TraceEvent":
        return cls(
            sequence=data["sequence"],
            session=data["session"],
            checkpoint=data["checkpoint"],
            decision=data.get("decision"),
            detail=data.get("detail", {}),
            at=datetime.fromisoformat(data["at"]),
        )


class TraceLog:
    """Append-only event log for one session; sequences are gapless from 1."""

    def __init__(self, session_id: str, clock: Clock):
        self._session_id = session_id
        self._clock = clock
        self._events: list[TraceEvent] = []
        self._lock = threading.Lock()

    def append(
        self,
        checkpoint: str,
        detail: Mapping[str, Any],
        decision: PolicyDecision | None = None,
    ) -> TraceEvent:
        with self._lock:
            event = TraceEvent(
                sequence=len(self._events) + 1,
                session=self._session_id,
                checkpoint=checkpoint,
                decision=decision_to_dict(decision),
                detail=detail,
                at=self._clock.now(),
            )
            self._events.append(event)
            return event

    def events(self, from_sequence: int = 0) -> tuple[TraceEvent, ...]:
        with self._lock:
            return tuple(e for e in self._events if e.sequence >= from_sequence)

    def to_ndjson(self, from_sequence: int = 0) -> str:
        return "".join(
            json.dumps(event.to_dict()) + "\n" for event in self.events(from_sequence)
        )

    def restore_events(self, events: list[Mapping[str, Any]]) -> None:
        """Replace the log with previously exported events (restart path)."""
        with self._lock:
            self._events = [TraceEvent.from_dict(e) for e in events]


def decision_to_dict(decision: PolicyDecision | None) -> dict[str, Any] | None:
    if decision is None:
        return None
    return {
        "checkpoint": decision.checkpoint.value,
        "fired": [
            [policy_id, _outcome_to_dict(outcome)]
            for policy_id, outcome in decision.fired
        ],
        "selected": decision.selected,
        "resolver_verdict": _verdict_to_dict(decision.resolver_verdict),
        "phase": decision.phase.value,
    }


def _outcome_to_dict(outcome: TriggerOutcome) -> dict[str, Any]:
    return {
        "matched": outcome.matched,
        "score": outcome.score,
        "matched_query": outcome.matched_query,
    }


def _verdict_to_dict(verdict: ResolverVerdict | None) -> dict[str, Any] | None:
    if verdict is None:
        return None
    return {
        "selected_index": verdict.selected_index,
        "confidence": verdict.confidence,
        "justification": verdict.justification,
    }
