"""Human-in-the-loop approval requests.

A paused session owns exactly one pending request; terminal statuses are
immutable. The registry is the synchronization point between session loops
and whatever surface (gateway, console, test) resolves approvals.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Mapping

from govgate.clock import Clock, IdFactory
from govgate.errors import AlreadyResolved, UnknownRequest


class ApprovalStatus(str, Enum):
    PENDING = "pending"
    APPROVED = "approved"
    DENIED = "denied"
    AUTO_APPROVED = "auto_approved"


class ApprovalDecision(str, Enum):
    APPROVE = "approve"
    DENY = "deny"


@dataclass
class ApprovalRequest:
    id: str
    session: str
    policy: str
    tool_name: str
    tool_arguments: Mapping[str, Any]
    requested_at: datetime
    status: ApprovalStatus = ApprovalStatus.PENDING
    resolved_by: str | None = None
    resolved_at: datetime | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "session": self.session,
            "policy": self.policy,
            "tool_name": self.tool_name,
            "tool_arguments": dict(self.tool_arguments),
            "requested_at": self.requested_at.isoformat(),
            "status": self.status.value,
            "resolved_by": self.resolved_by,
            "resolved_at": self.resolved_at.isoformat() if self.resolved_at else None,
        }


class ApprovalRegistry:
    """Thread-safe request book; notifies watchers when a request goes pending."""

    def __init__(self, clock: Clock, id_factory: IdFactory):
        self._clock = clock
        self._id_factory = id_factory
        self._requests: dict[str, ApprovalRequest] = {}
        self._condition = threading.Condition()

    def create(
        self,
        session: str,
        policy: str,
        tool_name: str,
        tool_arguments: Mapping[str, Any],
        auto_approved: bool = False,
    ) -> ApprovalRequest:
        request = ApprovalRequest(
            id=self._id_factory(),
            session=session,
            policy=policy,
            tool_name=tool_name,
            tool_arguments=tool_arguments,
            requested_at=self._clock.now(),
            status=ApprovalStatus.AUTO_APPROVED if auto_approved else ApprovalStatus.PENDING,
        )
        with self._condition:
            self._requests[request.id] = request
            if request.status is ApprovalStatus.PENDING:
                self._condition.notify_all()
        return request

    def restore(self, request: ApprovalRequest) -> None:
        with self._condition:
            self._requests[request.id] = request
            if request.status is ApprovalStatus.PENDING:
                self._condition.notify_all()

    def get(self, request_id: str) -> ApprovalRequest | None:
        with self._condition:
            return self._requests.get(request_id)

    def pending(self) -> list[ApprovalRequest]:
        """Oldest first, id as tiebreak."""
        with self._condition:
            waiting = [
                r for r in self._requests.values() if r.status is ApprovalStatus.PENDING
            ]
        waiting.sort(key=lambda r: (r.requested_at, r.id))
        return waiting

    def mark_resolved(
        self, request_id: str, decision: ApprovalDecision, actor: str
    ) -> ApprovalRequest:
        """Transition Pending -> Approved/Denied exactly once."""
        with self._condition:
            request = self._requests.get(request_id)
            if request is None:
                raise UnknownRequest(request_id)
            if request.status is not ApprovalStatus.PENDING:
                raise AlreadyResolved(request_id)
            request.status = (
                ApprovalStatus.APPROVED
                if decision is ApprovalDecision.APPROVE
                else ApprovalStatus.DENIED
            )
            request.resolved_by = actor
            request.resolved_at = self._clock.now()
            return request

    def wait_for_pending(self, timeout: float) -> list[ApprovalRequest]:
        """Block until at least one request is pending or the timeout elapses."""
        with self._condition:
            self._condition.wait_for(
                lambda: any(
                    r.status is ApprovalStatus.PENDING for r in self._requests.values()
                ),
                timeout=timeout,
            )
        return self.pending()
