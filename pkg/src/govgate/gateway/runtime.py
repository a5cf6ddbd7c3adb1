"""Gateway runtime: a live engine bound to a policy store directory.

Sessions are driven by a scriptable agent bank (scenario files keyed by
user input) so the service is fully exercisable without any model; unknown
inputs get a benign no-tool acknowledgement. With persistence enabled,
paused sessions are snapshotted to disk and restored on boot, so a restart
does not lose a pending approval.
"""

from __future__ import annotations

import json
import logging
import threading
from pathlib import Path
from typing import Any, Mapping

from govgate.agent.resolver import FirstCandidateResolver
from govgate.clock import Clock, SystemClock, random_ids
from govgate.enact.approvals import ApprovalDecision
from govgate.enact.engine import AgentEmission, GovernanceEngine
from govgate.enact.formatting import ScriptedFormatterModel
from govgate.enact.session import ExecutionSession, SessionPhase
from govgate.enact.tools import ToolRegistry
from govgate.harness.agent import AgentStep, ScriptedAgent
from govgate.harness.scenario import Scenario
from govgate.harness.suite import load_suite
from govgate.model.types import Policy
from govgate.store.store import PolicyStore
from govgate.triggers.embeddings import HashedBagOfWordsEmbedder

logger = logging.getLogger(__name__)

PAUSED_SESSIONS_FILENAME = "_paused_sessions.json"


def _benign_agent() -> ScriptedAgent:
    return ScriptedAgent(
        [AgentStep(emission=AgentEmission(code="", response="Acknowledged."))]
    )


class GatewayRuntime:
    def __init__(
        self,
        store_dir: str | Path,
        persist_paused: bool = False,
        scenario_bank: str | Path | None = None,
        clock: Clock | None = None,
    ):
        self.store_dir = Path(store_dir)
        self.persist_paused = persist_paused
        self.clock = clock or SystemClock()
        embedder = HashedBagOfWordsEmbedder()
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self.store = PolicyStore.load(self.store_dir, embedder, clock=self.clock)

        self._bank: dict[str, Scenario] = {}
        registry = ToolRegistry()
        implementations: dict[str, Any] = {}
        if scenario_bank is not None:
            suite = load_suite(scenario_bank)
            registry = suite.build_registry()
            implementations = suite.tool_implementations()
            self._bank = {s.user_input: s for s in suite.scenarios}

        self.engine = GovernanceEngine(
            store=self.store,
            resolver=FirstCandidateResolver(),
            registry=registry,
            tool_implementations=implementations,
            clock=self.clock,
            id_factory=random_ids(),
        )
        self._persist_lock = threading.Lock()
        if self.persist_paused:
            self._restore_paused_sessions()

    # --- sessions ----------------------------------------------------------

    def start_session(
        self,
        user_input: str,
        app_id: str | None = None,
        state: Mapping[str, Any] | None = None,
    ) -> ExecutionSession:
        scenario = self._bank.get(user_input)
        if scenario is not None:
            agent = ScriptedAgent(scenario.agent_steps)
            formatter = None
            if scenario.formatter is not None:
                formatter = ScriptedFormatterModel(
                    restructured=scenario.formatter.get("restructure"),
                    extracted=scenario.formatter.get("extract"),
                )
            session = self.engine.create_session(
                user_input,
                agent,
                app_id=app_id if app_id is not None else scenario.app_id,
                intent=scenario.intent,
                state=state if state is not None else scenario.state,
                formatter_model=formatter,
            )
        else:
            session = self.engine.create_session(
                user_input, _benign_agent(), app_id=app_id, state=state
            )
        self.engine.run(session)
        self._sync_paused_sessions()
        return session

    def decide(self, request_id: str, decision: ApprovalDecision, actor: str) -> dict[str, Any]:
        phase = self.engine.resolve_approval(request_id, decision, actor)
        self._sync_paused_sessions()
        request = self.engine.approvals.get(request_id)
        return {
            "request_id": request_id,
            "status": request.status.value,
            "session_id": request.session,
            "session_phase": phase.value,
        }

    # --- policies (write-through to the store directory) ---------------------

    def put_policy(self, policy: Policy, source_text: str) -> None:
        self.store.upsert(policy, source_text=source_text)
        self.store.save(self.store_dir)

    def delete_policy(self, policy_id: str) -> bool:
        deleted = self.store.delete(policy_id)
        if deleted:
            self.store.save(self.store_dir)
        return deleted

    # --- paused-session persistence ------------------------------------------

    @property
    def _paused_path(self) -> Path:
        return self.store_dir / PAUSED_SESSIONS_FILENAME

    def _sync_paused_sessions(self) -> None:
        if not self.persist_paused:
            return
        with self._persist_lock:
            snapshots = {}
            for session in self.engine.sessions():
                if session.phase is SessionPhase.AWAITING_APPROVAL:
                    snapshot = self.engine.snapshot_paused(session.id)
                    if snapshot is not None:
                        snapshots[session.id] = snapshot
            self._paused_path.write_text(json.dumps(snapshots), encoding="utf-8")

    def _restore_paused_sessions(self) -> None:
        if not self._paused_path.exists():
            return
        try:
            snapshots = json.loads(self._paused_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            logger.warning("paused-session snapshot file unreadable; ignoring")
            return
        for snapshot in snapshots.values():
            agent_state = snapshot.get("agent_state")
            agent = (
                ScriptedAgent.from_state(agent_state) if agent_state else _benign_agent()
            )
            self.engine.restore_paused(snapshot, agent)
