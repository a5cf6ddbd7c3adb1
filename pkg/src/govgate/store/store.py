"""Policy registry with semantic retrieval.

Policies live in memory keyed by id; each natural-language trigger query is
embedded on upsert so semantic search is an exact brute-force cosine scan
(desk-scale stores make approximate indexes a deployment detail behind the
same interface). On disk a store is a directory of markdown policy files —
the human-auditable source of truth — plus a disposable embeddings cache
that is silently rebuilt whenever it is missing, corrupt, or was produced
by a different provider.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path

import numpy as np

from govgate.clock import Clock, SystemClock
from govgate.errors import ValidationFailed
from govgate.model.parsing import parse_policy_file, serialize_policy
from govgate.model.types import NaturalLanguageTrigger, Policy, PolicyId, PolicyKind, TargetField
from govgate.model.validation import validate_policy
from govgate.triggers.embeddings import EmbeddingProvider, cosine_similarity

logger = logging.getLogger(__name__)

CACHE_FILENAME = "_embeddings.json"
CACHE_VERSION = 1


@dataclass(frozen=True)
class StoredPolicy:
    policy: Policy
    embedded_queries: tuple[tuple[str, np.ndarray], ...]
    created_at: datetime
    updated_at: datetime
    source_text: str | None = None

    def markdown(self) -> str:
        return self.source_text if self.source_text is not None else serialize_policy(self.policy)


@dataclass(frozen=True)
class SearchHit:
    policy_id: PolicyId
    score: float
    matched_query: str


class PolicyStore:
    """Single-writer policy registry with exact cosine retrieval.

    Reads take a snapshot under the lock and compute outside it, so
    concurrent readers never observe a partially applied upsert.
    """

    def __init__(self, embedder: EmbeddingProvider, clock: Clock | None = None):
        self._embedder = embedder
        self._clock = clock or SystemClock()
        self._lock = threading.RLock()
        self._policies: dict[PolicyId, StoredPolicy] = {}

    @property
    def embedder(self) -> EmbeddingProvider:
        return self._embedder

    def __len__(self) -> int:
        with self._lock:
            return len(self._policies)

    # --- writes ---------------------------------------------------------

    def upsert(self, policy: Policy, source_text: str | None = None) -> StoredPolicy:
        violations = validate_policy(policy)
        if violations:
            raise ValidationFailed(violations)
        embedded = self._embed_queries(policy)
        with self._lock:
            now = self._clock.now()
            existing = self._policies.get(policy.id)
            stored = StoredPolicy(
                policy=policy,
                embedded_queries=embedded,
                created_at=existing.created_at if existing else now,
                updated_at=now,
                source_text=source_text,
            )
            self._policies[policy.id] = stored
            return stored

    def delete(self, policy_id: PolicyId) -> bool:
        with self._lock:
            return self._policies.pop(policy_id, None) is not None

    def set_enabled(self, policy_id: PolicyId, enabled: bool) -> bool:
        """Flip the enabled flag without re-embedding. Returns False when absent."""
        with self._lock:
            stored = self._policies.get(policy_id)
            if stored is None:
                return False
            if stored.policy.enabled != enabled:
                self._policies[policy_id] = replace(
                    stored,
                    policy=replace(stored.policy, enabled=enabled),
                    updated_at=self._clock.now(),
                    source_text=None,
                )
            return True

    # --- reads ----------------------------------------------------------

    def get(self, policy_id: PolicyId) -> Policy | None:
        stored = self.get_stored(policy_id)
        return stored.policy if stored else None

    def get_stored(self, policy_id: PolicyId) -> StoredPolicy | None:
        with self._lock:
            return self._policies.get(policy_id)

    def all_policies(self) -> list[Policy]:
        with self._lock:
            stored = list(self._policies.values())
        return sorted(
            (s.policy for s in stored), key=lambda p: (p.kind.value, -p.priority, p.id)
        )

    def list_by_kind(self, kind: PolicyKind) -> list[Policy]:
        """Every policy of the kind, enabled or not, by (priority desc, id asc)."""
        with self._lock:
            stored = list(self._policies.values())
        policies = [s.policy for s in stored if s.policy.kind is kind]
        policies.sort(key=lambda p: (-p.priority, p.id))
        return policies

    def semantic_search(
        self,
        text: str,
        kind: PolicyKind,
        top_k: int = 10,
        threshold: float = 0.0,
        target: TargetField | None = None,
    ) -> list[SearchHit]:
        """Enabled policies of ``kind`` with at least one natural-language
        query scoring >= max(threshold, that trigger's own threshold) against
        ``text``. Per policy the best gate-passing query wins (first declared
        on ties); hits sort by score descending, then id ascending.

        ``target`` optionally restricts which triggers' queries participate.
        """
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        with self._lock:
            snapshot = list(self._policies.values())

        text_vec = self._embedder.embed(text)
        if not text_vec.any():
            return []

        hits: list[SearchHit] = []
        for stored in snapshot:
            policy = stored.policy
            if policy.kind is not kind or not policy.enabled:
                continue
            vectors = dict(stored.embedded_queries)
            best: SearchHit | None = None
            for trigger in policy.triggers:
                if not isinstance(trigger, NaturalLanguageTrigger):
                    continue
                if target is not None and trigger.target is not target:
                    continue
                gate = max(threshold, trigger.threshold)
                for query in trigger.queries:
                    vector = vectors.get(query)
                    if vector is None or not vector.any():
                        continue
                    score = cosine_similarity(text_vec, vector)
                    if score < gate:
                        continue
                    if best is None or score > best.score:
                        best = SearchHit(policy.id, score, query)
            if best is not None:
                hits.append(best)

        hits.sort(key=lambda h: (-h.score, h.policy_id))
        return hits[:top_k]

    # --- persistence ------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        """Write one markdown file per policy plus the embeddings cache."""
        path = Path(directory)
        path.mkdir(parents=True, exist_ok=True)
        with self._lock:
            snapshot = list(self._policies.values())
        live = {f"{s.policy.id}.md" for s in snapshot}
        for stale in path.glob("*.md"):
            if stale.name not in live:
                stale.unlink()
        for stored in snapshot:
            (path / f"{stored.policy.id}.md").write_text(
                stored.markdown(), encoding="utf-8"
            )
        self._write_cache(path, snapshot)

    @classmethod
    def load(
        cls,
        directory: str | Path,
        embedder: EmbeddingProvider,
        clock: Clock | None = None,
    ) -> "PolicyStore":
        """Read every policy file in the directory; reuse cached embeddings
        when the cache matches this provider, re-embedding anything missing."""
        path = Path(directory)
        store = cls(embedder, clock=clock)
        cached = store._read_cache(path)
        for file in sorted(path.glob("*.md")):
            text = file.read_text(encoding="utf-8")
            policy = parse_policy_file(text)
            embedded = store._embed_queries(policy, cached.get(policy.id, {}))
            now = store._clock.now()
            with store._lock:
                store._policies[policy.id] = StoredPolicy(
                    policy=policy,
                    embedded_queries=embedded,
                    created_at=now,
                    updated_at=now,
                    source_text=text,
                )
        return store

    def clone(self, enabled_ids: set[PolicyId] | None = None) -> "PolicyStore":
        """Copy of this store, optionally forcing exactly ``enabled_ids`` to
        be the enabled set. Embeddings are reused, not recomputed."""
        twin = PolicyStore(self._embedder, clock=self._clock)
        with self._lock:
            snapshot = dict(self._policies)
        for pid, stored in snapshot.items():
            if enabled_ids is not None:
                desired = pid in enabled_ids
                if stored.policy.enabled != desired:
                    stored = replace(
                        stored,
                        policy=replace(stored.policy, enabled=desired),
                        source_text=None,
                    )
            twin._policies[pid] = stored
        return twin

    # --- internals --------------------------------------------------------

    def _embed_queries(
        self,
        policy: Policy,
        reuse: dict[str, np.ndarray] | None = None,
    ) -> tuple[tuple[str, np.ndarray], ...]:
        reuse = reuse or {}
        out: dict[str, np.ndarray] = {}
        for trigger in policy.natural_language_triggers():
            for query in trigger.queries:
                if query in out:
                    continue
                vector = reuse.get(query)
                if vector is None:
                    vector = self._embedder.embed(query)
                out[query] = vector
        return tuple(out.items())

    def _write_cache(self, path: Path, snapshot: list[StoredPolicy]) -> None:
        records = [
            [stored.policy.id, query, [float(x) for x in vector]]
            for stored in snapshot
            for query, vector in stored.embedded_queries
        ]
        payload = {
            "version": CACHE_VERSION,
            "provider_signature": self._embedder.signature,
            "dimension": self._embedder.dimension,
            "records": records,
        }
        (path / CACHE_FILENAME).write_text(json.dumps(payload), encoding="utf-8")

    def _read_cache(self, path: Path) -> dict[PolicyId, dict[str, np.ndarray]]:
        """Best-effort cache read; anything suspect means rebuild, never failure."""
        cache_path = path / CACHE_FILENAME
        if not cache_path.exists():
            return {}
        try:
            payload = json.loads(cache_path.read_text(encoding="utf-8"))
            if (
                payload.get("version") != CACHE_VERSION
                or payload.get("provider_signature") != self._embedder.signature
                or payload.get("dimension") != self._embedder.dimension
            ):
                logger.debug("embeddings cache signature mismatch; rebuilding")
                return {}
            out: dict[PolicyId, dict[str, np.ndarray]] = {}
            for policy_id, query, values in payload["records"]:
                vector = np.asarray(values, dtype=np.float64)
                if vector.shape != (self._embedder.dimension,):
                    return {}
                out.setdefault(policy_id, {})[query] = vector
            return out
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            logger.debug("embeddings cache unreadable; rebuilding", exc_info=True)
            return {}
