"""Policy store tests: CRUD laws, retrieval vs a brute-force oracle, and
disk persistence with the disposable embeddings cache."""

import json

import pytest

from govgate.clock import TickClock
from govgate.errors import ValidationFailed
from govgate.model import (
    IntentGuardPayload,
    NaturalLanguageTrigger,
    PlaybookPayload,
    Policy,
    PolicyKind,
)
from govgate.store import CACHE_FILENAME, PolicyStore
from govgate.triggers import HashedBagOfWordsEmbedder, cosine_similarity

from .genpolicies import random_policies


def nl_policy(pid: str, *queries: str, threshold: float = 0.3, priority: int = 50,
              kind: PolicyKind = PolicyKind.PLAYBOOK, enabled: bool = True) -> Policy:
    if kind is PolicyKind.PLAYBOOK:
        payload = PlaybookPayload(content=f"content for {pid}")
    else:
        payload = IntentGuardPayload(block_message=f"blocked by {pid}")
    return Policy(
        id=pid,
        kind=kind,
        priority=priority,
        payload=payload,
        triggers=(NaturalLanguageTrigger(queries=queries, threshold=threshold),),
        enabled=enabled,
    )


def brute_force_search(store, policies, text, kind, top_k, threshold, embedder):
    """Independent full scan: embed everything, cosine everything, sort."""
    text_vec = embedder.embed(text)
    if not text_vec.any():
        return []
    hits = []
    for policy in policies:
        if policy.kind is not kind or not policy.enabled:
            continue
        best = None
        for trigger in policy.triggers:
            if not isinstance(trigger, NaturalLanguageTrigger):
                continue
            for query in trigger.queries:
                query_vec = embedder.embed(query)
                if not query_vec.any():
                    continue
                score = cosine_similarity(text_vec, query_vec)
                if score < max(threshold, trigger.threshold):
                    continue
                if best is None or score > best[0]:
                    best = (score, query)
        if best is not None:
            hits.append((policy.id, best[0], best[1]))
    hits.sort(key=lambda h: (-h[1], h[0]))
    return hits[:top_k]


@pytest.fixture
def store():
    return PolicyStore(HashedBagOfWordsEmbedder(), clock=TickClock())


class TestCrud:
    def test_read_your_write(self, store):
        policy = nl_policy("alpha", "find a doctor")
        store.upsert(policy)
        assert store.get("alpha") == policy

    def test_upsert_same_id_is_idempotent_on_count(self, store):
        store.upsert(nl_policy("alpha", "one"))
        first = store.get_stored("alpha")
        store.upsert(nl_policy("alpha", "two"))
        second = store.get_stored("alpha")
        assert len(store) == 1
        assert second.updated_at > first.updated_at
        assert second.created_at == first.created_at

    def test_upsert_invalid_policy_fails(self, store):
        bad = nl_policy("alpha", "q", threshold=1.5)
        with pytest.raises(ValidationFailed):
            store.upsert(bad)

    def test_delete_reports_existence(self, store):
        store.upsert(nl_policy("alpha", "q"))
        assert store.delete("alpha") is True
        assert store.delete("alpha") is False

    def test_delete_removes_from_listing_and_search(self, store):
        store.upsert(nl_policy("alpha", "find a doctor"))
        store.delete("alpha")
        assert store.list_by_kind(PolicyKind.PLAYBOOK) == []
        assert store.semantic_search("find a doctor", PolicyKind.PLAYBOOK) == []

    def test_delete_upsert_identity_on_rest_of_store(self, store):
        keep = [nl_policy(f"keep-{i}", f"query {i} doctor") for i in range(5)]
        for policy in keep:
            store.upsert(policy)
        before_list = store.list_by_kind(PolicyKind.PLAYBOOK)
        before_hits = store.semantic_search("query doctor", PolicyKind.PLAYBOOK, top_k=10)
        store.upsert(nl_policy("transient", "query doctor visit"))
        store.delete("transient")
        assert store.list_by_kind(PolicyKind.PLAYBOOK) == before_list
        assert store.semantic_search("query doctor", PolicyKind.PLAYBOOK, top_k=10) == before_hits


class TestListByKind:
    def test_empty_store(self, store):
        assert store.list_by_kind(PolicyKind.PLAYBOOK) == []

    def test_priority_then_id_ordering(self, store):
        store.upsert(nl_policy("later", "a", priority=90))
        store.upsert(nl_policy("earlier", "b", priority=70))
        store.upsert(nl_policy("apple", "c", priority=90))
        ordered = [p.id for p in store.list_by_kind(PolicyKind.PLAYBOOK)]
        assert ordered == ["apple", "later", "earlier"]

    def test_kinds_partition_the_store(self, store):
        for policy in random_policies(seed=3, count=60):
            store.upsert(policy)
        union = []
        for kind in PolicyKind:
            union.extend(store.list_by_kind(kind))
        assert len(union) == len(store)
        assert {p.id for p in union} == {p.id for p in store.all_policies()}

    def test_disabled_policies_are_listed(self, store):
        store.upsert(nl_policy("off", "q", enabled=False))
        assert [p.id for p in store.list_by_kind(PolicyKind.PLAYBOOK)] == ["off"]


class TestSemanticSearch:
    def test_identical_query_scores_one(self, store):
        store.upsert(nl_policy("alpha", "find primary care doctors", threshold=0.65))
        hits = store.semantic_search("find primary care doctors", PolicyKind.PLAYBOOK)
        assert len(hits) == 1
        assert hits[0].policy_id == "alpha"
        assert hits[0].score == pytest.approx(1.0, abs=1e-12)

    def test_empty_store(self, store):
        assert store.semantic_search("anything", PolicyKind.PLAYBOOK) == []

    def test_disabled_policies_never_returned(self, store):
        store.upsert(nl_policy("off", "find a doctor", enabled=False))
        assert store.semantic_search("find a doctor", PolicyKind.PLAYBOOK) == []

    def test_trigger_threshold_gates_hits(self, store):
        store.upsert(nl_policy("strict", "alpha beta gamma", threshold=0.99))
        assert store.semantic_search("alpha beta delta", PolicyKind.PLAYBOOK) == []
        hits = store.semantic_search("alpha beta delta", PolicyKind.PLAYBOOK, threshold=0.0)
        assert hits == []  # per-trigger threshold still applies

    def test_matches_brute_force_oracle_on_random_store(self, store):
        policies = random_policies(seed=11, count=100)
        for policy in policies:
            store.upsert(policy)
        embedder = HashedBagOfWordsEmbedder()
        for text in ("find primary care doctors", "delete every contact", "average total count"):
            for kind in PolicyKind:
                got = store.semantic_search(text, kind, top_k=20, threshold=0.1)
                expected = brute_force_search(
                    store, policies, text, kind, top_k=20, threshold=0.1, embedder=embedder
                )
                assert [(h.policy_id, h.score, h.matched_query) for h in got] == expected


class TestPersistence:
    def test_save_load_round_trip_preserves_search(self, store, tmp_path):
        for policy in random_policies(seed=5, count=40):
            store.upsert(policy)
        before = {
            kind: store.semantic_search("find the summary report", kind, top_k=10)
            for kind in PolicyKind
        }
        store.save(tmp_path)
        reloaded = PolicyStore.load(tmp_path, HashedBagOfWordsEmbedder(), clock=TickClock())
        for kind in PolicyKind:
            got = reloaded.semantic_search("find the summary report", kind, top_k=10)
            assert got == before[kind]

    def test_cache_is_rebuilt_when_corrupt(self, store, tmp_path):
        store.upsert(nl_policy("alpha", "find a doctor"))
        store.save(tmp_path)
        (tmp_path / CACHE_FILENAME).write_text("{ not json", encoding="utf-8")
        reloaded = PolicyStore.load(tmp_path, HashedBagOfWordsEmbedder())
        hits = reloaded.semantic_search("find a doctor", PolicyKind.PLAYBOOK)
        assert hits and hits[0].policy_id == "alpha"

    def test_cache_with_other_provider_signature_is_ignored(self, store, tmp_path):
        store.upsert(nl_policy("alpha", "find a doctor"))
        store.save(tmp_path)
        cache = json.loads((tmp_path / CACHE_FILENAME).read_text())
        cache["provider_signature"] = "someone-else/v9"
        cache["records"] = [["alpha", "find a doctor", [1.0] * 256]]
        (tmp_path / CACHE_FILENAME).write_text(json.dumps(cache))
        reloaded = PolicyStore.load(tmp_path, HashedBagOfWordsEmbedder())
        hits = reloaded.semantic_search("find a doctor", PolicyKind.PLAYBOOK)
        assert hits[0].score == pytest.approx(1.0, abs=1e-12)

    def test_cache_hit_skips_re_embedding(self, store, tmp_path):
        store.upsert(nl_policy("alpha", "find a doctor"))
        store.save(tmp_path)

        class CountingEmbedder(HashedBagOfWordsEmbedder):
            calls = 0

            def embed(self, text):
                type(self).calls += 1
                return super().embed(text)

        counting = CountingEmbedder()
        PolicyStore.load(tmp_path, counting)
        assert counting.calls == 0

    def test_save_removes_stale_policy_files(self, store, tmp_path):
        store.upsert(nl_policy("alpha", "q"))
        store.upsert(nl_policy("beta", "q"))
        store.save(tmp_path)
        store.delete("beta")
        store.save(tmp_path)
        names = {p.name for p in tmp_path.glob("*.md")}
        assert names == {"alpha.md"}

    def test_load_keeps_source_bytes(self, store, tmp_path):
        store.upsert(nl_policy("alpha", "q"))
        store.save(tmp_path)
        raw = (tmp_path / "alpha.md").read_text(encoding="utf-8")
        reloaded = PolicyStore.load(tmp_path, HashedBagOfWordsEmbedder())
        assert reloaded.get_stored("alpha").markdown() == raw


class TestClone:
    def test_clone_flips_enabled_set(self, store):
        store.upsert(nl_policy("a", "q1"))
        store.upsert(nl_policy("b", "q2", enabled=False))
        twin = store.clone(enabled_ids={"b"})
        assert twin.get("a").enabled is False
        assert twin.get("b").enabled is True
        # original untouched
        assert store.get("a").enabled is True
        assert store.get("b").enabled is False


class TestTargetFilter:
    def test_search_restricted_to_trigger_target(self, store):
        from govgate.model import FormatterMode, OutputFormatterPayload, TargetField

        mixed = Policy(
            id="mixed-targets",
            kind=PolicyKind.OUTPUT_FORMATTER,
            priority=50,
            payload=OutputFormatterPayload(mode=FormatterMode.MARKDOWN),
            triggers=(
                NaturalLanguageTrigger(
                    queries=("format the provider table",),
                    threshold=0.2,
                    target=TargetField.FINAL_RESPONSE,
                ),
                NaturalLanguageTrigger(
                    queries=("summarize my results",),
                    threshold=0.2,
                    target=TargetField.USER_INPUT,
                ),
            ),
        )
        store.upsert(mixed)
        response_hits = store.semantic_search(
            "format the provider table", PolicyKind.OUTPUT_FORMATTER,
            target=TargetField.FINAL_RESPONSE,
        )
        assert [h.matched_query for h in response_hits] == ["format the provider table"]
        input_hits = store.semantic_search(
            "format the provider table", PolicyKind.OUTPUT_FORMATTER,
            target=TargetField.USER_INPUT,
        )
        assert all(h.matched_query != "format the provider table" for h in input_hits)
        unfiltered = store.semantic_search(
            "format the provider table", PolicyKind.OUTPUT_FORMATTER
        )
        assert [h.matched_query for h in unfiltered] == ["format the provider table"]
