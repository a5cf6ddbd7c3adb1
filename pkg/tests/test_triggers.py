"""Trigger evaluation tests, each against an independent oracle where the
outcome is not trivially forced."""

import math
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from govgate.errors import DimensionMismatch, MissingTargetField, ZeroVector
from govgate.model import (
    ApplicationTrigger,
    KeywordMode,
    KeywordTrigger,
    NaturalLanguageTrigger,
    StateOperator,
    StateTrigger,
    TargetField,
    ToolStage,
    ToolTrigger,
)
from govgate.triggers import (
    HashedBagOfWordsEmbedder,
    MatchContext,
    ToolSighting,
    cosine_similarity,
    eval_application,
    eval_keyword,
    eval_natural_language,
    eval_state,
    eval_tool,
)


# --- independent oracles -----------------------------------------------------


def oracle_levenshtein(a: str, b: str) -> int:
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1, table[i][j - 1] + 1, table[i - 1][j - 1] + cost
            )
    return table[len(a)][len(b)]


def oracle_embed(text: str, dimension: int = 256) -> list[float]:
    """Reimplementation of the shipped embedder from its written definition:
    lowercase alphanumeric tokens, 64-bit FNV-1a bucket counts, L2-normalized."""
    counts = [0.0] * dimension
    for token in re.findall(r"[a-z0-9]+", text.lower()):
        value = 14695981039346656037
        for byte in token.encode("utf-8"):
            value = ((value ^ byte) * 1099511628211) % (1 << 64)
        counts[value % dimension] += 1.0
    norm = math.sqrt(sum(c * c for c in counts))
    return counts if norm == 0 else [c / norm for c in counts]


def oracle_cosine(a: list[float], b: list[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    return dot / (na * nb)


# --- cosine_similarity --------------------------------------------------------


class TestCosineSimilarity:
    def test_identical_vectors(self):
        assert cosine_similarity(np.array([0.6, 0.8]), np.array([0.6, 0.8])) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_derived_arithmetic_value(self):
        # 32 / (sqrt(14) * sqrt(77)), computed independently
        expected = (1 * 4 + 2 * 5 + 3 * 6) / (
            math.sqrt(1 + 4 + 9) * math.sqrt(16 + 25 + 36)
        )
        got = cosine_similarity(np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0, 6.0]))
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(0.974631846, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine_similarity(np.array([1.0, 2.0]), np.array([1.0, 2.0, 3.0]))

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            cosine_similarity(np.zeros(3), np.array([1.0, 2.0, 3.0]))

    @given(
        st.lists(
            st.floats(min_value=-100, max_value=100, allow_nan=False),
            min_size=2,
            max_size=16,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_self_similarity_and_symmetry(self, values):
        vec = np.array(values)
        if np.linalg.norm(vec) == 0.0:  # incl. subnormal underflow
            return
        other = vec[::-1].copy()
        assert cosine_similarity(vec, vec) == pytest.approx(1.0, abs=1e-12)
        assert cosine_similarity(vec, other) == cosine_similarity(other, vec)


# --- keyword -------------------------------------------------------------------


def ctx_with(text: str, **kwargs) -> MatchContext:
    return MatchContext(user_input=text, **kwargs)


class TestKeyword:
    def test_crm_delete_and_match(self):
        trigger = KeywordTrigger(
            keywords=("delete", "CRM"), mode=KeywordMode.AND, case_sensitive=False
        )
        assert eval_keyword(trigger, ctx_with("Delete every contact in CRM")).matched

    def test_empty_text_never_matches(self):
        for mode in KeywordMode:
            trigger = KeywordTrigger(keywords=("drop",), mode=mode)
            assert not eval_keyword(trigger, ctx_with("")).matched

    def test_fuzzy_typo_matches_within_one_edit(self):
        trigger = KeywordTrigger(keywords=("database",), fuzzy_max_edits=1)
        text = "drop the databse now"
        assert oracle_levenshtein("databse", "database") == 1
        assert eval_keyword(trigger, ctx_with(text)).matched

    def test_fuzzy_respects_bound(self):
        trigger = KeywordTrigger(keywords=("database",), fuzzy_max_edits=1)
        assert not eval_keyword(trigger, ctx_with("drop the datbse now")).matched
        assert oracle_levenshtein("datbse", "database") == 2

    def test_case_sensitive_mode(self):
        trigger = KeywordTrigger(keywords=("CRM",), case_sensitive=True)
        assert not eval_keyword(trigger, ctx_with("crm cleanup")).matched
        assert eval_keyword(trigger, ctx_with("CRM cleanup")).matched

    def test_absent_target_never_matches(self):
        trigger = KeywordTrigger(keywords=("x",), target=TargetField.INTENT)
        assert not eval_keyword(trigger, ctx_with("x")).matched

    @given(
        st.lists(st.sampled_from(["alpha", "beta", "gamma", "delta"]), min_size=1, max_size=4),
        st.text(alphabet="abgdelmt ", max_size=40),
    )
    @settings(max_examples=300, deadline=None)
    def test_and_implies_or(self, keywords, text):
        ctx = ctx_with(text)
        base = dict(keywords=tuple(keywords), case_sensitive=False, fuzzy_max_edits=0)
        if eval_keyword(KeywordTrigger(mode=KeywordMode.AND, **base), ctx).matched:
            assert eval_keyword(KeywordTrigger(mode=KeywordMode.OR, **base), ctx).matched

    @given(
        st.text(alphabet="abc d", min_size=1, max_size=12),
        st.text(alphabet="abc d", max_size=60),
    )
    @settings(max_examples=300, deadline=None)
    def test_fuzzy_zero_equals_substring(self, keyword, text):
        keyword = keyword.strip()
        if not keyword:
            return
        trigger = KeywordTrigger(keywords=(keyword,), fuzzy_max_edits=0)
        expected = keyword.casefold() in text.casefold()
        assert eval_keyword(trigger, ctx_with(text)).matched == expected


# --- natural language -----------------------------------------------------------


class TestNaturalLanguage:
    def test_identical_text_scores_one(self):
        embedder = HashedBagOfWordsEmbedder()
        trigger = NaturalLanguageTrigger(
            queries=("find primary care doctors near me",), threshold=0.65
        )
        outcome = eval_natural_language(
            trigger, ctx_with("find primary care doctors near me"), embedder
        )
        assert outcome.matched
        assert outcome.score == pytest.approx(1.0, abs=1e-12)
        assert outcome.matched_query == "find primary care doctors near me"

    def test_threshold_one_excludes_lower_scores(self):
        embedder = HashedBagOfWordsEmbedder()
        trigger = NaturalLanguageTrigger(queries=("alpha beta",), threshold=1.0)
        outcome = eval_natural_language(trigger, ctx_with("alpha gamma"), embedder)
        assert outcome.score < 1.0
        assert not outcome.matched

    def test_shipped_embedder_matches_oracle_reimplementation(self):
        embedder = HashedBagOfWordsEmbedder()
        query = "find primary care doctors"
        target = "locate a primary care physician nearby"
        expected = oracle_cosine(oracle_embed(query), oracle_embed(target))

        trigger = NaturalLanguageTrigger(queries=(query,), threshold=0.3)
        outcome = eval_natural_language(trigger, ctx_with(target), embedder)
        assert outcome.score == expected
        assert outcome.matched
        assert expected >= 0.3

    def test_embedder_vectors_match_oracle_exactly(self):
        embedder = HashedBagOfWordsEmbedder()
        for text in ("", "!!!", "Delete every contact in CRM", "requisition UZLXBR 25"):
            assert embedder.embed(text).tolist() == oracle_embed(text)

    def test_missing_target_raises(self):
        embedder = HashedBagOfWordsEmbedder()
        trigger = NaturalLanguageTrigger(
            queries=("q",), threshold=0.5, target=TargetField.FINAL_RESPONSE
        )
        with pytest.raises(MissingTargetField):
            eval_natural_language(trigger, ctx_with("hello"), embedder)

    def test_tokenless_text_is_no_signal(self):
        embedder = HashedBagOfWordsEmbedder()
        trigger = NaturalLanguageTrigger(queries=("anything",), threshold=0.0)
        outcome = eval_natural_language(trigger, ctx_with("?!"), embedder)
        assert not outcome.matched
        assert outcome.score == 0.0

    def test_first_declared_query_wins_ties(self):
        embedder = HashedBagOfWordsEmbedder()
        trigger = NaturalLanguageTrigger(
            queries=("one two", "two one"), threshold=0.1
        )
        outcome = eval_natural_language(trigger, ctx_with("one two"), embedder)
        assert outcome.matched_query == "one two"

    @given(
        st.sampled_from(
            ["find a doctor", "drop the database", "export all records", "page through results"]
        ),
        st.sampled_from(["locate a doctor", "drop database now", "weather today"]),
        st.floats(min_value=0, max_value=1),
        st.floats(min_value=0, max_value=1),
    )
    @settings(max_examples=200, deadline=None)
    def test_threshold_monotonicity(self, query, text, t1, t2):
        lo, hi = sorted((t1, t2))
        embedder = HashedBagOfWordsEmbedder()
        ctx = ctx_with(text)
        hi_outcome = eval_natural_language(
            NaturalLanguageTrigger(queries=(query,), threshold=hi), ctx, embedder
        )
        lo_outcome = eval_natural_language(
            NaturalLanguageTrigger(queries=(query,), threshold=lo), ctx, embedder
        )
        if hi_outcome.matched:
            assert lo_outcome.matched

    def test_evaluation_is_pure(self):
        embedder = HashedBagOfWordsEmbedder()
        trigger = NaturalLanguageTrigger(queries=("find a doctor",), threshold=0.2)
        ctx = ctx_with("locate a doctor")
        assert eval_natural_language(trigger, ctx, embedder) == eval_natural_language(
            trigger, ctx, embedder
        )


# --- state / application / tool ----------------------------------------------------


class TestState:
    def test_eq_on_brand_code(self):
        trigger = StateTrigger(path="insurance.brand", operator=StateOperator.EQ, value="OAK")
        ctx = ctx_with("x", state={"insurance": {"brand": "OAK"}})
        assert eval_state(trigger, ctx).matched

    def test_missing_path_never_matches(self):
        trigger = StateTrigger(path="insurance.brand", operator=StateOperator.EQ, value="OAK")
        assert not eval_state(trigger, ctx_with("x", state={})).matched

    def test_regex_requisition_id(self):
        trigger = StateTrigger(
            path="requisition.id", operator=StateOperator.REGEX, value="^UZ[A-Z]{4}$"
        )
        ctx = ctx_with("x", state={"requisition": {"id": "UZLXBR"}})
        assert eval_state(trigger, ctx).matched

    def test_regex_is_unanchored_search(self):
        trigger = StateTrigger(path="a", operator=StateOperator.REGEX, value="bc")
        assert eval_state(trigger, ctx_with("x", state={"a": "abcd"})).matched

    def test_contains(self):
        trigger = StateTrigger(path="a", operator=StateOperator.CONTAINS, value="net")
        assert eval_state(trigger, ctx_with("x", state={"a": "in-network"})).matched

    def test_subtree_leaf_never_matches(self):
        trigger = StateTrigger(path="a", operator=StateOperator.CONTAINS, value="b")
        assert not eval_state(trigger, ctx_with("x", state={"a": {"b": "c"}})).matched


class TestApplication:
    def test_equal_matches(self):
        assert eval_application(ApplicationTrigger("crm"), ctx_with("x", app_id="crm")).matched

    def test_absent_never_matches(self):
        assert not eval_application(ApplicationTrigger("crm"), ctx_with("x")).matched

    def test_case_sensitive(self):
        assert not eval_application(ApplicationTrigger("crm"), ctx_with("x", app_id="CRM")).matched


class TestTool:
    def test_name_and_stage_match(self):
        trigger = ToolTrigger(tool_name="drop_database", stage=ToolStage.PRE)
        ctx = ctx_with("x", tools_seen=(ToolSighting("drop_database", ToolStage.PRE),))
        assert eval_tool(trigger, ctx).matched

    def test_stage_mismatch(self):
        trigger = ToolTrigger(tool_name="drop_database", stage=ToolStage.PRE)
        ctx = ctx_with("x", tools_seen=(ToolSighting("drop_database", ToolStage.POST),))
        assert not eval_tool(trigger, ctx).matched

    def test_empty_sightings(self):
        trigger = ToolTrigger(tool_name="drop_database", stage=ToolStage.PRE)
        assert not eval_tool(trigger, ctx_with("x")).matched
