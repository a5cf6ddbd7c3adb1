"""Single-trigger evaluation against a match context.

All evaluators are pure: same (trigger, context, provider) in, same outcome
out. Natural-language evaluation needs an embedding provider; everything
else is deterministic string/state work.
"""

from __future__ import annotations

import re

from govgate.errors import MissingTargetField
from govgate.model.types import (
    ApplicationTrigger,
    KeywordMode,
    KeywordTrigger,
    NaturalLanguageTrigger,
    StateOperator,
    StateTrigger,
    ToolTrigger,
    Trigger,
)
from govgate.triggers.context import MatchContext, TriggerOutcome
from govgate.triggers.embeddings import EmbeddingProvider, cosine_similarity

_NO_MATCH = TriggerOutcome(matched=False)


def eval_keyword(trigger: KeywordTrigger, ctx: MatchContext) -> TriggerOutcome:
    """AND: every keyword found; OR: any. A keyword is found when it is a
    substring (case-folded unless case_sensitive), or, with
    fuzzy_max_edits > 0, when some whitespace-delimited word span of the
    text is within that edit distance of it."""
    text = ctx.target_text(trigger.target)
    if text is None:
        return _NO_MATCH
    found = (_keyword_found(k, text, trigger) for k in trigger.keywords)
    if trigger.mode is KeywordMode.AND:
        matched = all(found)
    else:
        matched = any(found)
    return TriggerOutcome(matched=matched)


def _keyword_found(keyword: str, text: str, trigger: KeywordTrigger) -> bool:
    if not trigger.case_sensitive:
        keyword = keyword.casefold()
        text = text.casefold()
    if keyword in text:
        return True
    if trigger.fuzzy_max_edits > 0:
        return _fuzzy_span_match(keyword, text, trigger.fuzzy_max_edits)
    return False


def _fuzzy_span_match(keyword: str, text: str, max_edits: int) -> bool:
    words = text.split()
    if not words:
        return False
    span_words = len(keyword.split()) or 1
    lo = max(1, span_words - max_edits)
    hi = min(len(words), span_words + max_edits)
    for width in range(lo, hi + 1):
        for start in range(len(words) - width + 1):
            span = " ".join(words[start : start + width])
            if abs(len(span) - len(keyword)) > max_edits:
                continue
            if bounded_edit_distance(span, keyword, max_edits) <= max_edits:
                return True
    return False


def bounded_edit_distance(a: str, b: str, bound: int) -> int:
    """Levenshtein distance, abandoning early once it must exceed ``bound``
    (then returns bound + 1)."""
    if abs(len(a) - len(b)) > bound:
        return bound + 1
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        row_min = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            value = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + cost,
            )
            current.append(value)
            row_min = min(row_min, value)
        if row_min > bound:
            return bound + 1
        previous = current
    return previous[-1]


def eval_natural_language(
    trigger: NaturalLanguageTrigger,
    ctx: MatchContext,
    embedder: EmbeddingProvider,
) -> TriggerOutcome:
    """Max cosine similarity between any query embedding and the target
    field's embedding; matches at or above the trigger threshold. The
    first-declared query wins score ties."""
    text = ctx.target_text(trigger.target)
    if text is None:
        raise MissingTargetField(trigger.target.value)
    target_vec = embedder.embed(text)
    no_signal = not target_vec.any()

    best_score = 0.0
    best_query: str | None = None
    for query in trigger.queries:
        if no_signal:
            score = 0.0
        else:
            query_vec = embedder.embed(query)
            score = 0.0 if not query_vec.any() else cosine_similarity(query_vec, target_vec)
        if best_query is None or score > best_score:
            best_score = score
            best_query = query
    matched = not no_signal and best_score >= trigger.threshold
    return TriggerOutcome(
        matched=matched,
        score=best_score,
        matched_query=best_query if matched else None,
    )


def eval_state(trigger: StateTrigger, ctx: MatchContext) -> TriggerOutcome:
    leaf = ctx.resolve_state_path(trigger.path)
    if leaf is None:
        return _NO_MATCH
    if trigger.operator is StateOperator.EQ:
        matched = leaf == trigger.value
    elif trigger.operator is StateOperator.CONTAINS:
        matched = trigger.value in leaf
    else:
        # Validation guarantees the pattern compiles; search is unanchored.
        matched = re.search(trigger.value, leaf) is not None
    return TriggerOutcome(matched=matched)


def eval_application(trigger: ApplicationTrigger, ctx: MatchContext) -> TriggerOutcome:
    return TriggerOutcome(matched=ctx.app_id is not None and ctx.app_id == trigger.app_id)


def eval_tool(trigger: ToolTrigger, ctx: MatchContext) -> TriggerOutcome:
    matched = any(
        seen.tool_name == trigger.tool_name and seen.stage == trigger.stage
        for seen in ctx.tools_seen
    )
    return TriggerOutcome(matched=matched)


def evaluate_trigger(
    trigger: Trigger,
    ctx: MatchContext,
    embedder: EmbeddingProvider | None = None,
) -> TriggerOutcome:
    """Dispatch over the trigger union. Natural-language triggers require an
    embedding provider."""
    if isinstance(trigger, KeywordTrigger):
        return eval_keyword(trigger, ctx)
    if isinstance(trigger, NaturalLanguageTrigger):
        if embedder is None:
            raise ValueError("natural-language trigger needs an embedding provider")
        return eval_natural_language(trigger, ctx, embedder)
    if isinstance(trigger, StateTrigger):
        return eval_state(trigger, ctx)
    if isinstance(trigger, ApplicationTrigger):
        return eval_application(trigger, ctx)
    if isinstance(trigger, ToolTrigger):
        return eval_tool(trigger, ctx)
    raise TypeError(f"not a trigger: {trigger!r}")
