"""Trigger evaluation: keyword, natural-language, application, state, tool."""

from govgate.triggers.context import MatchContext, ToolSighting, TriggerOutcome
from govgate.triggers.embeddings import (
    EmbeddingProvider,
    HashedBagOfWordsEmbedder,
    cosine_similarity,
    fnv1a_64,
)
from govgate.triggers.evaluate import (
    bounded_edit_distance,
    eval_application,
    eval_keyword,
    eval_natural_language,
    eval_state,
    eval_tool,
    evaluate_trigger,
)

__all__ = [
    "EmbeddingProvider",
    "HashedBagOfWordsEmbedder",
    "MatchContext",
    "ToolSighting",
    "TriggerOutcome",
    "bounded_edit_distance",
    "cosine_similarity",
    "eval_application",
    "eval_keyword",
    "eval_natural_language",
    "eval_state",
    "eval_tool",
    "evaluate_trigger",
    "fnv1a_64",
]
