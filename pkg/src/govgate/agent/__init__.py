"""Runtime matching, conflict resolution, and the resolver port."""

from govgate.agent.matching import (
    Checkpoint,
    MatchPhase,
    PolicyDecision,
    glob_match,
    match_intent_guards,
    match_output_formatters,
    match_playbooks,
    match_tool_approvals,
    match_tool_guides,
)
from govgate.agent.resolver import (
    FirstCandidateResolver,
    Resolver,
    ResolverCandidate,
    ResolverVerdict,
    ScriptedResolver,
)

__all__ = [
    "Checkpoint",
    "FirstCandidateResolver",
    "MatchPhase",
    "PolicyDecision",
    "Resolver",
    "ResolverCandidate",
    "ResolverVerdict",
    "ScriptedResolver",
    "glob_match",
    "match_intent_guards",
    "match_output_formatters",
    "match_playbooks",
    "match_tool_approvals",
    "match_tool_guides",
]
