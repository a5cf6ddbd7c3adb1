"""govgate: runtime governance for tool-using agents.

Typed policy-as-code interventions enforced at five execution checkpoints:
blocking bad intents, injecting playbooks, enriching tool descriptions,
gating risky tool calls behind human approval, and formatting final output.
All model-dependent behavior sits behind pluggable provider ports so the
engine is deterministic and testable offline.
"""

__version__ = "0.1.0"
