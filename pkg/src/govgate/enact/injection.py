"""Playbook injection into the agent's system prompt.

The playbook lands as one delimited block: content first, then the numbered
steps with their optional expected-outcome and allowed-tools lines. At most
one block per session; injecting into a prompt that already carries one is
the identity.
"""

from __future__ import annotations

from govgate.model.types import PlaybookPayload

BLOCK_OPEN_PREFIX = "<policy:playbook"
BLOCK_CLOSE = "</policy:playbook>"


def render_playbook_block(policy_id: str, payload: PlaybookPayload) -> str:
    lines = [payload.content]
    if payload.steps:
        for number, step in enumerate(payload.steps, start=1):
            lines.append(f"{number}. {step.instruction}")
            if step.expected_outcome is not None:
                lines.append(f"   expected outcome: {step.expected_outcome}")
            if step.allowed_tools is not None:
                lines.append(f"   allowed tools: {', '.join(step.allowed_tools)}")
    body = "\n".join(lines)
    return f"{BLOCK_OPEN_PREFIX} id={policy_id}>\n{body}\n{BLOCK_CLOSE}"


def inject_playbook(system_prompt: str, policy_id: str, payload: PlaybookPayload) -> str:
    if BLOCK_OPEN_PREFIX in system_prompt:
        return system_prompt
    return f"{system_prompt}\n\n{render_playbook_block(policy_id, payload)}"
