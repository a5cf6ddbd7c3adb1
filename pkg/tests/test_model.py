"""Policy schema, file format, and validation tests."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from govgate.errors import (
    InvalidFieldValue,
    InvalidTrigger,
    MalformedFrontMatter,
    MissingRequiredField,
    PolicyFileError,
    UnknownField,
    UnknownKind,
)
from govgate.model import (
    IntentGuardPayload,
    KeywordTrigger,
    NaturalLanguageTrigger,
    OutputFormatterPayload,
    FormatterMode,
    PlaybookPayload,
    PlaybookStep,
    Policy,
    PolicyKind,
    StateOperator,
    StateTrigger,
    TargetField,
    ToolApprovalPayload,
    parse_policy_file,
    serialize_policy,
    validate_policy,
)

from .genpolicies import random_policies, random_policy

BOUNDARY_PLAYBOOK = """---
id: capability-boundaries
kind: playbook
priority: 90
triggers:
- type: natural_language
  queries:
  - which capabilities are supported
  threshold: 0.65
---
Enumerate supported capabilities and decline out-of-scope requests directly.
"""


class TestParsePolicyFile:
    def test_boundary_playbook_fixture(self):
        policy = parse_policy_file(BOUNDARY_PLAYBOOK)
        assert policy.id == "capability-boundaries"
        assert policy.kind is PolicyKind.PLAYBOOK
        assert policy.priority == 90
        assert policy.enabled is True
        (trigger,) = policy.triggers
        assert isinstance(trigger, NaturalLanguageTrigger)
        assert trigger.threshold == 0.65
        assert policy.payload.content.startswith("Enumerate supported")

    def test_empty_body_playbook_is_missing_content(self):
        text = (
            "---\nid: p1\nkind: playbook\npriority: 10\n"
            "triggers:\n- type: keyword\n  keywords: [x]\n---\n"
        )
        with pytest.raises(MissingRequiredField) as err:
            parse_policy_file(text)
        assert err.value.name == "content"

    def test_threshold_out_of_range_is_invalid_trigger(self):
        text = BOUNDARY_PLAYBOOK.replace("threshold: 0.65", "threshold: 1.5")
        with pytest.raises(InvalidTrigger) as err:
            parse_policy_file(text)
        assert "threshold out of [0,1]" in str(err.value)

    def test_unknown_kind(self):
        text = BOUNDARY_PLAYBOOK.replace("kind: playbook", "kind: vibes")
        with pytest.raises(UnknownKind):
            parse_policy_file(text)

    def test_unknown_front_matter_key_rejected(self):
        text = BOUNDARY_PLAYBOOK.replace("priority: 90", "priority: 90\nseverity: high")
        with pytest.raises(UnknownField):
            parse_policy_file(text)

    def test_kind_specific_key_on_wrong_kind_rejected(self):
        text = BOUNDARY_PLAYBOOK.replace("priority: 90", "priority: 90\nblock_message: no")
        with pytest.raises(UnknownField):
            parse_policy_file(text)

    def test_missing_front_matter(self):
        with pytest.raises(MalformedFrontMatter):
            parse_policy_file("just a markdown body")

    def test_unclosed_front_matter(self):
        with pytest.raises(MalformedFrontMatter):
            parse_policy_file("---\nid: x\nkind: playbook\n")

    def test_priority_out_of_range(self):
        text = BOUNDARY_PLAYBOOK.replace("priority: 90", "priority: 150")
        with pytest.raises(InvalidFieldValue) as err:
            parse_policy_file(text)
        assert err.value.name == "priority"

    def test_priority_must_be_integer(self):
        text = BOUNDARY_PLAYBOOK.replace("priority: 90", "priority: high")
        with pytest.raises(InvalidFieldValue):
            parse_policy_file(text)

    def test_body_whitespace_trimmed(self):
        text = BOUNDARY_PLAYBOOK + "\n\n   \n"
        policy = parse_policy_file(text)
        assert policy.payload.content == policy.payload.content.strip()

    @given(st.text(max_size=400))
    @settings(max_examples=300, deadline=None)
    def test_parsing_is_total_over_the_error_type(self, text):
        try:
            parse_policy_file(text)
        except PolicyFileError:
            pass


class TestValidatePolicy:
    def test_valid_policy_has_no_violations(self):
        policy = Policy(
            id="average-vs-total",
            kind=PolicyKind.PLAYBOOK,
            priority=70,
            payload=PlaybookPayload(content="Divide the aggregate total by the count."),
            triggers=(
                NaturalLanguageTrigger(
                    queries=("how many do we usually get",), threshold=0.65
                ),
            ),
        )
        assert validate_policy(policy) == []

    def test_guard_without_triggers_violates(self):
        policy = Policy(
            id="guard",
            kind=PolicyKind.INTENT_GUARD,
            priority=50,
            payload=IntentGuardPayload(block_message="blocked"),
            triggers=(),
        )
        violations = validate_policy(policy)
        assert [v.field for v in violations] == ["triggers"]
        assert "tool_approval" in violations[0].rule

    def test_tool_approval_may_have_empty_triggers(self):
        policy = Policy(
            id="approve-drops",
            kind=PolicyKind.TOOL_APPROVAL,
            priority=80,
            payload=ToolApprovalPayload(tool_patterns=("drop_*",)),
            triggers=(),
        )
        assert validate_policy(policy) == []

    def test_bad_regex_violates(self):
        policy = Policy(
            id="state-guard",
            kind=PolicyKind.INTENT_GUARD,
            priority=50,
            payload=IntentGuardPayload(block_message="blocked"),
            triggers=(
                StateTrigger(path="a.b", operator=StateOperator.REGEX, value="(["),
            ),
        )
        violations = validate_policy(policy)
        assert any(v.rule == "regex does not compile" for v in violations)

    def test_formatter_trigger_target_restricted(self):
        policy = Policy(
            id="fmt",
            kind=PolicyKind.OUTPUT_FORMATTER,
            priority=10,
            payload=OutputFormatterPayload(
                mode=FormatterMode.TEMPLATE, template="Request received."
            ),
            triggers=(
                KeywordTrigger(keywords=("x",), target=TargetField.INTENT),
            ),
        )
        violations = validate_policy(policy)
        assert any("user_input or final_response" in v.rule for v in violations)

    def test_formatter_template_required_iff_template_mode(self):
        missing = Policy(
            id="fmt",
            kind=PolicyKind.OUTPUT_FORMATTER,
            priority=10,
            payload=OutputFormatterPayload(mode=FormatterMode.TEMPLATE, template=None),
            triggers=(KeywordTrigger(keywords=("x",)),),
        )
        assert any(v.field == "template" for v in validate_policy(missing))
        extra = Policy(
            id="fmt2",
            kind=PolicyKind.OUTPUT_FORMATTER,
            priority=10,
            payload=OutputFormatterPayload(
                mode=FormatterMode.MARKDOWN, template="nope"
            ),
            triggers=(KeywordTrigger(keywords=("x",)),),
        )
        assert any(v.field == "template" for v in validate_policy(extra))

    def test_validate_flags_untrimmed_body_text(self):
        policy = Policy(
            id="pb",
            kind=PolicyKind.PLAYBOOK,
            priority=10,
            payload=PlaybookPayload(content="  padded  "),
            triggers=(KeywordTrigger(keywords=("x",)),),
        )
        assert any(v.field == "content" for v in validate_policy(policy))

    def test_every_generated_policy_is_valid(self):
        for policy in random_policies(seed=7, count=200):
            assert validate_policy(policy) == [], policy


class TestSerializePolicy:
    def test_steps_preserved_in_order(self):
        steps = tuple(PlaybookStep(instruction=f"step {i}") for i in range(3))
        policy = Policy(
            id="pb",
            kind=PolicyKind.PLAYBOOK,
            priority=10,
            payload=PlaybookPayload(content="body", steps=steps),
            triggers=(KeywordTrigger(keywords=("x",)),),
        )
        text = serialize_policy(policy)
        assert text.index("step 0") < text.index("step 1") < text.index("step 2")
        assert parse_policy_file(text).payload.steps == steps

    def test_patterns_preserved_verbatim(self):
        policy = Policy(
            id="approve",
            kind=PolicyKind.TOOL_APPROVAL,
            priority=10,
            payload=ToolApprovalPayload(tool_patterns=("drop_*",)),
        )
        text = serialize_policy(policy)
        assert "drop_*" in text
        assert parse_policy_file(text).payload.tool_patterns == ("drop_*",)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_identity(self, seed):
        policy = random_policy(random.Random(seed))
        assert parse_policy_file(serialize_policy(policy)) == policy


class TestParserTotalityStructured:
    """Fuzz with front-matter-shaped prefixes: likelier to reach deep parse
    paths than plain random text."""

    @given(
        st.text(
            alphabet="abcdefghij:-[]{}'\"\n 0123456789.,_",
            max_size=200,
        )
    )
    @settings(max_examples=300, deadline=None)
    def test_front_matter_shaped_inputs_stay_in_the_error_type(self, payload):
        from govgate.errors import PolicyFileError

        for text in (
            "---\n" + payload,
            "---\n" + payload + "\n---\nbody",
            "---\nid: x\nkind: playbook\npriority: 1\n" + payload + "\n---\nbody",
        ):
            try:
                parse_policy_file(text)
            except PolicyFileError:
                pass
