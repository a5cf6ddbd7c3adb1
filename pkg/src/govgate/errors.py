"""Exception types shared across the engine.

Every failure the engine can produce maps to one of these named errors;
callers that need a posture (fail open / fail closed) catch the specific
type, never bare Exception.
"""

from __future__ import annotations


class GovgateError(Exception):
    """Base class for all engine errors."""


# --- policy file parsing ---------------------------------------------------


class PolicyFileError(GovgateError):
    """Base class for policy file parse failures."""


class MalformedFrontMatter(PolicyFileError):
    pass


class UnknownKind(PolicyFileError):
    def __init__(self, kind: object):
        super().__init__(f"unknown policy kind: {kind!r}")
        self.kind = kind


class UnknownField(PolicyFileError):
    def __init__(self, name: str):
        super().__init__(f"unknown front-matter key: {name!r}")
        self.name = name


class MissingRequiredField(PolicyFileError):
    def __init__(self, name: str):
        super().__init__(f"missing required field: {name}")
        self.name = name


class InvalidTrigger(PolicyFileError):
    def __init__(self, reason: str):
        super().__init__(f"invalid trigger: {reason}")
        self.reason = reason


class InvalidFieldValue(PolicyFileError):
    def __init__(self, name: str, reason: str):
        super().__init__(f"invalid value for {name}: {reason}")
        self.name = name
        self.reason = reason


# --- store -----------------------------------------------------------------


class ValidationFailed(GovgateError):
    """Raised by the store when asked to persist an invalid policy."""

    def __init__(self, violations):
        summary = "; ".join(f"{v.field}: {v.rule}" for v in violations)
        super().__init__(f"policy failed validation: {summary}")
        self.violations = list(violations)


# --- trigger evaluation ----------------------------------------------------


class DimensionMismatch(GovgateError):
    pass


class ZeroVector(GovgateError):
    pass


class MissingTargetField(GovgateError):
    def __init__(self, field: str):
        super().__init__(f"context field required by trigger is absent: {field}")
        self.field = field


# --- matching / resolution -------------------------------------------------


class ResolverFailure(GovgateError):
    """The semantic resolver errored or returned an out-of-contract verdict."""


# --- enactment -------------------------------------------------------------


class IllegalTransition(GovgateError):
    def __init__(self, current: str, requested: str):
        super().__init__(f"illegal session transition: {current} -> {requested}")
        self.current = current
        self.requested = requested


class UnknownRequest(GovgateError):
    def __init__(self, request_id: str):
        super().__init__(f"unknown approval request: {request_id}")
        self.request_id = request_id


class AlreadyResolved(GovgateError):
    def __init__(self, request_id: str):
        super().__init__(f"approval request already resolved: {request_id}")
        self.request_id = request_id


class SchemaValidationFailed(GovgateError):
    """Formatter output did not validate against the policy's JSON schema."""


# --- harness ---------------------------------------------------------------


class ScriptExhausted(GovgateError):
    """The scripted agent ran out of steps before the session finished."""


class EmptySuite(GovgateError):
    """A suite run was requested over zero scenarios."""


class EmptyResults(GovgateError):
    """Metrics were requested over zero results."""
