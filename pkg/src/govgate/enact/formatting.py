"""Final-response formatting.

Three modes: a template returned verbatim, markdown restructuring delegated
to the formatter model port, or schema-guided extraction validated against
the policy's JSON schema. Schema failures fail open: the raw response passes
through with a diagnostic rather than losing the answer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Protocol

import jsonschema

from govgate.errors import SchemaValidationFailed
from govgate.model.types import FormatterMode, OutputFormatterPayload


class FormatterModel(Protocol):
    """Port for the model-backed formatting operations."""

    def restructure(self, response: str) -> str: ...

    def extract(self, response: str, schema: Mapping[str, Any]) -> Any: ...


class PassthroughFormatterModel:
    """Deterministic default: markdown restructuring is the identity, and
    extraction attempts to read the response as a JSON document."""

    def restructure(self, response: str) -> str:
        return response

    def extract(self, response: str, schema: Mapping[str, Any]) -> Any:
        try:
            return json.loads(response)
        except json.JSONDecodeError as exc:
            raise SchemaValidationFailed(f"response is not JSON: {exc}") from exc


class ScriptedFormatterModel:
    """Test double with canned outputs."""

    def __init__(self, restructured: str | None = None, extracted: Any = None):
        self._restructured = restructured
        self._extracted = extracted

    def restructure(self, response: str) -> str:
        return self._restructured if self._restructured is not None else response

    def extract(self, response: str, schema: Mapping[str, Any]) -> Any:
        if self._extracted is None:
            raise SchemaValidationFailed("no scripted extraction")
        return self._extracted


@dataclass(frozen=True)
class FormatResult:
    output: Any
    diagnostic: str | None = None


def format_output(
    response: str,
    payload: OutputFormatterPayload | None,
    model: FormatterModel,
) -> FormatResult:
    """Apply the selected formatter payload; None means no formatter matched
    and the response passes through unchanged."""
    if payload is None:
        return FormatResult(output=response)
    if payload.mode is FormatterMode.TEMPLATE:
        return FormatResult(output=payload.template)
    if payload.mode is FormatterMode.MARKDOWN:
        return FormatResult(output=model.restructure(response))
    # json_schema
    try:
        document = model.extract(response, payload.schema)
        jsonschema.validate(document, payload.schema)
    except SchemaValidationFailed as exc:
        return FormatResult(output=response, diagnostic=str(exc))
    except jsonschema.ValidationError as exc:
        return FormatResult(
            output=response,
            diagnostic=f"extracted document failed schema validation: {exc.message}",
        )
    return FormatResult(output=document)
