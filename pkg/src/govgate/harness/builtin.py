"""Locator for the suites shipped inside the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

BUILTIN_SUITES = ("backoffice", "demo")


def builtin_suite_path(name: str) -> Path:
    if name not in BUILTIN_SUITES:
        raise KeyError(f"unknown builtin suite {name!r}; have {BUILTIN_SUITES}")
    return Path(str(resources.files("govgate") / "builtin" / name))
