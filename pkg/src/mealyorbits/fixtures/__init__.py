"""Bundled example automata, loadable by name."""

from __future__ import annotations

import json
from importlib import resources

from ..automaton import MealyAutomaton, parse_automaton


def _root():
    return resources.files(__package__)


def names() -> list[str]:
    """Names of all bundled automata (without the .aut extension)."""
    return sorted(
        entry.name[: -len(".aut")]
        for entry in _root().iterdir()
        if entry.name.endswith(".aut")
    )


def source(name: str) -> str:
    """Raw text of a bundled automaton file."""
    entry = _root() / f"{name}.aut"
    if not entry.is_file():
        raise KeyError(f"no bundled automaton named {name!r}; have {names()}")
    return entry.read_text(encoding="utf-8")


def load(name: str) -> MealyAutomaton:
    """Parse a bundled automaton."""
    return parse_automaton(source(name))


def load_alias(name: str) -> dict[str, str] | None:
    """The rendered-word -> display-name table for a fixture, if it has one."""
    entry = _root() / f"{name}.alias.json"
    if not entry.is_file():
        return None
    return json.loads(entry.read_text(encoding="utf-8"))
