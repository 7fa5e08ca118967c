"""Bundled three-qubit demo scenarios for the verify and experiment commands.

The demo dataset loads four of the eight 3-bit strings. The three headline
scenarios produce zero, one and two matches; the substring scenario is an
extra whose expectations come from the classical matcher like everything
else.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import WildcardTerm, parse_term

__all__ = ["Scenario", "DEMO_DATASET", "bundled_scenarios"]

DEMO_DATASET: tuple[str, ...] = ("000", "010", "011", "111")


@dataclass(frozen=True)
class Scenario:
    name: str
    dataset: tuple[str, ...]
    term_strings: tuple[str, ...]

    def terms(self) -> tuple[WildcardTerm, ...]:
        return tuple(parse_term(t) for t in self.term_strings)


def bundled_scenarios(include_substring_demo: bool = False) -> tuple[Scenario, ...]:
    base = (
        Scenario("no-match", DEMO_DATASET, ("10*",)),
        Scenario("one-match", DEMO_DATASET, ("00*",)),
        Scenario("two-match", DEMO_DATASET, ("01*",)),
    )
    if include_substring_demo:
        return base + (Scenario("substring-1", DEMO_DATASET, ("*1*",)),)
    return base
