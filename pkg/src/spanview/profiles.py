"""Variable profiles: the capture skeleton of a normalized disjunct.

The profile keeps only capture names and their nesting, in reading order,
e.g. ``z{y{}}x{}``.  Disjuncts sharing a profile bind the same variables in
the same arrangement, so a whole profile group can stand in for any of its
members when reasoning about which documents still produce rows after an
update.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import Capture, Concat, Or, RegexFormula, Star, or_all
from .normalize import NormalizedFormula


def variable_profile(d: RegexFormula) -> str:
    parts: list[str] = []

    def walk(node: RegexFormula) -> None:
        if isinstance(node, Capture):
            parts.append(node.name + "{")
            walk(node.inner)
            parts.append("}")
        elif isinstance(node, (Or, Concat)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Star):
            walk(node.inner)

    walk(d)
    return "".join(parts)


@dataclass(frozen=True)
class ProfileGroup:
    """The disjuncts of one profile, with their union formula."""

    profile: str
    disjuncts: tuple[RegexFormula, ...]

    def union_formula(self) -> RegexFormula:
        return or_all(list(self.disjuncts))


def partition_profiles(norm: NormalizedFormula) -> tuple[ProfileGroup, ...]:
    """Group disjuncts by profile, first-occurrence order; groups are
    disjoint and jointly cover every disjunct."""
    grouped: dict[str, list[RegexFormula]] = {}
    for d in norm.disjuncts:
        grouped.setdefault(variable_profile(d), []).append(d)
    return tuple(
        ProfileGroup(profile, tuple(members)) for profile, members in grouped.items()
    )
