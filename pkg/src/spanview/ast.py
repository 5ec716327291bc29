"""Formula syntax trees for span extractors and update expressions.

A formula is a regular expression extended with named capture variables.
``Capture("x", inner)`` marks the substring matched by ``inner`` as the span
bound to variable ``x``.  Stripping every capture marker yields the plain
regular language of the formula (its boolean projection).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

# Characters with syntactic meaning in the concrete syntax; everything else is
# a literal symbol.  Escapes: \e = empty string, \0 = empty language,
# \s = space, \<meta> = that literal character.
METACHARS = frozenset("|*(){}\\.")


class RegexFormula:
    """Base class for formula nodes.  Nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class EmptyLang(RegexFormula):
    """Matches nothing at all."""

    __slots__ = ()


@dataclass(frozen=True)
class Epsilon(RegexFormula):
    """Matches only the empty string."""

    __slots__ = ()


@dataclass(frozen=True)
class Sym(RegexFormula):
    """Matches one occurrence of a single alphabet symbol."""

    __slots__ = ("char",)
    char: str


@dataclass(frozen=True)
class Or(RegexFormula):
    __slots__ = ("left", "right")
    left: RegexFormula
    right: RegexFormula


@dataclass(frozen=True)
class Concat(RegexFormula):
    __slots__ = ("left", "right")
    left: RegexFormula
    right: RegexFormula


@dataclass(frozen=True)
class Star(RegexFormula):
    __slots__ = ("inner",)
    inner: RegexFormula


@dataclass(frozen=True)
class Capture(RegexFormula):
    """Binds the span matched by ``inner`` to the variable ``name``."""

    __slots__ = ("name", "inner")
    name: str
    inner: RegexFormula


EMPTY = EmptyLang()
EPSILON = Epsilon()


def svars(f: RegexFormula) -> tuple[str, ...]:
    """Capture variables of ``f``, ordered by first appearance (preorder)."""
    out: list[str] = []

    def walk(node: RegexFormula) -> None:
        if isinstance(node, Capture):
            if node.name not in out:
                out.append(node.name)
            walk(node.inner)
        elif isinstance(node, (Or, Concat)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Star):
            walk(node.inner)

    walk(f)
    return tuple(out)


@lru_cache(maxsize=None)
def is_variable_free(f: RegexFormula) -> bool:
    if isinstance(f, Capture):
        return False
    if isinstance(f, (Or, Concat)):
        return is_variable_free(f.left) and is_variable_free(f.right)
    if isinstance(f, Star):
        return is_variable_free(f.inner)
    return True


def boolean_projection(f: RegexFormula) -> RegexFormula:
    """Strip every capture marker, leaving the plain regular expression.

    Idempotent; the result is always variable-free.
    """
    if isinstance(f, Capture):
        return boolean_projection(f.inner)
    if isinstance(f, Or):
        return Or(boolean_projection(f.left), boolean_projection(f.right))
    if isinstance(f, Concat):
        return Concat(boolean_projection(f.left), boolean_projection(f.right))
    if isinstance(f, Star):
        return Star(boolean_projection(f.inner))
    return f


def or_all(parts: list[RegexFormula]) -> RegexFormula:
    """Left-folded disjunction of ``parts``; EmptyLang for an empty list."""
    if not parts:
        return EMPTY
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


def concat_all(parts: list[RegexFormula]) -> RegexFormula:
    """Left-folded concatenation of ``parts``; Epsilon for an empty list."""
    if not parts:
        return EPSILON
    acc = parts[0]
    for p in parts[1:]:
        acc = Concat(acc, p)
    return acc


def literal(text: str) -> RegexFormula:
    """Formula matching exactly ``text`` (Epsilon when empty)."""
    return concat_all([Sym(ch) for ch in text])


def _escape_sym(ch: str) -> str:
    if ch == " ":
        return "\\s"
    if ch in METACHARS:
        return "\\" + ch
    return ch


# Precedence levels used when rendering: Or < Concat < Star/atom.
_PREC_OR, _PREC_CONCAT, _PREC_ATOM = 0, 1, 2

_NAME_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_")
_CAPTURE_HEAD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\{")


def _join_concat(left: str, right: str) -> str:
    # A letter symbol directly before a capture would be munched into the
    # capture's name on re-parse; a space keeps the token boundary.
    if left and left[-1] in _NAME_CHARS and _CAPTURE_HEAD.match(right):
        return left + " " + right
    return left + right


def render(f: RegexFormula) -> str:
    """Concrete-syntax text for ``f``.

    Re-parsing yields the same rows on every document; the tree may
    re-associate (chains of ``|`` and concatenation parse left-nested).
    """

    def go(node: RegexFormula, prec: int) -> str:
        if isinstance(node, EmptyLang):
            return "\\0"
        if isinstance(node, Epsilon):
            return "\\e"
        if isinstance(node, Sym):
            return _escape_sym(node.char)
        if isinstance(node, Capture):
            return f"{node.name}{{{go(node.inner, _PREC_OR)}}}"
        if isinstance(node, Star):
            return go(node.inner, _PREC_ATOM) + "*"
        if isinstance(node, Concat):
            text = _join_concat(go(node.left, _PREC_CONCAT),
                                go(node.right, _PREC_ATOM))
            return text if prec <= _PREC_CONCAT else "(" + text + ")"
        if isinstance(node, Or):
            text = go(node.left, _PREC_OR) + "|" + go(node.right, _PREC_CONCAT)
            return text if prec <= _PREC_OR else "(" + text + ")"
        raise TypeError(f"unknown formula node {node!r}")

    return go(f, _PREC_OR)
