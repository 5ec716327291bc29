"""Concrete syntax for formulas, and loaders for formula/update files.

Syntax: implicit concatenation, ``|`` for alternation, postfix ``*``,
parentheses, ``name{...}`` for captures, ``.`` for "any declared symbol",
``\\e`` for the empty string, ``\\0`` for the empty language, ``\\s`` for a
space, and ``\\<char>`` for a literal metacharacter.  Whitespace between
tokens is insignificant layout; a literal space symbol is always ``\\s``.
A capture name is a maximal run of ``[A-Za-z_][A-Za-z0-9_]*`` immediately
followed by ``{``, so ``a x{c}`` is a symbol then a capture while ``ax{c}``
is one capture named "ax".

Three parse modes:

* ``extraction``: any formula, except that captures may not appear under ``*``
  (such formulas can never bind each variable exactly once per match);
* ``update``: one capture variable whose operand is variable-free, in every
  alternative, with variable-free context around it;
* ``variable-free``: no captures at all.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from pathlib import Path

from .alphabet import Alphabet, AlphabetError
from .ast import (
    Capture,
    Concat,
    EmptyLang,
    Epsilon,
    Or,
    RegexFormula,
    Star,
    Sym,
    is_variable_free,
    or_all,
    svars,
)

_NAME_START = set(string.ascii_letters + "_")
_NAME_CHARS = set(string.ascii_letters + string.digits + "_")

MODES = ("extraction", "update", "variable-free")


class FormulaSyntaxError(ValueError):
    """Syntax or mode violation, with a 1-based position into the text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"at position {position}: {message}")
        self.position = position


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0  # 0-based index into text

    def error(self, message: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(message, self.pos + 1)

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\n\r":
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def peek_raw(self) -> str | None:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> RegexFormula:
        node = self.alternation()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return node

    def alternation(self) -> RegexFormula:
        node = self.sequence()
        while self.peek() == "|":
            self.pos += 1
            node = Or(node, self.sequence())
        return node

    def sequence(self) -> RegexFormula:
        parts = [self.repetition()]
        while True:
            ch = self.peek()
            if ch is None or ch in "|)}":
                break
            parts.append(self.repetition())
        node = parts[0]
        for part in parts[1:]:
            node = Concat(node, part)
        return node

    def repetition(self) -> RegexFormula:
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            node = Star(node)
        return node

    def atom(self) -> RegexFormula:
        ch = self.peek()
        if ch is None:
            raise self.error("unexpected end of formula")
        if ch == "(":
            self.pos += 1
            node = self.alternation()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return node
        if ch == "\\":
            return self.escape()
        if ch == ".":
            self.pos += 1
            return or_all([Sym(s) for s in self.alphabet])
        if ch in "*|){}":
            raise self.error(f"unexpected {ch!r}")
        if ch in _NAME_START:
            name = self.try_capture_name()
            if name is not None:
                return self.capture(name)
        return self.symbol(ch)

    def escape(self) -> RegexFormula:
        self.pos += 1  # past the backslash
        ch = self.peek_raw()
        if ch is None:
            raise self.error("dangling backslash")
        if ch == "e":
            self.pos += 1
            return Epsilon()
        if ch == "0":
            self.pos += 1
            return EmptyLang()
        sym = " " if ch == "s" else ch
        if sym not in self.alphabet:
            raise self.error(f"symbol {sym!r} is not in the declared alphabet")
        self.pos += 1
        return Sym(sym)

    def try_capture_name(self) -> str | None:
        """A maximal name run counts as a capture only when '{' follows."""
        end = self.pos
        while end < len(self.text) and self.text[end] in _NAME_CHARS:
            end += 1
        if end < len(self.text) and self.text[end] == "{":
            name = self.text[self.pos : end]
            self.pos = end + 1  # consume the '{' as well
            return name
        return None

    def capture(self, name: str) -> RegexFormula:
        inner = self.alternation()
        if self.peek() != "}":
            raise self.error("expected '}'")
        self.pos += 1
        return Capture(name, inner)

    def symbol(self, ch: str) -> RegexFormula:
        if ch not in self.alphabet:
            raise self.error(f"symbol {ch!r} is not in the declared alphabet")
        self.pos += 1
        return Sym(ch)


def _reject_capture_under_star(f: RegexFormula, text: str) -> None:
    def walk(node: RegexFormula, under_star: bool) -> None:
        if isinstance(node, Capture):
            if under_star:
                raise FormulaSyntaxError(
                    f"capture {node.name!r} appears under '*'", len(text)
                )
            walk(node.inner, under_star)
        elif isinstance(node, (Or, Concat)):
            walk(node.left, under_star)
            walk(node.right, under_star)
        elif isinstance(node, Star):
            walk(node.inner, True)

    walk(f, False)


def _check_update_shape(f: RegexFormula, text: str) -> None:
    """Enforce the update grammar: per alternative, one capture of a
    variable-free operand with variable-free context on either side."""

    names = svars(f)
    if len(names) != 1:
        raise FormulaSyntaxError(
            "update formula must use exactly one capture variable"
            f" (found {list(names) or 'none'})",
            len(text),
        )

    def shaped(node: RegexFormula) -> bool:
        if isinstance(node, Or):
            return shaped(node.left) and shaped(node.right)
        if isinstance(node, Concat):
            if is_variable_free(node.left):
                return shaped(node.right)
            if is_variable_free(node.right):
                return shaped(node.left)
            return False
        if isinstance(node, Capture):
            return is_variable_free(node.inner)
        return False

    if not shaped(f):
        _reject_capture_under_star(f, text)
        raise FormulaSyntaxError(
            "update formula must mark one variable-free region per alternative",
            len(text),
        )


def parse_formula(text: str, alphabet: Alphabet, mode: str = "extraction") -> RegexFormula:
    """Parse ``text`` into a formula tree, enforcing the given mode."""
    if mode not in MODES:
        raise ValueError(f"unknown parse mode {mode!r}")
    node = _Parser(text, alphabet).parse()
    if mode == "variable-free":
        if not is_variable_free(node):
            raise FormulaSyntaxError("captures are not allowed here", len(text))
    elif mode == "update":
        _check_update_shape(node, text)
    else:
        _reject_capture_under_star(node, text)
    return node


@dataclass(frozen=True)
class UpdateExpression:
    """A match-and-replace rule: replace every marked span with ``replacement``."""

    formula: RegexFormula
    replacement: str

    @property
    def variable(self) -> str:
        return svars(self.formula)[0]


def make_update(formula_text: str, replacement: str, alphabet: Alphabet) -> UpdateExpression:
    formula = parse_formula(formula_text, alphabet, mode="update")
    alphabet.check_text(replacement, what="replacement")
    return UpdateExpression(formula, replacement)


_ALPHABET_PREFIX = "alphabet: "


def load_formula_file(
    path: str | Path,
    default_alphabet: Alphabet | None = None,
    mode: str = "extraction",
) -> tuple[RegexFormula, Alphabet]:
    """Read a formula file.

    The first line may be ``alphabet: <chars>`` declaring the alphabet as the
    characters of ``<chars>`` taken literally; otherwise ``default_alphabet``
    must be provided.  Remaining lines are joined into one formula string.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    alphabet = default_alphabet
    if lines and lines[0].startswith(_ALPHABET_PREFIX):
        alphabet = Alphabet(tuple(dict.fromkeys(lines[0][len(_ALPHABET_PREFIX):])))
        lines = lines[1:]
    if alphabet is None:
        raise AlphabetError(
            f"{path}: no alphabet declared in the file and none supplied"
        )
    return parse_formula("\n".join(lines), alphabet, mode=mode), alphabet


def load_update_file(path: str | Path, alphabet: Alphabet) -> UpdateExpression:
    """Read an update JSON file: {"formula": "...", "replacement": "..."}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict) or "formula" not in raw or "replacement" not in raw:
        raise ValueError(f"{path}: expected keys 'formula' and 'replacement'")
    return make_update(raw["formula"], raw["replacement"], alphabet)
