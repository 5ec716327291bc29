"""Declared alphabets for documents and formulas.

Every formula, document, and automaton in this package is interpreted over an
explicit finite alphabet of single characters.  Keeping the alphabet closed is
what makes complementation and the dot shorthand well defined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class AlphabetError(ValueError):
    """Raised for malformed alphabet declarations or out-of-alphabet symbols."""


@dataclass(frozen=True)
class Alphabet:
    """An ordered, duplicate-free collection of single-character symbols."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise AlphabetError("alphabet must declare at least one symbol")
        seen = set()
        for sym in self.symbols:
            if len(sym) != 1:
                raise AlphabetError(f"alphabet symbol {sym!r} is not a single character")
            if sym in seen:
                raise AlphabetError(f"duplicate alphabet symbol {sym!r}")
            seen.add(sym)

    def __contains__(self, sym: str) -> bool:
        return sym in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def check_text(self, text: str, *, what: str = "text") -> None:
        """Raise AlphabetError if any character of ``text`` is undeclared."""
        for ch in text:
            if ch not in self.symbols:
                raise AlphabetError(f"{what} contains {ch!r}, not in the declared alphabet")


def alphabet_from_text(text: str) -> Alphabet:
    """Alphabet of the distinct characters of ``text``, in sorted order."""
    return Alphabet(tuple(sorted(set(text))))


def load_alphabet(path: str | Path) -> Alphabet:
    """Read an ``alphabet.json`` file of the form {"symbols": ["a", "c"]}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict) or "symbols" not in raw:
        raise AlphabetError(f"{path}: expected an object with a 'symbols' list")
    symbols = raw["symbols"]
    if not isinstance(symbols, list) or not all(isinstance(s, str) for s in symbols):
        raise AlphabetError(f"{path}: 'symbols' must be a list of strings")
    return Alphabet(tuple(symbols))


def save_alphabet(alphabet: Alphabet, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps({"symbols": list(alphabet.symbols)}, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
