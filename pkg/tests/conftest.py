"""Shared fixtures: alphabets, the running example document, helpers."""

from __future__ import annotations

from itertools import product

import pytest

from spanview import Alphabet, alphabet_from_text

# The running example: a 120-character notice with three phone-number-shaped
# substrings, two of which carry a dialing prefix.
NOTICE = (
    "For information on COVID-19 , call us at 1-833-784-4397 , "
    "specific to your province at +1-867-975-5772 or 403-644-4545 ."
)

_DIGIT = "(0|1|2|3|4|5|6|7|8|9)"

# Phone extractor: a dialing prefix (01, 1, or +1), then dash-separated digit
# groups; area code and subscriber code are separately captured.  A leading
# space keeps the bare "1" alternative from re-matching inside "+1".
PHONE = (
    ".* \\s tn{ (01|1|+1) - ac{" + _DIGIT * 3 + "} - " + _DIGIT * 3
    + " - sc{" + _DIGIT * 4 + "} } .*"
)


def docs_upto(alphabet: Alphabet, max_len: int) -> list[str]:
    """Every document over ``alphabet`` of length at most ``max_len``."""
    return [
        "".join(combo)
        for length in range(max_len + 1)
        for combo in product(alphabet.symbols, repeat=length)
    ]


@pytest.fixture
def ab() -> Alphabet:
    return Alphabet(("a", "b"))


@pytest.fixture
def ac() -> Alphabet:
    return Alphabet(("a", "c"))


@pytest.fixture
def notice_alphabet() -> Alphabet:
    return alphabet_from_text(NOTICE)
