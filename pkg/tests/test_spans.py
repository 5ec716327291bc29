"""Span arithmetic: overlap predicate, enumeration, shifting."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spanview import Span, SpanError, shift_span, shift_tuple, spans_overlap
from spanview.spans import SpanTuple, all_spans


def test_span_validation():
    with pytest.raises(SpanError):
        Span(0, 1)
    with pytest.raises(SpanError):
        Span(3, 2)
    assert Span(2, 2).empty
    assert not Span(2, 3).empty
    assert len(Span(4, 9)) == 5


def test_span_content():
    assert Span(1, 3).content("abcd") == "ab"
    assert Span(2, 2).content("abcd") == ""
    assert Span(5, 5).content("abcd") == ""
    with pytest.raises(SpanError):
        Span(4, 6).content("abcd")


def test_overlap_known_cases():
    """Shared offsets overlap; abutting or nested-at-the-end spans do not."""
    assert spans_overlap(Span(1, 3), Span(2, 4))
    assert spans_overlap(Span(1, 3), Span(1, 3))  # identical nonempty
    assert spans_overlap(Span(1, 3), Span(2, 2))  # empty inside
    assert spans_overlap(Span(1, 3), Span(1, 1))  # empty at start
    assert not spans_overlap(Span(1, 3), Span(3, 3))  # empty at end
    assert not spans_overlap(Span(1, 3), Span(3, 5))  # abutting
    assert not spans_overlap(Span(2, 2), Span(2, 2))  # identical empty
    assert not spans_overlap(Span(2, 2), Span(3, 3))


@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9),
       st.integers(1, 9))
@settings(max_examples=200)
def test_overlap_symmetric(a, b, c, d):
    s1 = Span(min(a, b), max(a, b))
    s2 = Span(min(c, d), max(c, d))
    assert spans_overlap(s1, s2) == spans_overlap(s2, s1)


def test_all_spans_count():
    """A document of length n has (n+1)(n+2)/2 spans."""
    assert len(all_spans(0)) == 1
    assert len(all_spans(3)) == 10
    assert all_spans(1) == [Span(1, 1), Span(1, 2), Span(2, 2)]


def test_shift_known_cases():
    assert shift_span(frozenset(), "aa", Span(5, 9)) == Span(5, 9)
    assert shift_span(frozenset({Span(5, 6)}), "cc", Span(1, 3)) == Span(1, 3)
    assert shift_span(frozenset({Span(1, 3)}), "c", Span(5, 7)) == Span(4, 6)


def test_shift_insertion_at_empty_span_boundary():
    """Text inserted at an empty site lands before the boundary an empty
    span at the same offset addresses, so that span moves right."""
    assert shift_span(frozenset({Span(1, 1)}), "aa", Span(1, 1)) == Span(3, 3)
    assert shift_span(frozenset({Span(2, 2)}), "c", Span(4, 6)) == Span(5, 7)
    # Zero-length replacement at an empty site moves nothing.
    assert shift_span(frozenset({Span(1, 1)}), "", Span(1, 1)) == Span(1, 1)


def test_shift_rejects_overlap():
    with pytest.raises(SpanError):
        shift_span(frozenset({Span(2, 4)}), "c", Span(3, 6))
    with pytest.raises(SpanError):
        shift_span(frozenset({Span(2, 4)}), "c", Span(2, 2))


@given(st.data())
@settings(max_examples=200)
def test_shift_content_preserved(data):
    """Shifting across simultaneous replacement lands on identical content."""
    doc = data.draw(st.text(alphabet="ac", min_size=1, max_size=8))
    n = len(doc)
    # One or two disjoint nonempty update sites.
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(i, n))
    sites = [Span(i, j + 1)]
    repl = data.draw(st.text(alphabet="ac", max_size=3))
    candidates = [
        s for s in all_spans(n)
        if all(not spans_overlap(s, u) for u in sites)
    ]
    if not candidates:
        return
    span = data.draw(st.sampled_from(candidates))
    updated = doc
    for u in sorted(sites, key=lambda s: s.start, reverse=True):
        updated = updated[: u.start - 1] + repl + updated[u.end - 1 :]
    shifted = shift_span(frozenset(sites), repl, span)
    assert shifted.content(updated) == span.content(doc)


def test_shift_tuple_applies_per_span():
    row = SpanTuple(("X", "Y"), (Span(1, 3), Span(5, 7)))
    shifted = shift_tuple(frozenset({Span(3, 4)}), "", row)
    assert shifted.spans == (Span(1, 3), Span(4, 6))
