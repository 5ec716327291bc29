"""Spanner evaluation, the brute-force oracle, and update application."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spanview import (
    Alphabet,
    Document,
    NotFunctionalError,
    OverlappingUpdateError,
    Span,
    apply_update,
    check_functional,
    evaluate_spanner,
    evaluate_update_relation,
    make_update,
    oracle_spanner,
    parse_formula,
)
from spanview.fuzz import gen_extractor

from conftest import docs_upto

AB = Alphabet(("a", "b"))
AC = Alphabet(("a", "c"))


def rows_of(relation, var="X"):
    return {row[var] for row in relation.rows}


def test_evaluate_known_relations():
    rel = evaluate_spanner(parse_formula("(a|b)* X{aa} (a|b)*", AB), "aaa")
    assert rows_of(rel) == {Span(1, 3), Span(2, 4)}
    rel = evaluate_spanner(parse_formula("x{\\e}", AB), "")
    assert rows_of(rel, "x") == {Span(1, 1)}
    rel = evaluate_spanner(parse_formula("(a|b)* X{aa} (a|b)*", AB), "bbb")
    assert rel.rows == frozenset()


def test_evaluate_requires_functional():
    with pytest.raises(NotFunctionalError):
        evaluate_spanner(parse_formula("X{a}|b", AB, mode="extraction"), "a")


def test_every_row_binds_every_variable():
    f = parse_formula("X{a|aa} (a|b)* Y{b}", AB)
    for doc in docs_upto(AB, 5):
        for row in evaluate_spanner(f, doc).rows:
            assert row.schema == ("X", "Y")
            assert len(row.spans) == 2


def test_update_relation_known_cases():
    u = make_update(".* x{c} .*", "a", AC)
    rel = evaluate_update_relation(u, "ccc")
    assert rel.spans == {Span(1, 2), Span(2, 3), Span(3, 4)}
    assert rel.overlap is None

    u = make_update("aa .* x{c}", "a", AC)
    rel = evaluate_update_relation(u, "aacac")
    assert rel.spans == {Span(5, 6)}

    assert evaluate_update_relation(u, "ccc").spans == frozenset()


def test_update_relation_reports_overlap():
    u = make_update(".* x{c .* c} .*", "a", AC)
    rel = evaluate_update_relation(u, "ccc")
    assert rel.overlap is not None
    a, b = rel.overlap
    assert a != b


def test_apply_update_replaces_all_sites():
    u = make_update("a* x{c} a*", "", AC)
    doc, rel = apply_update(u, Document("d", "aca"), AC)
    assert doc.content == "aa"
    assert rel.spans == {Span(2, 3)}

    u = make_update("aa .* x{c}", "cc", AC)
    doc, _ = apply_update(u, Document("d", "aacac"), AC)
    assert doc.content == "aacacc"


def test_apply_update_no_match_is_identity():
    u = make_update("aa .* x{c}", "cc", AC)
    doc, rel = apply_update(u, Document("d", "ccc"), AC)
    assert doc.content == "ccc"
    assert rel.spans == frozenset()


def test_apply_update_refuses_overlap():
    u = make_update(".* x{c .* c} .*", "a", AC)
    with pytest.raises(OverlappingUpdateError):
        apply_update(u, Document("d", "ccc"), AC)


def test_apply_update_insertion():
    u = make_update(".* a x{\\e} c .*", "aa", AC)
    doc, rel = apply_update(u, Document("d", "ac"), AC)
    assert rel.spans == {Span(2, 2)}
    assert doc.content == "aaac"


def test_oracle_matches_evaluator_on_known_formulas():
    for text in (".* X{aa} .*", "X{a|aa} .* Y{c}", "x{\\e} .*",
                 "(a|c)* X{a c* a} (a|c)*"):
        f = parse_formula(text, AC)
        for doc in docs_upto(AC, 4):
            assert evaluate_spanner(f, doc) == oracle_spanner(f, doc)


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_oracle_matches_evaluator_on_random_formulas(seed):
    rng = random.Random(seed)
    f = gen_extractor(rng, AC, 3)
    if not check_functional(f).ok:
        return
    for doc in ("", "a", "c", "ca", "aac", "caca"):
        assert evaluate_spanner(f, doc) == oracle_spanner(f, doc)


def test_evaluation_is_pure():
    """Evaluating twice gives equal relations (no hidden state)."""
    f = parse_formula(".* X{a c* a} .*", AC)
    assert evaluate_spanner(f, "acca") == evaluate_spanner(f, "acca")
