"""Region-labeled NFA compilation and the regular-language operations."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from spanview import Alphabet, boolean_projection, evaluate_spanner, parse_formula
from spanview.fuzz import gen_variable_free
from spanview.nfa import (
    combine,
    compile_disjunct,
    compile_formula,
    complement,
    concat,
    determinize,
    intersect,
    is_empty,
    union,
)

from conftest import docs_upto

AC = Alphabet(("a", "c"))
AB = Alphabet(("a", "b"))


def _language(m, max_len=6):
    return {d for d in docs_upto(m.alphabet, max_len) if m.accepts(d)}


def test_membership_matches_evaluator():
    """The compiled Boolean projection accepts exactly the documents where
    the formula produces at least one row."""
    for text in (".* X{aa} .*", "c a* X{c}", "(a|c)* X{a c* a} (a|c)*",
                 "a* (c|\\e)"):
        f = parse_formula(text, AC)
        m = compile_formula(boolean_projection(f), AC)
        for doc in docs_upto(AC, 5):
            assert m.accepts(doc) == bool(evaluate_spanner(f, doc).rows)


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_membership_matches_evaluator_random(seed):
    rng = random.Random(seed)
    f = gen_variable_free(rng, AC, 3)
    m = compile_formula(f, AC)
    for doc in docs_upto(AC, 4):
        assert m.accepts(doc) == bool(evaluate_spanner(f, doc).rows)


def test_empty_language_has_no_witness():
    m = compile_formula(parse_formula("\\0", AC), AC)
    assert is_empty(m) is None
    assert not m.accepts("")
    assert not m.accepts("a")


def test_witness_is_shortest():
    m = compile_formula(parse_formula("c a* c", AC), AC)
    w = is_empty(m)
    assert w is not None
    assert w.text == "cc"
    assert m.accepts(w.text)

    m = compile_formula(parse_formula("a*", AC), AC)
    assert is_empty(m).text == ""


def test_capture_region_labels():
    """Transitions consuming symbols inside a marked site carry the
    variable name; an empty site marks the transition that jumps it."""
    m = compile_disjunct(parse_formula("a* x{c} a*", AC, mode="update"), AC)
    inside = {t.symbol for t in m.transitions if "x" in t.inside}
    outside = {t.symbol for t in m.transitions if not t.inside}
    assert inside == {"c"}
    assert outside == {"a"}

    m = compile_disjunct(parse_formula("a x{\\e} c", AC, mode="update"), AC)
    crossing = [(t.symbol, set(t.crosses)) for t in m.transitions if t.crosses]
    assert crossing == [("c", {"x"})]


def test_intersect_known_languages():
    a_star = compile_formula(parse_formula("a*", AB), AB)
    b_star = compile_formula(parse_formula("b*", AB), AB)
    assert _language(intersect(a_star, b_star)) == {""}

    aa_lead = compile_formula(parse_formula("aa .*", AB), AB)
    b_lead = compile_formula(parse_formula("b .*", AB), AB)
    assert is_empty(intersect(aa_lead, b_lead)) is None


def test_concat_known_language():
    m = concat(compile_formula(parse_formula("a", AB), AB),
               compile_formula(parse_formula("b", AB), AB))
    assert _language(m) == {"ab"}


def test_complement_known_language():
    has_aa = compile_formula(parse_formula(".* aa .*", AC), AC)
    none_aa = complement(has_aa)
    assert none_aa.accepts("acac")
    assert not none_aa.accepts("caa")
    assert none_aa.accepts("")
    universe = set()
    for doc in docs_upto(AC, 5):
        assert has_aa.accepts(doc) != none_aa.accepts(doc)
        universe.add(doc)
    assert _language(has_aa, 5) | _language(none_aa, 5) == universe


@given(st.integers(0, 10**9))
@settings(max_examples=40, deadline=None)
def test_operations_match_set_semantics(seed):
    """union / intersect / concat / complement agree with the set
    operations on the accepted-document sets."""
    rng = random.Random(seed)
    m1 = compile_formula(gen_variable_free(rng, AB, 2), AB)
    m2 = compile_formula(gen_variable_free(rng, AB, 2), AB)
    l1, l2 = _language(m1, 4), _language(m2, 4)
    assert _language(union(m1, m2), 4) == l1 | l2
    assert _language(intersect(m1, m2), 4) == l1 & l2
    every = set(docs_upto(AB, 4))
    assert _language(complement(m1), 4) == every - l1
    cat = _language(concat(m1, m2), 4)
    want = {x + y for x in l1 for y in l2 if len(x) + len(y) <= 4}
    assert cat == want


def test_determinize_preserves_language():
    f = parse_formula("(a|c)* a c", AC)
    m = compile_formula(f, AC)
    d = determinize(m)
    assert _language(d) == _language(m)
    for q in range(d.n_states):
        for ch in AC.symbols:
            assert len(d.out(q, ch)) <= 1


def test_combine_dispatch():
    m1 = compile_formula(parse_formula("a*", AB), AB)
    m2 = compile_formula(parse_formula("b*", AB), AB)
    assert _language(combine("union", m1, m2)) == _language(union(m1, m2))
    assert _language(combine("intersect", m1, m2)) == {""}
    assert _language(combine("complement", m1), 3) == \
        _language(complement(m1), 3)


def test_dump_lists_every_transition():
    m = compile_disjunct(parse_formula("a x{c}", AC, mode="update"), AC)
    text = m.dump()
    lines = text.splitlines()
    assert lines[0].startswith("initial: ")
    assert lines[1].startswith("final: ")
    assert len(lines) == 2 + len(m.transitions)
    assert any("-a->" in ln for ln in lines)
    assert any("-c->" in ln and "[x]" in ln for ln in lines)
