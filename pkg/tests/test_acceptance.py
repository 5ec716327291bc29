"""Acceptance suite: the nine headline checks, one pass/fail line each.

Criteria 1-5 are exact known-value reproductions on the running phone-number
example and the small two-symbol scenarios; criteria 6-9 are properties of a
shared 1100-instance randomized campaign (seed 42) whose every static claim
is revalidated dynamically.
"""

import random

import pytest

from spanview import (
    Alphabet,
    Document,
    FuzzConfig,
    Span,
    alphabet_from_text,
    apply_update,
    check_functional,
    classify,
    evaluate_spanner,
    evaluate_update_relation,
    make_update,
    normalize,
    parse_formula,
    run_campaign,
    svars,
)
from spanview.ast import Capture, Concat, Or, Star

from conftest import NOTICE, PHONE, docs_upto

AB = Alphabet(("a", "b"))
AC = Alphabet(("a", "c"))


def _verdict_line(n: int, desc: str, ok: bool, detail: str = "") -> None:
    print(f"[criterion {n}] {desc}: {'PASS' if ok else 'FAIL'}")
    assert ok, detail


@pytest.fixture(scope="module")
def campaign():
    return run_campaign(FuzzConfig(instances=1100, seed=42))


def _kinds(campaign, names):
    return [v for v in campaign.violations if v.kind in names]


def test_criterion_1_phone_extraction_rows():
    alphabet = alphabet_from_text(NOTICE)
    rows = evaluate_spanner(parse_formula(PHONE, alphabet), NOTICE)
    want = set()
    for tn, ac, sc in (((42, 56), (44, 47), (52, 56)),
                       ((88, 103), (91, 94), (99, 103))):
        want.add((Span(*tn), Span(*ac), Span(*sc)))
    got = {
        (row["tn"], row["ac"], row["sc"]) for row in rows.rows
    }
    _verdict_line(1, "phone extractor yields exactly the two known tuples",
                  got == want, f"got {sorted(got)}")


def test_criterion_2_insertion_update():
    alphabet = alphabet_from_text(NOTICE)
    u = make_update(".* us\\s x{\\e} at .*", "free ", alphabet)
    relation = evaluate_update_relation(u, NOTICE)
    new_doc, _ = apply_update(u, Document("d", NOTICE), alphabet)
    ok = (relation.spans == {Span(39, 39)}
          and "call us free at" in new_doc.content)
    _verdict_line(2, "insertion update marks [39,39> and inserts 'free '",
                  ok, f"spans {sorted(map(str, relation.spans))}")


def test_criterion_3_normalization_equivalence():
    f = parse_formula("(a|b)* X{(Y{a}|Y{ab})a} Z{b|ba}", AB)
    norm = normalize(f)
    want = {
        parse_formula("(a|b)* X{Y{a}a} Z{b|ba}", AB),
        parse_formula("(a|b)* X{Y{ab}a} Z{b|ba}", AB),
    }
    ok = len(norm) == 2 and set(norm.disjuncts) == want
    if ok:
        g = norm.as_formula()
        ok = all(
            evaluate_spanner(f, doc) == evaluate_spanner(g, doc)
            for doc in docs_upto(AB, 6)
        )
    _verdict_line(3, "normalization: exact 2 disjuncts, same rows on all "
                     "docs up to length 6", ok)


def _capture_fanout(f):
    """Max over variables of the summed disjunct counts of that variable's
    capture bodies."""
    totals: dict[str, int] = {}

    def walk(node):
        if isinstance(node, Capture):
            totals[node.name] = totals.get(node.name, 0) + len(
                normalize(node.inner)
            )
            walk(node.inner)
        elif isinstance(node, (Or, Concat)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Star):
            walk(node.inner)

    walk(f)
    return max(totals.values(), default=1)


def test_criterion_4_disjunct_count_bound():
    from spanview.fuzz import gen_extractor

    rng = random.Random(2026)
    checked = 0
    ok = True
    detail = ""
    while checked < 200:
        f = gen_extractor(rng, AC, 3)
        if not check_functional(f).ok:
            continue
        checked += 1
        bound = _capture_fanout(f) ** max(len(svars(f)), 1)
        if len(normalize(f)) > bound:
            ok = False
            detail = f"formula #{checked} exceeds bound {bound}"
            break
    _verdict_line(4, "200 random formulas stay within the disjunct bound",
                  ok, detail)


def test_criterion_5_verdict_table():
    table = (
        ("aa .*", "c .* x{c}", "a", "Irrelevant"),
        ("X{cc} c*", ".* x{c} .*", "a", "DeleteAll"),
        (".* X{aa} .*", "aa .* x{c}", "cc", "PseudoIrrelevant"),
        (".* X{aa} .*", ".* x{c} .*", "cc", "Unknown"),
    )
    got = [
        classify(make_update(g, A, AC), parse_formula(e, AC), AC).verdict
        for e, g, A, _ in table
    ]
    want = [w for _, _, _, w in table]
    _verdict_line(5, "the four scenario verdicts come out exactly as "
                     "expected", got == want, f"got {got}")


def test_criterion_6_master_soundness(campaign):
    bad = _kinds(campaign, {
        "irrelevant-changed", "delete-all-survivor", "pseudo-shift-mismatch",
        "shift-collision", "overlap-despite-accepted",
    })
    ok = (campaign.instances >= 1000 and campaign.master_checks > 0
          and not bad)
    _verdict_line(6, f"{campaign.instances} instances, "
                     f"{campaign.master_checks} autonomous actions match "
                     f"re-extraction", ok, f"{bad[:3]}")


def test_criterion_7_oracle_equivalence(campaign):
    bad = _kinds(campaign, {"oracle-mismatch"})
    ok = campaign.oracle_pairs > 0 and not bad
    _verdict_line(7, f"evaluator agrees with the brute-force oracle on "
                     f"{campaign.oracle_pairs} sampled pairs", ok,
                  f"{bad[:3]}")


def test_criterion_8_overlap_machine_agreement(campaign):
    bad = _kinds(campaign, {
        "self-overlap-witness", "self-overlap-missed", "cross-overlap-witness",
        "proxy-overlap-witness", "replacement-overlap-witness",
    })
    ok = campaign.witnesses_confirmed > 0 and not bad
    _verdict_line(8, f"overlap machines agree with dynamic search; "
                     f"{campaign.witnesses_confirmed} witnesses confirmed",
                  ok, f"{bad[:3]}")


def test_criterion_9_shift_content_preservation(campaign):
    bad = _kinds(campaign, {"shift-content", "shift-collision"})
    ok = campaign.shift_checks > 0 and not bad
    _verdict_line(9, f"{campaign.shift_checks} shifted spans preserve their "
                     f"content", ok, f"{bad[:3]}")
