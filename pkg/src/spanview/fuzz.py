"""Randomized differential campaign for the static classifier.

Every static claim this package makes has a dynamic counterpart that can be
checked by brute force on small documents:

* an autonomous verdict promises that the corresponding view action agrees
  with re-extraction on every document;
* an empty self-overlap machine promises that no document makes the update
  mark two overlapping spans;
* a nonempty overlap machine hands out a witness document, which must really
  exhibit the conflict it claims;
* the evaluator must agree with the brute-force oracle;
* when marked spans and extracted spans are certified disjoint, shifting an
  extracted span across the replacement must preserve its content.

``run_campaign`` generates random extractor/update pairs, classifies each,
and checks all of the above exhaustively over every document up to a length
bound.  Any discrepancy is recorded as a violation; a clean campaign is the
empirical backbone of the test suite.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product

from .alphabet import Alphabet
from .ast import (
    Capture,
    Concat,
    EmptyLang,
    Epsilon,
    Or,
    RegexFormula,
    Star,
    Sym,
    boolean_projection,
    concat_all,
    or_all,
    render,
    svars,
)
from .evaluate import (
    Document,
    apply_update,
    evaluate_spanner,
    evaluate_update_relation,
    oracle_spanner,
)
from .nfa import compile as compile_nfa
from .normalize import anywhere_proxy, check_functional, proxy
from .parser import UpdateExpression
from .spans import shift_span, shift_tuple, spans_overlap
from .verifier import (
    AUTONOMOUS,
    DELETE_ALL,
    IRRELEVANT,
    PSEUDO_IRRELEVANT,
    REJECTED,
    UNKNOWN,
    VERDICTS,
    classify,
)


@dataclass(frozen=True)
class FuzzConfig:
    """Knobs for one campaign.  Small alphabets and short documents keep the
    exhaustive document sweep tractable."""

    instances: int = 300
    seed: int = 0
    alphabet_size: int = 2  # 2 or 3
    max_doc_len: int = 6  # exhaustive sweep bound; <= 8
    max_depth: int = 3  # recursion depth for generated subformulas
    oracle_len_one_var: int = 5  # doc length cap for 1-variable oracle runs
    oracle_len_two_var: int = 4  # tighter cap: oracle cost grows fast
    shift_doc_cap: int = 8  # affected docs checked for Unknown-but-disjoint

    def __post_init__(self) -> None:
        if not (2 <= self.alphabet_size <= 3):
            raise ValueError("alphabet_size must be 2 or 3")
        if not (1 <= self.max_doc_len <= 8):
            raise ValueError("max_doc_len must be between 1 and 8")
        if self.instances < 1:
            raise ValueError("instances must be positive")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(("a", "c", "b")[: self.alphabet_size])


@dataclass(frozen=True)
class Violation:
    instance: int
    kind: str
    detail: str


@dataclass
class CampaignReport:
    config: FuzzConfig
    instances: int = 0
    skipped_nonfunctional: int = 0
    verdicts: dict[str, int] = field(default_factory=dict)
    oracle_pairs: int = 0
    witnesses_confirmed: int = 0
    docs_swept: int = 0
    master_checks: int = 0
    shift_checks: int = 0
    violations: list[Violation] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_report(self) -> dict:
        return {
            "seed": self.config.seed,
            "instances": self.instances,
            "skipped_nonfunctional": self.skipped_nonfunctional,
            "verdicts": dict(self.verdicts),
            "oracle_pairs": self.oracle_pairs,
            "witnesses_confirmed": self.witnesses_confirmed,
            "docs_swept": self.docs_swept,
            "master_checks": self.master_checks,
            "shift_checks": self.shift_checks,
            "violations": [
                {"instance": v.instance, "kind": v.kind, "detail": v.detail}
                for v in self.violations
            ],
            "elapsed_s": round(self.elapsed_s, 3),
        }


# --- random formula generation ----------------------------------------------


def gen_variable_free(rng: random.Random, alphabet: Alphabet,
                      depth: int) -> RegexFormula:
    """A random variable-free formula of bounded depth."""
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        pick = rng.random()
        if pick < 0.75:
            return Sym(rng.choice(alphabet.symbols))
        if pick < 0.95:
            return Epsilon()
        return EmptyLang()
    if roll < 0.65:
        return Or(
            gen_variable_free(rng, alphabet, depth - 1),
            gen_variable_free(rng, alphabet, depth - 1),
        )
    if roll < 0.85:
        return Concat(
            gen_variable_free(rng, alphabet, depth - 1),
            gen_variable_free(rng, alphabet, depth - 1),
        )
    return Star(gen_variable_free(rng, alphabet, depth - 1))


def _dot_star(alphabet: Alphabet) -> RegexFormula:
    return Star(or_all([Sym(s) for s in alphabet]))


def _pad(rng: random.Random, alphabet: Alphabet, depth: int) -> RegexFormula:
    roll = rng.random()
    if roll < 0.5:
        return _dot_star(alphabet)
    if roll < 0.75:
        return gen_variable_free(rng, alphabet, depth - 1)
    return Epsilon()


def gen_extractor(rng: random.Random, alphabet: Alphabet,
                  depth: int) -> RegexFormula:
    """A random extraction formula, biased toward functional shapes.

    Three shapes: context-padded captures (always functional), a fully random
    tree with captures sprinkled in (often not functional; the caller skips
    those), and a two-variable padded shape.
    """
    roll = rng.random()
    if roll < 0.45:
        return concat_all([
            _pad(rng, alphabet, depth),
            Capture("X", gen_variable_free(rng, alphabet, depth - 1)),
            _pad(rng, alphabet, depth),
        ])
    if roll < 0.65:
        return concat_all([
            _pad(rng, alphabet, depth),
            Capture("X", gen_variable_free(rng, alphabet, depth - 1)),
            _pad(rng, alphabet, depth),
            Capture("Y", gen_variable_free(rng, alphabet, depth - 1)),
            _pad(rng, alphabet, depth),
        ])
    if roll < 0.8:
        # Capture under a disjunction on both sides stays functional.
        branch = Or(
            Capture("X", gen_variable_free(rng, alphabet, depth - 1)),
            Capture("X", gen_variable_free(rng, alphabet, depth - 1)),
        )
        return concat_all([
            _pad(rng, alphabet, depth), branch, _pad(rng, alphabet, depth),
        ])
    # Free-form: place the capture at a random spot in a random tree.  One
    # branch of an Or may miss the capture, making the result non-functional.
    def tree(d: int, may_capture: bool) -> RegexFormula:
        if d <= 0 or rng.random() < 0.4:
            if may_capture and rng.random() < 0.5:
                return Capture("X", gen_variable_free(rng, alphabet, 1))
            return gen_variable_free(rng, alphabet, 1)
        kind = rng.random()
        if kind < 0.45:
            side = rng.random() < 0.5
            return Or(tree(d - 1, may_capture and side),
                      tree(d - 1, may_capture and not side))
        if kind < 0.9:
            side = rng.random() < 0.5
            return Concat(tree(d - 1, may_capture and side),
                          tree(d - 1, may_capture and not side))
        return Star(tree(d - 1, False))

    return tree(depth, True)


def gen_update(rng: random.Random, alphabet: Alphabet,
               depth: int) -> UpdateExpression:
    """A random match-and-replace rule in context/target/context shape."""

    def body() -> RegexFormula:
        # Shallow bodies mark fixed-length spans and rarely self-overlap;
        # mixing in deeper ones keeps the refusal path exercised.
        d = 1 if rng.random() < 0.6 else depth - 1
        return gen_variable_free(rng, alphabet, d)

    def site() -> RegexFormula:
        return concat_all([
            _pad(rng, alphabet, depth),
            Capture("x", body()),
            _pad(rng, alphabet, depth),
        ])

    roll = rng.random()
    if roll < 0.6:
        formula = site()
    elif roll < 0.85:
        formula = Or(site(), site())
    else:
        # Anchored: no leading context; tends to mark spans near the start.
        formula = concat_all([Capture("x", body()), _pad(rng, alphabet, depth)])
    length = rng.choice((0, 1, 1, 2, 3))
    replacement = "".join(rng.choice(alphabet.symbols) for _ in range(length))
    return UpdateExpression(formula, replacement)


def gen_pinned_pair(rng: random.Random, alphabet: Alphabet,
                    depth: int) -> tuple[RegexFormula, UpdateExpression]:
    """A coupled pair: the extractor captures a fixed head, the update marks
    spans strictly after it.  Such pairs usually classify as autonomous, which
    keeps the rarer verdicts well represented in a campaign."""
    head = [Sym(rng.choice(alphabet.symbols))
            for _ in range(rng.randint(1, 2))]
    e = concat_all([
        Capture("X", concat_all(list(head))),
        _pad(rng, alphabet, depth),
    ])
    body_depth = 1 if rng.random() < 0.7 else depth - 1
    g = concat_all(list(head) + [
        _pad(rng, alphabet, depth),
        Capture("x", gen_variable_free(rng, alphabet, body_depth)),
        _pad(rng, alphabet, depth),
    ])
    length = rng.choice((0, 1, 2))
    replacement = "".join(rng.choice(alphabet.symbols) for _ in range(length))
    return e, UpdateExpression(g, replacement)


# --- campaign ----------------------------------------------------------------


def _all_docs(alphabet: Alphabet, max_len: int) -> list[str]:
    docs: list[str] = []
    for length in range(max_len + 1):
        for combo in product(alphabet.symbols, repeat=length):
            docs.append("".join(combo))
    return docs


def _marked_spans(u: UpdateExpression, doc: str) -> frozenset:
    return evaluate_update_relation(u, doc).spans


def _spans_of_rows(relation) -> set:
    out = set()
    for row in relation.rows:
        out.update(row.spans)
    return out


def run_campaign(config: FuzzConfig) -> CampaignReport:
    rng = random.Random(config.seed)
    alphabet = config.alphabet
    corpus = _all_docs(alphabet, config.max_doc_len)
    report = CampaignReport(config=config,
                            verdicts={v: 0 for v in VERDICTS})
    start = time.perf_counter()

    for instance in range(config.instances):
        if rng.random() < 0.18:
            e, u = gen_pinned_pair(rng, alphabet, config.max_depth)
        else:
            e = gen_extractor(rng, alphabet, config.max_depth)
            u = gen_update(rng, alphabet, config.max_depth)
        if not check_functional(e).ok:
            report.skipped_nonfunctional += 1
            report.instances += 1
            continue
        _check_instance(report, instance, e, u, alphabet, corpus, config, rng)
        report.instances += 1

    report.elapsed_s = time.perf_counter() - start
    return report


def _check_instance(report: CampaignReport, instance: int, e: RegexFormula,
                    u: UpdateExpression, alphabet: Alphabet,
                    corpus: list[str], config: FuzzConfig,
                    rng: random.Random) -> None:
    fail = lambda kind, detail: report.violations.append(  # noqa: E731
        Violation(instance, kind, detail)
    )
    label = f"e={render(e)} g={render(u.formula)} A={u.replacement!r}"

    cls = classify(u, e, alphabet)
    report.verdicts[cls.verdict] += 1

    # Witness confirmation: every nonempty overlap machine must hand out a
    # document on which the conflict it reports really happens.
    self_stage = cls.find("self-overlap")
    if self_stage is not None and not self_stage.empty:
        ur = evaluate_update_relation(u, self_stage.witness)
        if ur.overlap is None:
            fail("self-overlap-witness",
                 f"{label}: witness {self_stage.witness!r} has no overlapping pair")
        else:
            report.witnesses_confirmed += 1
    _confirm_cross_witness(report, instance, cls, "cross-overlap",
                           u.formula, u.variable, e, label)
    if cls.find("proxy-overlap") is not None:
        _confirm_cross_witness(report, instance, cls, "proxy-overlap",
                               proxy(u).as_formula(), u.variable, e, label)
    if cls.find("replacement-overlap") is not None:
        _confirm_cross_witness(report, instance, cls, "replacement-overlap",
                               anywhere_proxy(u, alphabet).as_formula(),
                               u.variable, e, label)

    # Exhaustive dynamic sweep.  Only documents matched by the update's
    # condition can be affected; the compiled condition machine filters them.
    m_g = compile_nfa(boolean_projection(u.formula), alphabet)
    affected = [d for d in corpus if m_g.accepts(d)]
    report.docs_swept += len(affected)

    need_master = cls.verdict in AUTONOMOUS
    disjoint_stages = [cls.find(n) for n in
                       ("cross-overlap", "proxy-overlap", "replacement-overlap")]
    certified_disjoint = all(s is not None and s.empty for s in disjoint_stages)
    shift_budget = (len(affected) if cls.verdict == PSEUDO_IRRELEVANT
                    else config.shift_doc_cap)

    overlap_seen = False
    for doc in affected:
        ur = evaluate_update_relation(u, doc)
        if ur.overlap is not None:
            overlap_seen = True
            if cls.verdict != REJECTED:
                fail("overlap-despite-accepted",
                     f"{label}: doc {doc!r} marks overlapping spans "
                     f"{ur.overlap} but verdict is {cls.verdict}")
            continue
        check_shift = certified_disjoint and shift_budget > 0
        if not (need_master or check_shift):
            continue
        old = evaluate_spanner(e, doc)
        updated, _ = apply_update(u, Document("fuzz", doc), alphabet)
        if need_master:
            report.master_checks += 1
            _check_master(fail, cls.verdict, e, u, doc, updated.content,
                          old, ur, label)
        if check_shift:
            shift_budget -= 1
            report.shift_checks += 1
            _check_shift(fail, u, doc, updated.content, old, ur, label)

    if self_stage is not None and self_stage.empty and overlap_seen:
        fail("self-overlap-missed",
             f"{label}: machine empty but a document marks overlapping spans")

    _check_oracle(report, fail, e, u, corpus, config, rng, label)


def _confirm_cross_witness(report: CampaignReport, instance: int, cls,
                           stage_name: str, marker: RegexFormula, var: str,
                           e: RegexFormula, label: str) -> None:
    stage = cls.find(stage_name)
    if stage is None or stage.empty:
        return
    doc = stage.witness
    marked = {row[var] for row in evaluate_spanner(marker, doc).rows}
    extracted = _spans_of_rows(evaluate_spanner(e, doc))
    if any(spans_overlap(m, s) for m in marked for s in extracted):
        report.witnesses_confirmed += 1
    else:
        report.violations.append(Violation(
            instance, f"{stage_name}-witness",
            f"{label}: witness {doc!r} shows no span conflict",
        ))


def _check_master(fail, verdict: str, e: RegexFormula, u: UpdateExpression,
                  doc: str, updated: str, old, ur, label: str) -> None:
    new = evaluate_spanner(e, updated)
    where = f"{label}: doc {doc!r} -> {updated!r}"
    if verdict == IRRELEVANT:
        if new != old:
            fail("irrelevant-changed", f"{where}: rows changed")
    elif verdict == DELETE_ALL:
        if new.rows:
            fail("delete-all-survivor", f"{where}: rows remain after update")
    elif verdict == PSEUDO_IRRELEVANT:
        try:
            predicted = frozenset(
                shift_tuple(ur.spans, u.replacement, row) for row in old.rows
            )
        except ValueError as exc:
            fail("shift-collision", f"{where}: {exc}")
            return
        if new.rows != predicted:
            fail("pseudo-shift-mismatch",
                 f"{where}: shifted rows disagree with re-extraction")


def _check_shift(fail, u: UpdateExpression, doc: str, updated: str,
                 old, ur, label: str) -> None:
    for row in old.rows:
        for span in row.spans:
            try:
                shifted = shift_span(ur.spans, u.replacement, span)
            except ValueError as exc:
                fail("shift-collision", f"{label}: doc {doc!r}: {exc}")
                return
            if shifted.content(updated) != span.content(doc):
                fail("shift-content",
                     f"{label}: doc {doc!r} span {span!r} content changed")


def _check_oracle(report: CampaignReport, fail, e: RegexFormula,
                  u: UpdateExpression, corpus: list[str], config: FuzzConfig,
                  rng: random.Random, label: str) -> None:
    cap_e = (config.oracle_len_two_var if len(svars(e)) >= 2
             else config.oracle_len_one_var)
    pool_e = [d for d in corpus if len(d) <= cap_e]
    pool_g = [d for d in corpus if len(d) <= config.oracle_len_one_var]
    picks = [(e, d) for d in rng.sample(pool_e, min(2, len(pool_e)))]
    picks += [(u.formula, d) for d in rng.sample(pool_g, min(1, len(pool_g)))]
    for formula, doc in picks:
        report.oracle_pairs += 1
        if evaluate_spanner(formula, doc) != oracle_spanner(formula, doc):
            fail("oracle-mismatch",
                 f"{label}: evaluator and oracle disagree on {doc!r}")
