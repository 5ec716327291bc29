"""Product machines over capture-annotated automata.

Three families, all reduced to language emptiness:

* self-overlap: two runs of the same update formula marking spans that are
  different AND overlapping (certifies the update never yields overlapping
  replacement targets when empty);
* cross-overlap: a run of an update-shaped formula against a run of an
  extractor, marking spans that overlap (used for the update itself, its
  replacement proxy, and the anywhere-replacement guard);
* profile stability: the two-document concatenation recognizer whose
  emptiness certifies that membership in each variable-profile group is
  preserved from original to updated documents.

Overlap follows the span predicate: a shared consumed position, or an empty
span collapsing exactly at a position the other span covers.  Two empty
spans at the same offset are identical, never overlapping; flags on product
states are monotone along every run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .alphabet import Alphabet
from .ast import RegexFormula, boolean_projection
from .normalize import (
    NormalizedFormula,
    anywhere_proxy,
    normalize,
    proxy,
    updated_context_bounds,
)
from .nfa import (
    RegionNfa,
    Transition,
    complement,
    compile_disjunct,
    compile_normalized,
    concat,
    intersect,
    is_empty,
    union_all,
)
from .parser import UpdateExpression
from .profiles import ProfileGroup


class PreconditionError(ValueError):
    """A construction was invoked without its certified prerequisites."""


@dataclass(frozen=True)
class _Pair:
    q1: int
    q2: int
    differ: bool
    overlap: bool


def _involvement(t: Transition) -> tuple[bool, bool]:
    """(covers, collapses): the consumed position lies inside a marked span /
    an empty marked span sits exactly at the consumed position."""
    return bool(t.inside), bool(t.crosses)


def build_self_overlap(u: UpdateExpression, alphabet: Alphabet) -> RegionNfa:
    """Machine accepting documents on which the update formula marks two
    different, overlapping spans."""
    m = compile_normalized(normalize(u.formula), alphabet)
    states: dict[tuple[int, int, bool, bool], int] = {}
    transitions: list[Transition] = []
    queue: deque[tuple[int, int, bool, bool]] = deque()

    def sid(key: tuple[int, int, bool, bool]) -> int:
        if key not in states:
            states[key] = len(states)
            queue.append(key)
        return states[key]

    for q1 in m.initial:
        for q2 in m.initial:
            sid((q1, q2, False, False))
    initial = frozenset(states.values())
    while queue:
        key = queue.popleft()
        q1, q2, differ, overlap = key
        src = states[key]
        for ch in alphabet:
            for t1 in m.out(q1, ch):
                a1, c1 = _involvement(t1)
                for t2 in m.out(q2, ch):
                    a2, c2 = _involvement(t2)
                    d2 = differ or (a1 != a2) or (c1 != c2)
                    o2 = overlap or (a1 and a2) or (a1 and c2) or (a2 and c1)
                    dst = sid((t1.dst, t2.dst, d2, o2))
                    transitions.append(Transition(src, ch, dst))
    final = frozenset(
        i
        for (q1, q2, differ, overlap), i in states.items()
        if q1 in m.final and q2 in m.final and differ and overlap
    )
    labels = {
        i: f"({q1},{q2},{'T' if d else 'F'},{'T' if o else 'F'})"
        for (q1, q2, d, o), i in states.items()
    }
    return RegionNfa(alphabet, max(len(states), 1), transitions, initial, final, labels)


def build_cross_overlap(
    u: NormalizedFormula, e: NormalizedFormula, alphabet: Alphabet
) -> RegionNfa:
    """Machine accepting documents where a span marked by ``u`` overlaps a
    span marked by ``e`` (any of its variables) in some pair of matches."""
    mu = compile_normalized(u, alphabet)
    me = compile_normalized(e, alphabet)
    states: dict[tuple[int, int, bool], int] = {}
    transitions: list[Transition] = []
    queue: deque[tuple[int, int, bool]] = deque()

    def sid(key: tuple[int, int, bool]) -> int:
        if key not in states:
            states[key] = len(states)
            queue.append(key)
        return states[key]

    for qu in mu.initial:
        for qe in me.initial:
            sid((qu, qe, False))
    initial = frozenset(states.values())
    while queue:
        key = queue.popleft()
        qu, qe, overlap = key
        src = states[key]
        for ch in alphabet:
            for tu in mu.out(qu, ch):
                au, cu = _involvement(tu)
                for te in me.out(qe, ch):
                    ae, ce = _involvement(te)
                    o2 = overlap or (au and ae) or (au and ce) or (cu and ae)
                    dst = sid((tu.dst, te.dst, o2))
                    transitions.append(Transition(src, ch, dst))
    final = frozenset(
        i
        for (qu, qe, overlap), i in states.items()
        if qu in mu.final and qe in me.final and overlap
    )
    labels = {
        i: f"({qu},{qe},{'T' if o else 'F'})" for (qu, qe, o), i in states.items()
    }
    return RegionNfa(alphabet, max(len(states), 1), transitions, initial, final, labels)


def build_replacement_overlap(u: UpdateExpression, e: RegexFormula,
                              alphabet: Alphabet) -> RegionNfa:
    """Cross-overlap of the anywhere-replacement formula against the
    extractor: empty iff no occurrence of the replacement string can overlap
    an extracted span on any document.  This covers replacement blocks in
    multi-site updated documents, which the per-disjunct proxy does not."""
    return build_cross_overlap(
        anywhere_proxy(u, alphabet), normalize(e), alphabet
    )


def _updated_image(u: UpdateExpression, alphabet: Alphabet) -> RegionNfa:
    """Over-approximation of all updated documents: starts with some
    disjunct's left context followed by the replacement, and ends with the
    replacement followed by some disjunct's right context."""
    firsts, lasts = updated_context_bounds(u, alphabet)
    return intersect(
        compile_disjunct(boolean_projection(firsts), alphabet),
        compile_disjunct(boolean_projection(lasts), alphabet),
    )


def build_pseudo_recognizer(
    u: UpdateExpression,
    e: NormalizedFormula,
    groups: list[ProfileGroup],
    alphabet: Alphabet,
    image: str = "proxy",
    certified: bool = False,
) -> RegionNfa:
    """Profile-stability recognizer: accepts concatenations D1·D2 where D1
    is matched by an update disjunct, D2 lies in the updated-document-side
    language, and exactly one of them belongs to some profile group.

    ``image`` selects the updated-document side: "proxy" pairs each update
    disjunct with its single-replacement proxy; "bounds" uses the
    context/replacement envelope that also covers multi-site updates.

    Emptiness (with the overlap machines also empty) certifies that spans
    shift uniformly under the update.
    """
    if image not in ("proxy", "bounds"):
        raise ValueError(f"unknown image side {image!r}")
    if not certified:
        w = is_empty(build_self_overlap(u, alphabet))
        if w is not None:
            raise PreconditionError(
                f"update can mark overlapping spans, e.g. on {w.text!r}"
            )
        for machine, what in (
            (build_cross_overlap(normalize(u.formula), e, alphabet), "update"),
            (build_cross_overlap(proxy(u), e, alphabet), "proxy"),
        ):
            w = is_empty(machine)
            if w is not None:
                raise PreconditionError(
                    f"{what} spans can overlap extracted spans, e.g. on {w.text!r}"
                )

    norm_u = normalize(u.formula)
    norm_v = proxy(u)
    bounds_machine = _updated_image(u, alphabet) if image == "bounds" else None
    terms: list[RegionNfa] = []
    for i, group in enumerate(groups):
        m_phi = compile_disjunct(
            boolean_projection(group.union_formula()), alphabet
        )
        m_phi_bar = complement(m_phi)
        for j, d in enumerate(norm_u.disjuncts):
            m_doc = compile_disjunct(boolean_projection(d), alphabet)
            if bounds_machine is not None:
                m_img = bounds_machine
            else:
                m_img = compile_disjunct(
                    boolean_projection(norm_v.disjuncts[j]), alphabet
                )
            terms.append(
                concat(intersect(m_doc, m_phi), intersect(m_img, m_phi_bar))
            )
            terms.append(
                concat(intersect(m_doc, m_phi_bar), intersect(m_img, m_phi))
            )
    return union_all(terms, alphabet)
