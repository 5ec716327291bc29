"""Evaluating formulas over documents.

``evaluate_spanner`` runs a functional extraction formula over a document and
returns the set of rows it binds.  ``oracle_spanner`` answers the same
question by brute force: enumerate every candidate assignment of spans to
variables and test each one by recursive descent with the bindings fixed.
The two must agree everywhere; the oracle is deliberately independent of the
evaluator's binding-set bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
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
    svars,
)
from .parser import UpdateExpression
from .spans import Span, SpanRelation, SpanTuple, all_spans, spans_overlap
from .normalize import check_functional


class NotFunctionalError(ValueError):
    """Raised when evaluation is asked for a non-functional formula."""


@dataclass(frozen=True)
class Document:
    doc_id: str
    content: str

    def __len__(self) -> int:
        return len(self.content)


def _require_functional(f: RegexFormula) -> None:
    result = check_functional(f)
    if not result.ok:
        raise NotFunctionalError(result.reason or "formula is not functional")


# A binding set is a frozenset of (variable, (start, end)) pairs.  Variable
# sets of concatenated subformulas are disjoint for functional formulas, so
# merging is plain union.


def _intern(f: RegexFormula) -> RegexFormula:
    """Rebuild ``f`` so structurally equal subtrees are one shared object.

    Memo tables key on object identity; sharing lets repeated subformulas
    (digit groups, dot expansions) reuse each other's entries.
    """
    canon: dict[RegexFormula, RegexFormula] = {}

    def go(node: RegexFormula) -> RegexFormula:
        if isinstance(node, (Or, Concat)):
            node = type(node)(go(node.left), go(node.right))
        elif isinstance(node, Star):
            node = Star(go(node.inner))
        elif isinstance(node, Capture):
            node = Capture(node.name, go(node.inner))
        return canon.setdefault(node, node)

    return go(f)


def _variable_free_ids(f: RegexFormula) -> set[int]:
    """ids of subtrees without captures, for O(1) checks during evaluation."""
    out: set[int] = set()

    def walk(node: RegexFormula) -> bool:
        if isinstance(node, Capture):
            walk(node.inner)
            return False
        if isinstance(node, (Or, Concat)):
            left = walk(node.left)
            right = walk(node.right)
            vf = left and right
        elif isinstance(node, Star):
            vf = walk(node.inner)
        else:
            vf = True
        if vf:
            out.add(id(node))
        return vf

    walk(f)
    return out


def evaluate_spanner(e: RegexFormula, doc: str) -> SpanRelation:
    """All rows bound by ``e`` on ``doc``; requires ``e`` functional."""
    _require_functional(e)
    schema = svars(e)
    e = _intern(e)
    vf_ids = _variable_free_ids(e)
    n = len(doc)

    bool_memo: dict[tuple[int, int, int], bool] = {}
    bind_memo: dict[tuple[int, int, int], frozenset] = {}

    def matches_bool(node: RegexFormula, i: int, j: int) -> bool:
        key = (id(node), i, j)
        hit = bool_memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, EmptyLang):
            out = False
        elif isinstance(node, Epsilon):
            out = i == j
        elif isinstance(node, Sym):
            out = j == i + 1 and doc[i - 1] == node.char
        elif isinstance(node, Or):
            out = matches_bool(node.left, i, j) or matches_bool(node.right, i, j)
        elif isinstance(node, Concat):
            out = any(
                matches_bool(node.left, i, k) and matches_bool(node.right, k, j)
                for k in range(i, j + 1)
            )
        elif isinstance(node, Star):
            out = i == j or any(
                matches_bool(node.inner, i, k) and matches_bool(node, k, j)
                for k in range(i + 1, j + 1)
            )
        else:  # Capture inside a variable-free check cannot happen
            raise TypeError(f"unexpected node {node!r}")
        bool_memo[key] = out
        return out

    empty_binding = frozenset()
    no_match: frozenset = frozenset()  # sentinel container of binding sets

    def matches(node: RegexFormula, i: int, j: int) -> frozenset:
        """Set of binding sets with which ``node`` matches doc[i, j>."""
        if id(node) in vf_ids:
            return frozenset([empty_binding]) if matches_bool(node, i, j) else no_match
        key = (id(node), i, j)
        hit = bind_memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Capture):
            out = frozenset(
                b | {(node.name, (i, j))} for b in matches(node.inner, i, j)
            )
        elif isinstance(node, Or):
            out = matches(node.left, i, j) | matches(node.right, i, j)
        elif isinstance(node, Concat):
            acc = set()
            for k in range(i, j + 1):
                left = matches(node.left, i, k)
                if not left:
                    continue
                right = matches(node.right, k, j)
                for bl in left:
                    for br in right:
                        acc.add(bl | br)
            out = frozenset(acc)
        else:  # Star over variables is rejected by the functional check
            raise TypeError(f"unexpected node {node!r}")
        bind_memo[key] = out
        return out

    rows = set()
    for binding in matches(e, 1, n + 1):
        by_var = dict(binding)
        rows.add(
            SpanTuple(schema, tuple(Span(*by_var[v]) for v in schema))
        )
    return SpanRelation(schema, frozenset(rows))


def _matches_fixed(node: RegexFormula, i: int, j: int, bound: dict[str, tuple[int, int]],
                   doc: str, memo: dict) -> bool:
    """Recursive descent with every capture's span fixed in advance."""
    key = (id(node), i, j)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(node, EmptyLang):
        out = False
    elif isinstance(node, Epsilon):
        out = i == j
    elif isinstance(node, Sym):
        out = j == i + 1 and doc[i - 1] == node.char
    elif isinstance(node, Capture):
        out = bound[node.name] == (i, j) and _matches_fixed(
            node.inner, i, j, bound, doc, memo
        )
    elif isinstance(node, Or):
        out = _matches_fixed(node.left, i, j, bound, doc, memo) or _matches_fixed(
            node.right, i, j, bound, doc, memo
        )
    elif isinstance(node, Concat):
        out = any(
            _matches_fixed(node.left, i, k, bound, doc, memo)
            and _matches_fixed(node.right, k, j, bound, doc, memo)
            for k in range(i, j + 1)
        )
    elif isinstance(node, Star):
        out = i == j or any(
            _matches_fixed(node.inner, i, k, bound, doc, memo)
            and _matches_fixed(node, k, j, bound, doc, memo)
            for k in range(i + 1, j + 1)
        )
    else:
        raise TypeError(f"unexpected node {node!r}")
    memo[key] = out
    return out


def oracle_spanner(e: RegexFormula, doc: str) -> SpanRelation:
    """Brute-force reference: try every assignment of spans to variables."""
    _require_functional(e)
    schema = svars(e)
    candidates = [(s.start, s.end) for s in all_spans(len(doc))]
    rows = set()
    for combo in product(candidates, repeat=len(schema)):
        bound = dict(zip(schema, combo))
        if _matches_fixed(e, 1, len(doc) + 1, bound, doc, {}):
            rows.add(SpanTuple(schema, tuple(Span(*bound[v]) for v in schema)))
    return SpanRelation(schema, frozenset(rows))


# --- update expressions -----------------------------------------------------


class OverlappingUpdateError(ValueError):
    """The update marks overlapping spans on this document; applying it would
    be ambiguous, so it is refused."""

    def __init__(self, doc_id: str, pair: tuple[Span, Span]):
        super().__init__(
            f"update spans {pair[0]!r} and {pair[1]!r} overlap on document {doc_id!r}"
        )
        self.pair = pair


@dataclass(frozen=True)
class UpdateRelation:
    """Spans an update marks on one document, plus the first overlapping pair
    among them, if any (such updates are refused at apply time)."""

    spans: frozenset[Span]
    overlap: tuple[Span, Span] | None


def find_overlapping_pair(spans: frozenset[Span]) -> tuple[Span, Span] | None:
    ordered = sorted(spans)
    for idx, a in enumerate(ordered):
        for b in ordered[idx + 1 :]:
            if spans_overlap(a, b):
                return (a, b)
    return None


def evaluate_update_relation(u: UpdateExpression, doc: str) -> UpdateRelation:
    """The unary relation of spans ``u`` marks on ``doc``."""
    relation = evaluate_spanner(u.formula, doc)
    var = u.variable
    spans = frozenset(row[var] for row in relation.rows)
    return UpdateRelation(spans, find_overlapping_pair(spans))


def apply_update(u: UpdateExpression, doc: Document,
                 alphabet: Alphabet | None = None) -> tuple[Document, UpdateRelation]:
    """Replace every marked span of ``doc`` simultaneously.

    Returns the updated document together with the relation that was applied.
    Raises OverlappingUpdateError when the marked spans overlap.
    """
    if alphabet is not None:
        alphabet.check_text(u.replacement, what="replacement")
    relation = evaluate_update_relation(u, doc.content)
    if relation.overlap is not None:
        raise OverlappingUpdateError(doc.doc_id, relation.overlap)
    text = doc.content
    for span in sorted(relation.spans, key=lambda s: s.start, reverse=True):
        text = text[: span.start - 1] + u.replacement + text[span.end - 1 :]
    return Document(doc.doc_id, text), relation
