"""Spans, span tuples, span relations, and offset shifting.

A span [start, end> addresses the substring of a document from 1-based offset
``start`` up to but not including ``end``; ``start == end`` is the empty span
at that offset.  Offsets range over 1 .. len(doc) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass


class SpanError(ValueError):
    """Raised for ill-formed spans or violated shift preconditions."""


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 1 or self.end < self.start:
            raise SpanError(f"ill-formed span [{self.start},{self.end}>")

    @property
    def empty(self) -> bool:
        return self.start == self.end

    def __len__(self) -> int:
        return self.end - self.start

    def content(self, doc: str) -> str:
        if self.end > len(doc) + 1:
            raise SpanError(f"span [{self.start},{self.end}> exceeds document length {len(doc)}")
        return doc[self.start - 1 : self.end - 1]

    def __repr__(self) -> str:
        return f"[{self.start},{self.end}>"


def spans_overlap(s1: Span, s2: Span) -> bool:
    """True when the spans share an offset or one empty span falls inside the
    other span's extent.  Identical nonempty spans overlap; identical empty
    spans do not; distinct empty spans never do."""
    return (s1.start <= s2.start < s1.end) or (s2.start <= s1.start < s2.end)


def all_spans(doc_len: int) -> list[Span]:
    """Every span over a document of the given length, in sorted order."""
    return [
        Span(i, j) for i in range(1, doc_len + 2) for j in range(i, doc_len + 2)
    ]


@dataclass(frozen=True)
class SpanTuple:
    """One extracted row: a span per variable of the extractor's schema."""

    schema: tuple[str, ...]
    spans: tuple[Span, ...]

    def __post_init__(self) -> None:
        if len(self.schema) != len(self.spans):
            raise SpanError("schema and span count differ")

    def __getitem__(self, var: str) -> Span:
        return self.spans[self.schema.index(var)]

    def replace_spans(self, spans: tuple[Span, ...]) -> "SpanTuple":
        return SpanTuple(self.schema, spans)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}={s!r}" for v, s in zip(self.schema, self.spans))
        return f"({inner})"


@dataclass(frozen=True)
class SpanRelation:
    """A set of rows sharing one schema.  Set semantics: no duplicates, no order."""

    schema: tuple[str, ...]
    rows: frozenset[SpanTuple]

    def __post_init__(self) -> None:
        for row in self.rows:
            if row.schema != self.schema:
                raise SpanError(f"row schema {row.schema} differs from {self.schema}")

    def __len__(self) -> int:
        return len(self.rows)

    def sorted_rows(self) -> list[SpanTuple]:
        return sorted(self.rows, key=lambda r: r.spans)


def shift_span(update_spans: frozenset[Span], replacement: str, span: Span) -> Span:
    """Where ``span`` lands after every update span is replaced simultaneously.

    Precondition: no update span overlaps ``span`` (the span's content is not
    touched by the update), and the update spans are mutually disjoint.  The
    shifted span addresses the same content in the updated document.

    An update span strictly before ``span`` moves it by the length change of
    that replacement.  The one same-offset case the precondition admits is an
    empty update span at the start of an empty ``span``; text inserted there
    lands before the boundary the empty span addresses, so it counts too.
    """
    for u in update_spans:
        if spans_overlap(u, span):
            raise SpanError(f"update span {u!r} overlaps {span!r}; shift undefined")
    delta = 0
    for u in update_spans:
        if u.start <= span.start:
            delta += len(u) - len(replacement)
    return Span(span.start - delta, span.end - delta)


def shift_tuple(update_spans: frozenset[Span], replacement: str, row: SpanTuple) -> SpanTuple:
    return row.replace_spans(
        tuple(shift_span(update_spans, replacement, s) for s in row.spans)
    )
