"""Document database with materialized extracted views.

A database is a set of documents over one declared alphabet; a view is the
extracted relation of one formula over all documents, stored with a doc-id
column.  Maintenance applies a classified update to every document and
repairs the view according to the verdict, falling back to re-extraction
only for Unknown.  All operations are pure: failures raise before any state
is replaced, so callers keep their original db/view on error.

On-disk layout under a root directory:

* ``alphabet.json``     {"symbols": [...]}
* ``docs/<id>.txt``     document content, exactly as stored
* ``views/<name>.csv``  header ``doc_id,<var>.start,<var>.end,...``
* ``views/<name>.meta.json``  extractor formula source + schema
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .alphabet import Alphabet, load_alphabet, save_alphabet
from .ast import RegexFormula, render, svars
from .evaluate import Document, evaluate_spanner, apply_update
from .parser import UpdateExpression, parse_formula
from .spans import Span, SpanTuple, shift_tuple
from .verifier import (
    DELETE_ALL,
    IRRELEVANT,
    PSEUDO_IRRELEVANT,
    REJECTED,
    UNKNOWN,
    UpdateClass,
)

_SAFE_ID = re.compile(r"[A-Za-z0-9._-]+\Z")


class StoreError(ValueError):
    pass


@dataclass(frozen=True)
class DocumentDb:
    alphabet: Alphabet
    documents: dict[str, Document]

    def __post_init__(self) -> None:
        for doc_id, doc in self.documents.items():
            if doc_id != doc.doc_id:
                raise StoreError(f"document key {doc_id!r} != id {doc.doc_id!r}")
            self.alphabet.check_text(doc.content, what=f"document {doc_id!r}")

    def ids(self) -> list[str]:
        return sorted(self.documents)


Row = tuple[str, SpanTuple]


@dataclass(frozen=True)
class MaterializedView:
    name: str
    formula: RegexFormula
    rows: frozenset[Row]

    @property
    def schema(self) -> tuple[str, ...]:
        return svars(self.formula)

    def rows_for(self, doc_id: str) -> frozenset[SpanTuple]:
        return frozenset(t for d, t in self.rows if d == doc_id)

    def sorted_rows(self) -> list[Row]:
        return sorted(self.rows, key=lambda r: (r[0], r[1].spans))


def materialize(db: DocumentDb, e: RegexFormula, name: str) -> MaterializedView:
    rows: set[Row] = set()
    for doc_id in db.ids():
        relation = evaluate_spanner(e, db.documents[doc_id].content)
        rows.update((doc_id, t) for t in relation.rows)
    return MaterializedView(name, e, frozenset(rows))


def is_consistent(db: DocumentDb, view: MaterializedView) -> bool:
    """Does the view equal a fresh extraction over every document?"""
    known = set(db.documents)
    if any(d not in known for d, _ in view.rows):
        return False
    for doc_id, doc in db.documents.items():
        if view.rows_for(doc_id) != evaluate_spanner(view.formula, doc.content).rows:
            return False
    return True


@dataclass(frozen=True)
class MaintenanceReport:
    verdict: str
    affected_docs: tuple[str, ...]
    rows_deleted: int
    rows_shifted: int
    rows_inserted: int
    reextracted_docs: tuple[str, ...]

    def as_report(self) -> dict:
        return {
            "verdict": self.verdict,
            "affected_docs": list(self.affected_docs),
            "rows_deleted": self.rows_deleted,
            "rows_shifted": self.rows_shifted,
            "rows_inserted": self.rows_inserted,
            "reextracted_docs": list(self.reextracted_docs),
        }


def maintain(
    db: DocumentDb,
    view: MaterializedView,
    u: UpdateExpression,
    c: UpdateClass,
) -> tuple[DocumentDb, MaterializedView, MaintenanceReport]:
    """Apply the update to all documents and repair the view per verdict.

    The caller supplies the verdict for the view's own formula; a Rejected
    verdict refuses maintenance outright.  Any overlap discovered while
    applying raises, leaving the inputs untouched.
    """
    if c.verdict == REJECTED:
        raise StoreError(
            "refusing maintenance: the update can mark overlapping spans"
        )
    if c.verdict not in (IRRELEVANT, DELETE_ALL, PSEUDO_IRRELEVANT, UNKNOWN):
        raise StoreError(f"unknown verdict {c.verdict!r}")

    new_docs: dict[str, Document] = {}
    relations: dict[str, frozenset[Span]] = {}
    affected: list[str] = []
    for doc_id in db.ids():
        doc = db.documents[doc_id]
        updated, relation = apply_update(u, doc, db.alphabet)
        new_docs[doc_id] = updated
        relations[doc_id] = relation.spans
        if relation.spans:
            affected.append(doc_id)

    deleted = shifted = inserted = 0
    reextracted: list[str] = []
    rows: set[Row] = set()
    affected_set = set(affected)
    for doc_id, t in view.rows:
        if doc_id not in affected_set:
            rows.add((doc_id, t))
            continue
        if c.verdict == IRRELEVANT:
            rows.add((doc_id, t))
        elif c.verdict == DELETE_ALL:
            deleted += 1
        elif c.verdict == PSEUDO_IRRELEVANT:
            rows.add((doc_id, shift_tuple(relations[doc_id], u.replacement, t)))
            shifted += 1
        # Unknown rows of affected docs are replaced below.
    if c.verdict == UNKNOWN:
        for doc_id in affected:
            old = view.rows_for(doc_id)
            new = evaluate_spanner(view.formula, new_docs[doc_id].content).rows
            rows.update((doc_id, t) for t in new)
            deleted += len(old - new)
            inserted += len(new - old)
            reextracted.append(doc_id)

    report = MaintenanceReport(
        c.verdict, tuple(affected), deleted, shifted, inserted, tuple(reextracted)
    )
    return (
        DocumentDb(db.alphabet, new_docs),
        MaterializedView(view.name, view.formula, frozenset(rows)),
        report,
    )


# --- persistence ------------------------------------------------------------


def _check_id(doc_id: str) -> str:
    if not _SAFE_ID.match(doc_id):
        raise StoreError(
            f"document id {doc_id!r} (allowed: letters, digits, '.', '_', '-')"
        )
    return doc_id


def save_db(db: DocumentDb, root: str | Path) -> None:
    root = Path(root)
    (root / "docs").mkdir(parents=True, exist_ok=True)
    save_alphabet(db.alphabet, root / "alphabet.json")
    for doc_id, doc in db.documents.items():
        (root / "docs" / f"{_check_id(doc_id)}.txt").write_text(
            doc.content, encoding="utf-8"
        )


def load_db(root: str | Path) -> DocumentDb:
    root = Path(root)
    alphabet = load_alphabet(root / "alphabet.json")
    documents: dict[str, Document] = {}
    docs_dir = root / "docs"
    if docs_dir.is_dir():
        for path in sorted(docs_dir.glob("*.txt")):
            documents[path.stem] = Document(path.stem, path.read_text(encoding="utf-8"))
    return DocumentDb(alphabet, documents)


def _view_paths(root: str | Path, name: str) -> tuple[Path, Path]:
    base = Path(root) / "views"
    return base / f"{name}.csv", base / f"{name}.meta.json"


def save_view(view: MaterializedView, root: str | Path) -> None:
    csv_path, meta_path = _view_paths(root, _check_id(view.name))
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    schema = view.schema
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["doc_id"] + [f"{v}.{side}" for v in schema for side in ("start", "end")]
        )
        for doc_id, t in view.sorted_rows():
            row: list = [doc_id]
            for v in schema:
                row += [t[v].start, t[v].end]
            writer.writerow(row)
    meta_path.write_text(
        json.dumps({"extractor": render(view.formula), "schema": list(schema)},
                   indent=2) + "\n",
        encoding="utf-8",
    )


def load_view(root: str | Path, name: str, db: DocumentDb) -> MaterializedView:
    """Load and validate a view: ids must exist, offsets must fit their doc."""
    csv_path, meta_path = _view_paths(root, name)
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    formula = parse_formula(meta["extractor"], db.alphabet)
    schema = svars(formula)
    if list(schema) != list(meta.get("schema", [])):
        raise StoreError(f"view {name!r}: schema does not match its formula")
    expected_header = ["doc_id"] + [
        f"{v}.{side}" for v in schema for side in ("start", "end")
    ]
    rows: set[Row] = set()
    with csv_path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected_header:
            raise StoreError(f"view {name!r}: bad header {header!r}")
        for line in reader:
            if len(line) != len(expected_header):
                raise StoreError(f"view {name!r}: bad row {line!r}")
            doc_id = line[0]
            doc = db.documents.get(doc_id)
            if doc is None:
                raise StoreError(f"view {name!r}: unknown document {doc_id!r}")
            spans = []
            for k in range(len(schema)):
                start, end = int(line[1 + 2 * k]), int(line[2 + 2 * k])
                if not (1 <= start <= end <= len(doc.content) + 1):
                    raise StoreError(
                        f"view {name!r}: span [{start},{end}> out of range for"
                        f" document {doc_id!r}"
                    )
                spans.append(Span(start, end))
            rows.add((doc_id, SpanTuple(schema, tuple(spans))))
    return MaterializedView(name, formula, frozenset(rows))
