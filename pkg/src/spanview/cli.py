"""Command-line front end.

Commands::

    spanview extract   --db DIR --extractor FILE --view NAME [--report FILE]
    spanview classify  --extractor FILE --update FILE [--db DIR] [--report FILE]
    spanview apply     --db DIR --view NAME --update FILE [--report FILE]
    spanview oracle    --db DIR --view NAME --update FILE [--report FILE]
    spanview fuzz      [--seed N] [--instances N] [--max-doc-len N]
                       [--alphabet-size N] [--report FILE]

Exit codes: 0 success (for classify: an autonomous verdict), 1 detected
disagreement (oracle diff, fuzz violations), 2 missing input file, 3 parse or
validation failure, 10 Unknown verdict, 20 refused update.

Reports are JSON; when ``--report`` is given a summary figure is rendered
next to it with a ``.png`` suffix.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .alphabet import AlphabetError
from .evaluate import NotFunctionalError
from .figures import (
    save_campaign_figure,
    save_diff_figure,
    save_extract_figure,
    save_maintenance_figure,
    save_stage_figure,
)
from .fuzz import FuzzConfig, run_campaign
from .normalize import check_functional
from .parser import FormulaSyntaxError, load_formula_file, load_update_file
from .spans import SpanTuple
from .verifier import AUTONOMOUS, REJECTED, classify
from .viewstore import (
    StoreError,
    load_db,
    load_view,
    maintain,
    materialize,
    save_db,
    save_view,
)

EXIT_OK = 0
EXIT_DIFF = 1
EXIT_MISSING = 2
EXIT_INVALID = 3
EXIT_UNKNOWN = 10
EXIT_REJECTED = 20


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail_missing(path: str | Path) -> _Failure:
    return _Failure(EXIT_MISSING, f"no such file: {path}")


def _require(path: str | Path) -> Path:
    p = Path(path)
    if not p.exists():
        raise _fail_missing(p)
    return p


def _write_report(report: dict, path: str | None, renderer) -> None:
    if path is None:
        return
    out = Path(path)
    out.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    renderer(report, out.with_suffix(".png"))


def _row_json(doc_id: str, row: SpanTuple) -> dict:
    return {
        "doc_id": doc_id,
        "spans": {v: [s.start, s.end] for v, s in zip(row.schema, row.spans)},
    }


# --- commands ----------------------------------------------------------------


def cmd_extract(args: argparse.Namespace) -> int:
    db = load_db(_require(args.db))
    formula, _ = load_formula_file(_require(args.extractor), db.alphabet)
    check = check_functional(formula)
    if not check.ok:
        print(f"extractor is not functional: {check.reason}", file=sys.stderr)
        print(f"  at {'/'.join(check.path) or '<root>'}", file=sys.stderr)
        return EXIT_INVALID
    view = materialize(db, formula, args.view)
    save_view(view, args.db)
    report = {
        "view": view.name,
        "schema": list(view.schema),
        "documents": len(db.documents),
        "rows": len(view.rows),
    }
    _write_report(report, args.report, save_extract_figure)
    print(f"view {view.name}: {report['rows']} row(s) "
          f"from {report['documents']} document(s)")
    return EXIT_OK


def _load_classify_inputs(args: argparse.Namespace):
    alphabet = None
    if args.db is not None:
        alphabet = load_db(_require(args.db)).alphabet
    formula, alphabet = load_formula_file(_require(args.extractor), alphabet)
    update = load_update_file(_require(args.update), alphabet)
    return update, formula, alphabet


def cmd_classify(args: argparse.Namespace) -> int:
    update, formula, alphabet = _load_classify_inputs(args)
    result = classify(update, formula, alphabet)
    report = result.as_report()
    _write_report(report, args.report, save_stage_figure)
    for stage in result.stages:
        state = "empty" if stage.empty else f"witness {stage.witness!r}"
        print(f"  {stage.name}: {state} ({stage.micros} us)")
    print(f"verdict: {result.verdict}")
    if result.verdict in AUTONOMOUS:
        return EXIT_OK
    return EXIT_REJECTED if result.verdict == REJECTED else EXIT_UNKNOWN


def cmd_apply(args: argparse.Namespace) -> int:
    db = load_db(_require(args.db))
    view = load_view(args.db, args.view, db)
    update = load_update_file(_require(args.update), db.alphabet)
    result = classify(update, view.formula, db.alphabet)
    try:
        new_db, new_view, report = maintain(db, view, update, result)
    except StoreError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    save_db(new_db, args.db)
    save_view(new_view, args.db)
    _write_report(report.as_report(), args.report, save_maintenance_figure)
    print(f"verdict {report.verdict}: {len(report.affected_docs)} affected "
          f"document(s), -{report.rows_deleted} ~{report.rows_shifted} "
          f"+{report.rows_inserted} row(s)")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    db = load_db(_require(args.db))
    view = load_view(args.db, args.view, db)
    update = load_update_file(_require(args.update), db.alphabet)
    result = classify(update, view.formula, db.alphabet)
    try:
        new_db, new_view, _ = maintain(db, view, update, result)
    except StoreError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    reference = materialize(new_db, view.formula, view.name)
    missing = reference.rows - new_view.rows
    unexpected = new_view.rows - reference.rows
    report = {
        "verdict": result.verdict,
        "rows_agreeing": len(reference.rows & new_view.rows),
        "rows_missing": [_row_json(d, t) for d, t in sorted(missing)],
        "rows_unexpected": [_row_json(d, t) for d, t in sorted(unexpected)],
    }
    _write_report(report, args.report, save_diff_figure)
    if missing or unexpected:
        print(f"diff: {len(missing)} missing, {len(unexpected)} unexpected "
              f"row(s) under verdict {result.verdict}")
        return EXIT_DIFF
    print(f"maintained view matches re-extraction "
          f"({report['rows_agreeing']} row(s), verdict {result.verdict})")
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace) -> int:
    config = FuzzConfig(
        instances=args.instances,
        seed=args.seed,
        alphabet_size=args.alphabet_size,
        max_doc_len=args.max_doc_len,
    )
    campaign = run_campaign(config)
    report = campaign.as_report()
    _write_report(report, args.report, save_campaign_figure)
    for verdict, count in report["verdicts"].items():
        print(f"  {verdict}: {count}")
    print(f"{report['instances']} instance(s), "
          f"{report['skipped_nonfunctional']} skipped, "
          f"{len(report['violations'])} violation(s) "
          f"in {report['elapsed_s']}s")
    for item in report["violations"][:10]:
        print(f"  violation[{item['instance']}] {item['kind']}: "
              f"{item['detail']}", file=sys.stderr)
    return EXIT_OK if campaign.ok else EXIT_DIFF


# --- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanview",
        description="Static classification of document updates against "
                    "extracted span views.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="materialize a view over a document db")
    p.add_argument("--db", required=True)
    p.add_argument("--extractor", required=True)
    p.add_argument("--view", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("classify", help="statically classify an update")
    p.add_argument("--extractor", required=True)
    p.add_argument("--update", required=True)
    p.add_argument("--db")
    p.add_argument("--report")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("apply", help="apply an update and maintain a view")
    p.add_argument("--db", required=True)
    p.add_argument("--view", required=True)
    p.add_argument("--update", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("oracle",
                       help="check maintenance against re-extraction")
    p.add_argument("--db", required=True)
    p.add_argument("--view", required=True)
    p.add_argument("--update", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fuzz", help="run a randomized soundness campaign")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--instances", type=int, default=300)
    p.add_argument("--max-doc-len", type=int, default=6)
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--report")
    p.set_defaults(func=cmd_fuzz)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MISSING
    except (FormulaSyntaxError, AlphabetError, NotFunctionalError,
            StoreError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
