"""End-to-end runs of the command-line front end."""

import json

import pytest

from spanview import Alphabet, Document, DocumentDb, save_db
from spanview.cli import main


@pytest.fixture
def db_root(tmp_path):
    root = tmp_path / "db"
    db = DocumentDb(
        Alphabet(("a", "c")),
        {
            "d1": Document("d1", "aacac"),
            "d2": Document("d2", "aaa"),
            "d3": Document("d3", "ccc"),
        },
    )
    save_db(db, root)
    return root


def _write_extractor(tmp_path, text, header=None):
    path = tmp_path / "extractor.txt"
    body = (header + "\n" if header else "") + text + "\n"
    path.write_text(body)
    return path


def _write_update(tmp_path, formula, replacement):
    path = tmp_path / "update.json"
    path.write_text(json.dumps({"formula": formula, "replacement": replacement}))
    return path


def _extract(db_root, extractor, view="v", report=None):
    argv = ["extract", "--db", str(db_root), "--extractor", str(extractor),
            "--view", view]
    if report:
        argv += ["--report", str(report)]
    return main(argv)


def test_extract_writes_view_and_report(db_root, tmp_path, capsys):
    extractor = _write_extractor(tmp_path, ".* X{aa} .*")
    report = tmp_path / "extract.json"
    assert _extract(db_root, extractor, report=report) == 0
    out = capsys.readouterr().out
    assert "view v" in out

    csv_lines = (db_root / "views" / "v.csv").read_text().splitlines()
    assert csv_lines[0] == "doc_id,X.start,X.end"
    assert "d1,1,3" in csv_lines
    assert "d2,1,3" in csv_lines and "d2,2,4" in csv_lines
    assert not any(line.startswith("d3") for line in csv_lines[1:])

    data = json.loads(report.read_text())
    assert data["rows"] == 3 and data["documents"] == 3
    assert (tmp_path / "extract.png").exists()


def test_extract_rejects_non_functional(db_root, tmp_path, capsys):
    extractor = _write_extractor(tmp_path, "X{a} | c")
    assert _extract(db_root, extractor) == 3
    err = capsys.readouterr().err
    assert "not functional" in err and "at " in err


def test_extract_missing_db(tmp_path):
    extractor = _write_extractor(tmp_path, ".* X{aa} .*")
    assert main(["extract", "--db", str(tmp_path / "nope"),
                 "--extractor", str(extractor), "--view", "v"]) == 2


def test_extract_missing_extractor(db_root, tmp_path):
    assert _extract(db_root, tmp_path / "absent.txt") == 2


def test_extract_syntax_error(db_root, tmp_path):
    extractor = _write_extractor(tmp_path, ".* X{aa .*")
    assert _extract(db_root, extractor) == 3


def test_classify_exit_codes(db_root, tmp_path, capsys):
    scenarios = (
        ("aa .*", "c .* x{c}", "a", 0, "Irrelevant"),
        (".* X{aa} .*", "aa .* x{c}", "cc", 0, "PseudoIrrelevant"),
        (".* X{aa} .*", ".* x{c} .*", "cc", 10, "Unknown"),
        (".* X{aa} .*", ".* x{c .* c} .*", "a", 20,
         "RejectedOverlappingUpdate"),
    )
    for etext, formula, replacement, code, verdict in scenarios:
        e = _write_extractor(tmp_path, etext)
        u = _write_update(tmp_path, formula, replacement)
        assert main(["classify", "--extractor", str(e), "--update", str(u),
                     "--db", str(db_root)]) == code
        out = capsys.readouterr().out
        assert f"verdict: {verdict}" in out
        assert "self-overlap" in out


def test_classify_alphabet_from_file_header(tmp_path):
    e = _write_extractor(tmp_path, ".* X{aa} .*", header="alphabet: ac")
    u = _write_update(tmp_path, "aa .* x{c}", "cc")
    assert main(["classify", "--extractor", str(e), "--update", str(u)]) == 0


def test_classify_without_alphabet_fails(tmp_path):
    e = _write_extractor(tmp_path, ".* X{aa} .*")
    u = _write_update(tmp_path, "aa .* x{c}", "cc")
    assert main(["classify", "--extractor", str(e), "--update", str(u)]) == 3


def test_classify_report_figure(db_root, tmp_path):
    e = _write_extractor(tmp_path, ".* X{aa} .*")
    u = _write_update(tmp_path, "aa .* x{c}", "cc")
    report = tmp_path / "cls.json"
    assert main(["classify", "--extractor", str(e), "--update", str(u),
                 "--db", str(db_root), "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["verdict"] == "PseudoIrrelevant"
    assert (tmp_path / "cls.png").exists()


def test_apply_pseudo_irrelevant_end_to_end(db_root, tmp_path, capsys):
    e = _write_extractor(tmp_path, ".* X{aa} .*")
    assert _extract(db_root, e) == 0
    capsys.readouterr()
    u = _write_update(tmp_path, "aa .* x{c}", "cc")
    report = tmp_path / "apply.json"
    assert main(["apply", "--db", str(db_root), "--view", "v",
                 "--update", str(u), "--report", str(report)]) == 0
    out = capsys.readouterr().out
    assert "verdict PseudoIrrelevant" in out

    assert (db_root / "docs" / "d1.txt").read_text() == "aacacc"
    assert (db_root / "docs" / "d2.txt").read_text() == "aaa"
    data = json.loads(report.read_text())
    assert data["verdict"] == "PseudoIrrelevant"
    assert data["affected_docs"] == ["d1"]
    assert (tmp_path / "apply.png").exists()

    # The persisted view still matches a fresh extraction.
    assert main(["oracle", "--db", str(db_root), "--view", "v",
                 "--update", str(_write_update(tmp_path, "c .* x{c}", "a"))]
                ) in (0,)


def test_apply_refuses_overlapping_update(db_root, tmp_path, capsys):
    e = _write_extractor(tmp_path, ".* X{aa} .*")
    assert _extract(db_root, e) == 0
    u = _write_update(tmp_path, ".* x{c .* c} .*", "a")
    assert main(["apply", "--db", str(db_root), "--view", "v",
                 "--update", str(u)]) == 20
    assert "refused" in capsys.readouterr().err
    # State is untouched.
    assert (db_root / "docs" / "d1.txt").read_text() == "aacac"


def test_oracle_agreement_and_diff(db_root, tmp_path, capsys):
    e = _write_extractor(tmp_path, ".* X{aa} .*")
    assert _extract(db_root, e) == 0
    u = _write_update(tmp_path, "aa .* x{c}", "cc")
    report = tmp_path / "oracle.json"
    assert main(["oracle", "--db", str(db_root), "--view", "v",
                 "--update", str(u), "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["rows_missing"] == [] and data["rows_unexpected"] == []
    assert data["rows_agreeing"] == 3
    assert (tmp_path / "oracle.png").exists()

    # Corrupt the stored view: the diff must be detected and reported.
    csv_path = db_root / "views" / "v.csv"
    lines = csv_path.read_text().splitlines()
    csv_path.write_text("\n".join(lines[:-1]) + "\n")
    assert main(["oracle", "--db", str(db_root), "--view", "v",
                 "--update", str(_write_update(tmp_path, "c .* x{c}", "a")),
                 "--report", str(report)]) == 1
    out = capsys.readouterr().out
    assert "diff:" in out
    data = json.loads(report.read_text())
    assert data["rows_missing"] != []


def test_fuzz_command(tmp_path, capsys):
    report = tmp_path / "fuzz.json"
    assert main(["fuzz", "--seed", "5", "--instances", "15",
                 "--report", str(report)]) == 0
    out = capsys.readouterr().out
    assert "15 instance(s)" in out
    data = json.loads(report.read_text())
    assert data["violations"] == []
    assert (tmp_path / "fuzz.png").exists()


def test_fuzz_command_rejects_bad_config(capsys):
    assert main(["fuzz", "--alphabet-size", "9", "--instances", "1"]) == 3
