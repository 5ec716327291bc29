"""Figure rendering for command-line reports.

Each helper takes the JSON-ready report dict the corresponding command writes
and renders a small summary chart next to it.  Rendering is headless; the Agg
backend never needs a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_BAR_COLOR = "#4878a8"
_WARN_COLOR = "#b0413e"


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def save_stage_figure(report: dict, path: str | Path) -> Path:
    """Emptiness-check running times for one classification, one bar per
    stage, annotated with the verdict."""
    stages = report["stages"]
    names = [s["name"] for s in stages]
    micros = [s["micros"] for s in stages]
    colors = [_BAR_COLOR if s["empty"] else _WARN_COLOR for s in stages]
    fig, ax = plt.subplots(figsize=(7, 0.6 * len(stages) + 1.6))
    ax.barh(range(len(stages)), micros, color=colors)
    ax.set_yticks(range(len(stages)), names)
    ax.invert_yaxis()
    ax.set_xlabel("microseconds")
    ax.set_title(f"verdict: {report['verdict']}")
    return _finish(fig, path)


def save_maintenance_figure(report: dict, path: str | Path) -> Path:
    """Row movement caused by one maintenance step."""
    keys = ("rows_deleted", "rows_shifted", "rows_inserted")
    values = [report[k] for k in keys]
    labels = [k.removeprefix("rows_") for k in keys]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(labels, values, color=_BAR_COLOR)
    ax.set_ylabel("rows")
    ax.set_title(
        f"{report['verdict']}: {len(report['affected_docs'])} affected document(s)"
    )
    return _finish(fig, path)


def save_diff_figure(report: dict, path: str | Path) -> Path:
    """Maintained view versus re-extraction: agreeing and disagreeing rows."""
    values = [report["rows_agreeing"], len(report["rows_missing"]),
              len(report["rows_unexpected"])]
    labels = ["agreeing", "missing", "unexpected"]
    colors = [_BAR_COLOR, _WARN_COLOR, _WARN_COLOR]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(labels, values, color=colors)
    ax.set_ylabel("rows")
    verdict = report.get("verdict", "?")
    ax.set_title(f"maintained ({verdict}) vs re-extracted")
    return _finish(fig, path)


def save_extract_figure(report: dict, path: str | Path) -> Path:
    """Document and row counts for one materialized view."""
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(["documents", "rows"], [report["documents"], report["rows"]],
           color=_BAR_COLOR)
    ax.set_title(f"view {report['view']}")
    return _finish(fig, path)


def save_campaign_figure(report: dict, path: str | Path) -> Path:
    """Verdict distribution of a fuzz campaign."""
    verdicts = report["verdicts"]
    labels = list(verdicts)
    values = [verdicts[k] for k in labels]
    fig, ax = plt.subplots(figsize=(7, 3.6))
    bad = len(report["violations"])
    ax.bar(range(len(labels)), values, color=_BAR_COLOR)
    ax.set_xticks(range(len(labels)), labels, rotation=20, ha="right")
    ax.set_ylabel("instances")
    ax.set_title(
        f"{report['instances']} instances, seed {report['seed']}, "
        f"{bad} violation(s)"
    )
    return _finish(fig, path)
