"""Static classification of updates against an extractor.

The pipeline certifies one of five verdicts:

* RejectedOverlappingUpdate: the update can mark overlapping spans, so
  applying it is ill-defined on some document;
* Irrelevant: no document's extracted rows change;
* DeleteAll: affected documents (those the update formula matches) lose all
  their rows; other documents keep theirs;
* PseudoIrrelevant: every row survives with its spans shifted by the
  replacement size delta of the update sites before it;
* Unknown: none of the sufficient conditions fired; only re-extraction is
  licensed.

Every stage reduces to a language-emptiness question on a product machine,
and each verdict is sound for all documents, including documents with many
replacement sites.  Single-site reasoning alone is not enough for that: the
updated-document side is therefore covered by an envelope language (left
context + replacement up front, replacement + right context at the end) and
by an anywhere-replacement overlap guard, both over-approximating every
multi-site image.  The trade-off is conservatism; a coarser stage can only
push a verdict toward Unknown, never flip it to a wrong action.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .alphabet import Alphabet
from .ast import RegexFormula, boolean_projection
from .evaluate import _require_functional
from .nfa import RegionNfa, compile_disjunct, intersect, is_empty
from .normalize import normalize, proxy, updated_context_bounds
from .parser import UpdateExpression
from .products import (
    build_cross_overlap,
    build_pseudo_recognizer,
    build_replacement_overlap,
    build_self_overlap,
)
from .profiles import partition_profiles

IRRELEVANT = "Irrelevant"
DELETE_ALL = "DeleteAll"
PSEUDO_IRRELEVANT = "PseudoIrrelevant"
UNKNOWN = "Unknown"
REJECTED = "RejectedOverlappingUpdate"

VERDICTS = (IRRELEVANT, DELETE_ALL, PSEUDO_IRRELEVANT, UNKNOWN, REJECTED)

# Verdicts that license a maintenance action without re-extraction.
AUTONOMOUS = (IRRELEVANT, DELETE_ALL, PSEUDO_IRRELEVANT)


@dataclass(frozen=True)
class StageResult:
    """One emptiness check: which machine, was it empty, and if not, a
    shortest accepted document."""

    name: str
    empty: bool
    witness: str | None
    micros: int


@dataclass(frozen=True)
class UpdateClass:
    verdict: str
    stages: tuple[StageResult, ...]

    def stage(self, name: str) -> StageResult:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def find(self, name: str) -> StageResult | None:
        """Like ``stage`` but None when the pipeline stopped before ``name``."""
        for s in self.stages:
            if s.name == name:
                return s
        return None

    def as_report(self) -> dict:
        return {
            "verdict": self.verdict,
            "stages": [
                {
                    "name": s.name,
                    "empty": s.empty,
                    "witness": s.witness,
                    "micros": s.micros,
                }
                for s in self.stages
            ],
        }


def _run_stage(name: str, build) -> StageResult:
    start = time.perf_counter_ns()
    machine: RegionNfa = build()
    witness = is_empty(machine)
    micros = (time.perf_counter_ns() - start) // 1000
    return StageResult(name, witness is None, witness.text if witness else None, micros)


@dataclass(frozen=True)
class UnrestrictedCheck:
    ok: bool
    witness: str | None


def certify_unrestricted(u: UpdateExpression, alphabet: Alphabet) -> UnrestrictedCheck:
    """ok iff no document makes the update mark two different overlapping
    spans; otherwise a shortest offending document."""
    w = is_empty(build_self_overlap(u, alphabet))
    return UnrestrictedCheck(w is None, w.text if w else None)


@dataclass(frozen=True)
class DisjointCheck:
    ok: bool
    witness: str | None
    kind: str | None  # "update": a marked span overlaps an extraction;
    # "proxy": a replacement occurrence can overlap an extraction


def certify_disjoint(u: UpdateExpression, e: RegexFormula,
                     alphabet: Alphabet) -> DisjointCheck:
    """ok iff extracted spans can touch neither update spans in originals nor
    replacement text in updated documents."""
    _require_functional(e)
    norm_e = normalize(e)
    w = is_empty(build_cross_overlap(normalize(u.formula), norm_e, alphabet))
    if w is not None:
        return DisjointCheck(False, w.text, "update")
    w = is_empty(build_cross_overlap(proxy(u), norm_e, alphabet))
    if w is not None:
        return DisjointCheck(False, w.text, "proxy")
    w = is_empty(build_replacement_overlap(u, e, alphabet))
    if w is not None:
        return DisjointCheck(False, w.text, "proxy")
    return DisjointCheck(True, None, None)


def classify(u: UpdateExpression, e: RegexFormula, alphabet: Alphabet) -> UpdateClass:
    """Run the verdict pipeline; stages short-circuit once decided."""
    _require_functional(e)
    alphabet.check_text(u.replacement, what="replacement")

    stages: list[StageResult] = []

    s = _run_stage("self-overlap", lambda: build_self_overlap(u, alphabet))
    stages.append(s)
    if not s.empty:
        return UpdateClass(REJECTED, tuple(stages))

    m_e = compile_disjunct(boolean_projection(e), alphabet)
    m_g = compile_disjunct(boolean_projection(u.formula), alphabet)
    s_match = _run_stage("match-intersection", lambda: intersect(m_e, m_g))
    stages.append(s_match)

    def image_machine() -> RegionNfa:
        firsts, lasts = updated_context_bounds(u, alphabet)
        m_img = intersect(
            compile_disjunct(boolean_projection(firsts), alphabet),
            compile_disjunct(boolean_projection(lasts), alphabet),
        )
        return intersect(m_e, m_img)

    s_image = _run_stage("updated-image-intersection", image_machine)
    stages.append(s_image)
    if s_image.empty:
        verdict = IRRELEVANT if s_match.empty else DELETE_ALL
        return UpdateClass(verdict, tuple(stages))

    norm_e = normalize(e)
    overlap_stages = (
        ("cross-overlap",
         lambda: build_cross_overlap(normalize(u.formula), norm_e, alphabet)),
        ("proxy-overlap",
         lambda: build_cross_overlap(proxy(u), norm_e, alphabet)),
        ("replacement-overlap",
         lambda: build_replacement_overlap(u, e, alphabet)),
    )
    disjoint = True
    for name, build in overlap_stages:
        s = _run_stage(name, build)
        stages.append(s)
        if not s.empty:
            disjoint = False
            break
    if disjoint:
        s = _run_stage(
            "profile-stability",
            lambda: build_pseudo_recognizer(
                u, norm_e, partition_profiles(norm_e), alphabet,
                image="bounds", certified=True,
            ),
        )
        stages.append(s)
        if s.empty:
            return UpdateClass(PSEUDO_IRRELEVANT, tuple(stages))
    return UpdateClass(UNKNOWN, tuple(stages))
