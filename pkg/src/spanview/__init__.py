"""Static classification of document updates against extracted span views.

An extraction formula (a regular expression with named capture variables)
defines a view over a set of documents: the relation of spans it marks.  A
match-and-replace update rewrites documents.  This package decides, from the
formula and the rule alone, whether the view can be maintained without
re-running the extractor, and maintains materialized views accordingly.
"""

from .alphabet import Alphabet, AlphabetError, alphabet_from_text
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
    is_variable_free,
    render,
    svars,
)
from .evaluate import (
    Document,
    NotFunctionalError,
    OverlappingUpdateError,
    UpdateRelation,
    apply_update,
    evaluate_spanner,
    evaluate_update_relation,
    oracle_spanner,
)
from .fuzz import FuzzConfig, run_campaign
from .nfa import RegionNfa, is_empty
from .normalize import (
    NormalizedFormula,
    anywhere_proxy,
    check_functional,
    normalize,
    proxy,
)
from .parser import (
    FormulaSyntaxError,
    UpdateExpression,
    load_formula_file,
    load_update_file,
    make_update,
    parse_formula,
)
from .products import (
    PreconditionError,
    build_cross_overlap,
    build_pseudo_recognizer,
    build_replacement_overlap,
    build_self_overlap,
)
from .profiles import ProfileGroup, partition_profiles, variable_profile
from .spans import (
    Span,
    SpanError,
    SpanRelation,
    SpanTuple,
    shift_span,
    shift_tuple,
    spans_overlap,
)
from .verifier import (
    AUTONOMOUS,
    DELETE_ALL,
    IRRELEVANT,
    PSEUDO_IRRELEVANT,
    REJECTED,
    UNKNOWN,
    VERDICTS,
    UpdateClass,
    certify_disjoint,
    certify_unrestricted,
    classify,
)
from .viewstore import (
    DocumentDb,
    MaintenanceReport,
    MaterializedView,
    StoreError,
    is_consistent,
    load_db,
    load_view,
    maintain,
    materialize,
    save_db,
    save_view,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetError",
    "alphabet_from_text",
    "Capture",
    "Concat",
    "EmptyLang",
    "Epsilon",
    "Or",
    "RegexFormula",
    "Star",
    "Sym",
    "boolean_projection",
    "is_variable_free",
    "render",
    "svars",
    "Document",
    "NotFunctionalError",
    "OverlappingUpdateError",
    "UpdateRelation",
    "apply_update",
    "evaluate_spanner",
    "evaluate_update_relation",
    "oracle_spanner",
    "FuzzConfig",
    "run_campaign",
    "RegionNfa",
    "is_empty",
    "NormalizedFormula",
    "anywhere_proxy",
    "check_functional",
    "normalize",
    "proxy",
    "PreconditionError",
    "build_cross_overlap",
    "build_pseudo_recognizer",
    "build_replacement_overlap",
    "build_self_overlap",
    "FormulaSyntaxError",
    "UpdateExpression",
    "load_formula_file",
    "load_update_file",
    "make_update",
    "parse_formula",
    "ProfileGroup",
    "partition_profiles",
    "variable_profile",
    "Span",
    "SpanError",
    "SpanRelation",
    "SpanTuple",
    "shift_span",
    "shift_tuple",
    "spans_overlap",
    "AUTONOMOUS",
    "DELETE_ALL",
    "IRRELEVANT",
    "PSEUDO_IRRELEVANT",
    "REJECTED",
    "UNKNOWN",
    "VERDICTS",
    "UpdateClass",
    "certify_disjoint",
    "certify_unrestricted",
    "classify",
    "DocumentDb",
    "MaintenanceReport",
    "MaterializedView",
    "StoreError",
    "is_consistent",
    "load_db",
    "load_view",
    "maintain",
    "materialize",
    "save_db",
    "save_view",
]
