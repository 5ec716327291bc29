"""Functionality checking and disjunctive normalization of formulas.

A formula is functional when every way of matching it binds every capture
variable exactly once.  The check here is syntactic: it computes, per
alternative, the set of variables a match through that alternative binds, and
rejects formulas whose alternatives disagree, bind a variable twice, or put a
capture under ``*``.

Normalization rewrites a functional formula into a disjunction of disjuncts
in which every ``|`` and ``*`` operand is variable-free: disjunctions whose
branches carry captures are pulled up to the top, and captures distribute
over such inner disjunctions.  Variable-free disjunctions stay where they
are.  The resulting list preserves first-occurrence order and drops
structurally duplicate disjuncts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    Capture,
    Concat,
    EPSILON,
    Epsilon,
    Or,
    RegexFormula,
    Star,
    Sym,
    concat_all,
    is_variable_free,
    literal,
    or_all,
    render,
    svars,
)
from .parser import UpdateExpression


@dataclass(frozen=True)
class FunctionalCheck:
    ok: bool
    reason: str | None = None
    path: tuple[str, ...] = ()


class NormalizationError(ValueError):
    pass


def check_functional(f: RegexFormula) -> FunctionalCheck:
    """Decide functionality; on failure, report a path of choices showing a
    match that binds some variable zero or two times."""

    def fail(reason: str, path: tuple[str, ...]) -> FunctionalCheck:
        return FunctionalCheck(False, reason, path)

    def dedup(items):
        by_vars = {}
        for vs, p in items:
            by_vars.setdefault(vs, p)
        return list(by_vars.items())

    # Each outcome is (variable set, path of alternation choices leading there).
    def outcomes(node: RegexFormula, path: tuple[str, ...]):
        if is_variable_free(node):
            return [(frozenset(), path)], None
        if isinstance(node, Or):
            left, err = outcomes(node.left, path + ("left of |",))
            if err:
                return None, err
            right, err = outcomes(node.right, path + ("right of |",))
            if err:
                return None, err
            return dedup(left + right), None
        if isinstance(node, Concat):
            left, err = outcomes(node.left, path)
            if err:
                return None, err
            right, err = outcomes(node.right, path)
            if err:
                return None, err
            merged = []
            for lv, lp in left:
                for rv, rp in right:
                    clash = lv & rv
                    if clash:
                        var = sorted(clash)[0]
                        return None, fail(
                            f"variable {var!r} is bound twice on one match", lp + rp
                        )
                    merged.append((lv | rv, lp + rp[len(path):]))
            return dedup(merged), None
        if isinstance(node, Star):
            # Not variable-free, so some capture sits under this star.
            var = sorted(svars(node))[0]
            return None, fail(
                f"variable {var!r} appears under '*' (bound zero or many times)",
                path + ("inside *",),
            )
        if isinstance(node, Capture):
            inner, err = outcomes(node.inner, path)
            if err:
                return None, err
            merged = []
            for vs, p in inner:
                if node.name in vs:
                    return None, fail(
                        f"variable {node.name!r} is bound twice on one match", p
                    )
                merged.append((vs | {node.name}, p))
            return dedup(merged), None
        raise TypeError(f"unknown formula node {node!r}")

    result, err = outcomes(f, ())
    if err:
        return err
    distinct = {}
    for vs, p in result:
        distinct.setdefault(vs, p)
    if len(distinct) > 1:
        (vs1, p1), (vs2, p2) = list(distinct.items())[:2]
        missing = sorted((vs1 ^ vs2))[0]
        where = p2 if missing in vs1 else p1
        return fail(
            f"variable {missing!r} is unbound on one alternative", where
        )
    return FunctionalCheck(True)


@dataclass(frozen=True)
class NormalizedFormula:
    """A formula as an ordered disjunction of normalized disjuncts."""

    disjuncts: tuple[RegexFormula, ...]

    def as_formula(self) -> RegexFormula:
        return or_all(list(self.disjuncts))

    def __len__(self) -> int:
        return len(self.disjuncts)

    def __repr__(self) -> str:
        return " ∨ ".join(render(d) for d in self.disjuncts)


def normalize(f: RegexFormula) -> NormalizedFormula:
    """Split ``f`` into disjuncts whose Or/Star operands are variable-free.

    Requires ``f`` functional.  The disjunct count is bounded by d**v where v
    is the variable count and d the largest number of capture sites any one
    variable has.
    """
    check = check_functional(f)
    if not check.ok:
        raise NormalizationError(f"formula is not functional: {check.reason}")

    def split(node: RegexFormula) -> list[RegexFormula]:
        if is_variable_free(node):
            return [node]
        if isinstance(node, Or):
            return split(node.left) + split(node.right)
        if isinstance(node, Concat):
            return [
                Concat(dl, dr) for dl in split(node.left) for dr in split(node.right)
            ]
        if isinstance(node, Capture):
            return [Capture(node.name, d) for d in split(node.inner)]
        # Star with variables inside was rejected by the functional check.
        raise TypeError(f"unexpected node {node!r}")

    seen = []
    for d in split(f):
        if d not in seen:
            seen.append(d)
    return NormalizedFormula(tuple(seen))


def is_normal_disjunct(d: RegexFormula) -> bool:
    """True when every Or and Star operand inside ``d`` is variable-free."""
    if isinstance(d, (Or, Star)):
        return is_variable_free(d)
    if isinstance(d, Concat):
        return is_normal_disjunct(d.left) and is_normal_disjunct(d.right)
    if isinstance(d, Capture):
        return is_normal_disjunct(d.inner)
    return True


def split_update_disjunct(
    d: RegexFormula,
) -> tuple[RegexFormula, str, RegexFormula, RegexFormula]:
    """Decompose a one-variable disjunct into (left, name, operand, right):
    variable-free context, the capture, and its variable-free operand."""
    if isinstance(d, Capture):
        if not is_variable_free(d.inner):
            raise NormalizationError("capture operand is not variable-free")
        return EPSILON, d.name, d.inner, EPSILON
    if isinstance(d, Concat):
        if is_variable_free(d.left):
            left, name, operand, right = split_update_disjunct(d.right)
            return _concat(d.left, left), name, operand, right
        if is_variable_free(d.right):
            left, name, operand, right = split_update_disjunct(d.left)
            return left, name, operand, _concat(right, d.right)
    raise NormalizationError(f"not a one-variable update disjunct: {render(d)}")


def _concat(a: RegexFormula, b: RegexFormula) -> RegexFormula:
    if isinstance(a, Epsilon):
        return b
    if isinstance(b, Epsilon):
        return a
    return Concat(a, b)


def proxy(u: UpdateExpression) -> NormalizedFormula:
    """The update's replaced-document form: in every disjunct of the update
    formula, the capture operand is replaced by the literal replacement text.

    Evaluated as a spanner, each disjunct marks where the replacement lands
    in a once-replaced document."""
    norm = normalize(u.formula)
    out = []
    replacement = literal(u.replacement)

    def rewrite(node: RegexFormula) -> RegexFormula:
        if isinstance(node, Capture):
            return Capture(node.name, replacement)
        if isinstance(node, Concat):
            return Concat(rewrite(node.left), rewrite(node.right))
        return node

    for d in norm.disjuncts:
        out.append(rewrite(d))
    return NormalizedFormula(tuple(out))


def anywhere_proxy(u: UpdateExpression, alphabet) -> NormalizedFormula:
    """One-disjunct spanner marking every occurrence of the replacement text,
    in any context.  Over-approximates where replacement blocks can sit in a
    document produced by several simultaneous replacements."""
    pad = Star(or_all([Sym(s) for s in alphabet]))
    d = Concat(Concat(pad, Capture(u.variable, literal(u.replacement))), pad)
    return NormalizedFormula((d,))


def updated_context_bounds(
    u: UpdateExpression, alphabet
) -> tuple[RegexFormula, RegexFormula]:
    """Two variable-free formulas over-approximating every updated document.

    A document with at least one replacement starts with an untouched prefix
    matching some disjunct's left context followed by the replacement text,
    and symmetrically ends with the replacement text followed by an untouched
    right context.  Their intersection contains every updated document, no
    matter how many spans were replaced at once.
    """
    norm = normalize(u.formula)
    pad = Star(or_all([Sym(s) for s in alphabet]))
    lit = literal(u.replacement)
    firsts = []
    lasts = []
    for d in norm.disjuncts:
        left, _name, _operand, right = split_update_disjunct(d)
        firsts.append(concat_all([left, lit, pad]))
        lasts.append(concat_all([pad, lit, right]))
    return or_all(firsts), or_all(lasts)
