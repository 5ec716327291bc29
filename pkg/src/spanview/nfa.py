"""Epsilon-free automata with capture-region annotations.

Formulas compile through a Thompson-style construction whose epsilon moves
are then eliminated.  Each surviving transition consumes one symbol and
carries two annotations:

* ``inside``: the capture variables whose marked span covers the consumed
  symbol (the symbol's atom sits syntactically inside those captures);
* ``crosses``: capture variables whose entire operand was skipped on the
  epsilon path leading into this transition.  A crossed capture binds the
  empty span exactly at the consumed symbol's offset.

State labels (``region_of``) are a debugging surface only; all constructions
quantify over transitions.  Boolean combinations (union, intersection,
concatenation, complement) drop the annotations, which only ever matter on
machines compiled directly from disjuncts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

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
    is_variable_free,
)
from .normalize import NormalizedFormula

NO_VARS: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Transition:
    src: int
    symbol: str
    dst: int
    inside: frozenset[str] = NO_VARS
    crosses: frozenset[str] = NO_VARS


@dataclass(frozen=True)
class Witness:
    """A document accepted by a machine, with one accepting state path."""

    text: str
    path: tuple[int, ...]


class AutomatonError(ValueError):
    pass


class RegionNfa:
    """An epsilon-free NFA over a declared alphabet.

    Treat instances as immutable once built.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        n_states: int,
        transitions: Iterable[Transition],
        initial: frozenset[int],
        final: frozenset[int],
        region_of: dict[int, str] | None = None,
    ):
        self.alphabet = alphabet
        self.n_states = n_states
        self.transitions = tuple(transitions)
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        self.region_of = dict(region_of or {})
        self._by_src_symbol: dict[tuple[int, str], list[Transition]] | None = None
        self._by_src: dict[int, list[Transition]] | None = None

    def out(self, state: int, symbol: str) -> list[Transition]:
        if self._by_src_symbol is None:
            index: dict[tuple[int, str], list[Transition]] = {}
            for t in self.transitions:
                index.setdefault((t.src, t.symbol), []).append(t)
            self._by_src_symbol = index
        return self._by_src_symbol.get((state, symbol), [])

    def out_any(self, state: int) -> list[Transition]:
        if self._by_src is None:
            index: dict[int, list[Transition]] = {}
            for t in self.transitions:
                index.setdefault(t.src, []).append(t)
            self._by_src = index
        return self._by_src.get(state, [])

    def accepts(self, text: str) -> bool:
        active = set(self.initial)
        for ch in text:
            if ch not in self.alphabet:
                return False
            active = {t.dst for q in active for t in self.out(q, ch)}
            if not active:
                return False
        return bool(active & self.final)

    def dump(self) -> str:
        """One line per transition: ``src -symbol-> dst [region] [cross]``."""
        lines = [
            "initial: " + " ".join(map(str, sorted(self.initial))),
            "final: " + " ".join(map(str, sorted(self.final))),
        ]
        for t in sorted(self.transitions, key=lambda t: (t.src, t.symbol, t.dst)):
            region = self.region_of.get(t.dst, "") or "-"
            line = f"{t.src} -{t.symbol}-> {t.dst} [{region}]"
            if t.crosses:
                line += " [cross]"
            lines.append(line)
        return "\n".join(lines)


def is_empty(m: RegionNfa) -> Witness | None:
    """None when the language is empty, else a shortest accepted document.

    Breadth-first over reachable states with symbols tried in alphabet
    order, so the witness is the lexicographically first among the shortest.
    """
    parent: dict[int, tuple[int, str] | None] = {}
    queue: deque[int] = deque()
    for q in sorted(m.initial):
        parent[q] = None
        queue.append(q)

    def build(q: int) -> Witness:
        chars: list[str] = []
        path = [q]
        while parent[q] is not None:
            prev, ch = parent[q]  # type: ignore[misc]
            chars.append(ch)
            path.append(prev)
            q = prev
        return Witness("".join(reversed(chars)), tuple(reversed(path)))

    for q in sorted(m.initial):
        if q in m.final:
            return build(q)
    while queue:
        q = queue.popleft()
        for ch in m.alphabet:
            for t in m.out(q, ch):
                if t.dst not in parent:
                    parent[t.dst] = (q, ch)
                    if t.dst in m.final:
                        return build(t.dst)
                    queue.append(t.dst)
    return None


# --- compilation ------------------------------------------------------------


class _Builder:
    """Thompson construction with epsilon edges and capture bookkeeping."""

    def __init__(self) -> None:
        self.n = 0
        self.eps: dict[int, list[int]] = {}
        self.sym_edges: list[tuple[int, str, int, frozenset[str]]] = []
        self.entry_of: dict[int, str] = {}  # capture entry state -> name
        self.exit_of: dict[int, str] = {}  # capture exit state -> name
        self.label: dict[int, str] = {}

    def state(self, label: str = "") -> int:
        q = self.n
        self.n += 1
        if label:
            self.label[q] = label
        return q

    def link(self, a: int, b: int) -> None:
        self.eps.setdefault(a, []).append(b)

    def build(self, node: RegexFormula, stack: tuple[str, ...], label: str) -> tuple[int, int]:
        entry = self.state(label)
        exit_ = self.state(label)
        if isinstance(node, EmptyLang):
            pass  # no path from entry to exit
        elif isinstance(node, Epsilon):
            self.link(entry, exit_)
        elif isinstance(node, Sym):
            self.sym_edges.append((entry, node.char, exit_, frozenset(stack)))
        elif isinstance(node, Or):
            le, lx = self.build(node.left, stack, label)
            re_, rx = self.build(node.right, stack, label)
            self.link(entry, le)
            self.link(entry, re_)
            self.link(lx, exit_)
            self.link(rx, exit_)
        elif isinstance(node, Concat):
            le, lx = self.build(node.left, stack, label)
            re_, rx = self.build(node.right, stack, label)
            self.link(entry, le)
            self.link(lx, re_)
            self.link(rx, exit_)
        elif isinstance(node, Star):
            ie, ix = self.build(node.inner, stack, label)
            self.link(entry, exit_)
            self.link(entry, ie)
            self.link(ix, ie)
            self.link(ix, exit_)
        elif isinstance(node, Capture):
            inner_label = (label + ":" if label else "") + node.name
            ie, ix = self.build(node.inner, stack + (node.name,), inner_label)
            self.entry_of[entry] = node.name
            self.exit_of[exit_] = node.name
            self.label[entry] = inner_label
            self.label[exit_] = inner_label
            self.link(entry, ie)
            self.link(ix, exit_)
        else:
            raise TypeError(f"unknown formula node {node!r}")
        return entry, exit_

    def closure(self, start: int) -> set[tuple[int, frozenset[str]]]:
        """States reachable from ``start`` by epsilon moves, each paired with
        the set of captures whose whole operand the path skipped through."""
        out: set[tuple[int, frozenset[str]]] = set()
        seen = set()
        stack = [(start, frozenset(), frozenset())]  # state, entered, crossed
        while stack:
            q, entered, crossed = stack.pop()
            key = (q, entered, crossed)
            if key in seen:
                continue
            seen.add(key)
            out.add((q, crossed))
            for nxt in self.eps.get(q, ()):
                entered2, crossed2 = entered, crossed
                name = self.entry_of.get(nxt)
                if name is not None:
                    entered2 = entered2 | {name}
                name = self.exit_of.get(nxt)
                if name is not None and name in entered2:
                    crossed2 = crossed2 | {name}
                stack.append((nxt, entered2, crossed2))
        return out


def _eliminate(builder: _Builder, entry: int, exits: frozenset[int],
               alphabet: Alphabet) -> RegionNfa:
    closures = {q: builder.closure(q) for q in range(builder.n)}
    edges_from: dict[int, list[tuple[int, str, int, frozenset[str]]]] = {}
    for src, ch, dst, inside in builder.sym_edges:
        edges_from.setdefault(src, []).append((src, ch, dst, inside))

    transitions: set[Transition] = set()
    finals: set[int] = set()
    for q in range(builder.n):
        for p, crossed in closures[q]:
            if p in exits:
                finals.add(q)
            for _src, ch, dst, inside in edges_from.get(p, ()):
                transitions.add(Transition(q, ch, dst, inside, crossed))

    # Keep only states reachable from the entry.
    nfa = RegionNfa(
        alphabet,
        builder.n,
        transitions,
        frozenset([entry]),
        frozenset(f for f in finals),
        builder.label,
    )
    return _prune(nfa)


def _prune(m: RegionNfa) -> RegionNfa:
    reach = set(m.initial)
    queue = deque(m.initial)
    while queue:
        q = queue.popleft()
        for t in m.out_any(q):
            if t.dst not in reach:
                reach.add(t.dst)
                queue.append(t.dst)
    if len(reach) == m.n_states:
        return m
    remap = {old: new for new, old in enumerate(sorted(reach))}
    return RegionNfa(
        m.alphabet,
        len(remap),
        [
            Transition(remap[t.src], t.symbol, remap[t.dst], t.inside, t.crosses)
            for t in m.transitions
            if t.src in reach and t.dst in reach
        ],
        frozenset(remap[q] for q in m.initial if q in reach),
        frozenset(remap[q] for q in m.final if q in reach),
        {remap[q]: lbl for q, lbl in m.region_of.items() if q in reach},
    )


def _check_symbols(node: RegexFormula, alphabet: Alphabet) -> None:
    if isinstance(node, Sym):
        if node.char not in alphabet:
            raise AutomatonError(
                f"symbol {node.char!r} is not in the declared alphabet"
            )
    elif isinstance(node, (Or, Concat)):
        _check_symbols(node.left, alphabet)
        _check_symbols(node.right, alphabet)
    elif isinstance(node, (Star, Capture)):
        _check_symbols(node.inner, alphabet)


def compile_disjunct(d: RegexFormula, alphabet: Alphabet, label: str = "") -> RegionNfa:
    """Compile one normalized disjunct, preserving capture annotations."""
    _check_symbols(d, alphabet)
    b = _Builder()
    entry, exit_ = b.build(d, (), label)
    return _eliminate(b, entry, frozenset([exit_]), alphabet)


def compile_formula(f: RegexFormula, alphabet: Alphabet) -> RegionNfa:
    """Compile a variable-free formula to a plain machine."""
    if not is_variable_free(f):
        raise AutomatonError("compile_formula expects a variable-free formula")
    return compile_disjunct(f, alphabet)


def compile_normalized(norm: NormalizedFormula, alphabet: Alphabet) -> RegionNfa:
    """Union machine over the disjuncts, annotations preserved."""
    machines = [
        compile_disjunct(d, alphabet, label=f"d{i}")
        for i, d in enumerate(norm.disjuncts)
    ]
    return union_all(machines, alphabet)


def compile(f: RegexFormula | NormalizedFormula, alphabet: Alphabet) -> RegionNfa:  # noqa: A001
    """Single entry point: variable-free formulas, single disjuncts, or a
    whole normalized formula."""
    if isinstance(f, NormalizedFormula):
        return compile_normalized(f, alphabet)
    return compile_disjunct(f, alphabet)


# --- boolean combinations ---------------------------------------------------


def _strip(t: Transition, offset: int = 0) -> Transition:
    return Transition(t.src + offset, t.symbol, t.dst + offset)


def _require_same_alphabet(m1: RegionNfa, m2: RegionNfa) -> None:
    if m1.alphabet.symbols != m2.alphabet.symbols:
        raise AutomatonError("alphabet mismatch between machines")


def union(m1: RegionNfa, m2: RegionNfa) -> RegionNfa:
    _require_same_alphabet(m1, m2)
    off = m1.n_states
    transitions = list(m1.transitions) + [
        Transition(t.src + off, t.symbol, t.dst + off, t.inside, t.crosses)
        for t in m2.transitions
    ]
    region = dict(m1.region_of)
    region.update({q + off: lbl for q, lbl in m2.region_of.items()})
    return RegionNfa(
        m1.alphabet,
        m1.n_states + m2.n_states,
        transitions,
        m1.initial | frozenset(q + off for q in m2.initial),
        m1.final | frozenset(q + off for q in m2.final),
        region,
    )


def union_all(machines: list[RegionNfa], alphabet: Alphabet) -> RegionNfa:
    if not machines:
        return RegionNfa(alphabet, 0, [], frozenset(), frozenset())
    acc = machines[0]
    for m in machines[1:]:
        acc = union(acc, m)
    return acc


def intersect(m1: RegionNfa, m2: RegionNfa) -> RegionNfa:
    """Product over reachable state pairs; annotations are dropped."""
    _require_same_alphabet(m1, m2)
    ids: dict[tuple[int, int], int] = {}
    transitions: list[Transition] = []

    def sid(pair: tuple[int, int]) -> int:
        if pair not in ids:
            ids[pair] = len(ids)
        return ids[pair]

    queue: deque[tuple[int, int]] = deque()
    for q1 in m1.initial:
        for q2 in m2.initial:
            pair = (q1, q2)
            if pair not in ids:
                sid(pair)
                queue.append(pair)
    initial = frozenset(ids[p] for p in ids)
    seen = set(ids)
    while queue:
        q1, q2 = queue.popleft()
        src = ids[(q1, q2)]
        for ch in m1.alphabet:
            for t1 in m1.out(q1, ch):
                for t2 in m2.out(q2, ch):
                    pair = (t1.dst, t2.dst)
                    if pair not in seen:
                        seen.add(pair)
                        sid(pair)
                        queue.append(pair)
                    transitions.append(Transition(src, ch, ids[pair]))
    final = frozenset(
        ids[(q1, q2)] for (q1, q2) in ids if q1 in m1.final and q2 in m2.final
    )
    return RegionNfa(m1.alphabet, max(len(ids), 1), transitions, initial, final)


def concat(m1: RegionNfa, m2: RegionNfa) -> RegionNfa:
    """Epsilon-free concatenation; annotations are dropped."""
    _require_same_alphabet(m1, m2)
    off = m1.n_states
    transitions = [_strip(t) for t in m1.transitions]
    transitions += [_strip(t, off) for t in m2.transitions]
    # Entering the second machine: duplicate its initial states' out-edges
    # onto every final state of the first.
    for t in m2.transitions:
        if t.src in m2.initial:
            for f in m1.final:
                transitions.append(Transition(f, t.symbol, t.dst + off))
    initial = set(m1.initial)
    if m1.initial & m1.final:
        initial |= {q + off for q in m2.initial}
    final = frozenset(q + off for q in m2.final)
    if m2.initial & m2.final:
        final = final | m1.final
    return RegionNfa(
        m1.alphabet,
        m1.n_states + m2.n_states,
        set(transitions),
        frozenset(initial),
        final,
    )


def determinize(m: RegionNfa) -> RegionNfa:
    """Complete subset-construction DFA over the declared alphabet."""
    start = frozenset(m.initial)
    ids: dict[frozenset[int], int] = {start: 0}
    order = [start]
    transitions: list[Transition] = []
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        src = ids[subset]
        for ch in m.alphabet:
            nxt = frozenset(t.dst for q in subset for t in m.out(q, ch))
            if nxt not in ids:
                ids[nxt] = len(ids)
                order.append(nxt)
                queue.append(nxt)
            transitions.append(Transition(src, ch, ids[nxt]))
    final = frozenset(ids[s] for s in order if s & m.final)
    return RegionNfa(m.alphabet, len(ids), transitions, frozenset([0]), final)


def complement(m: RegionNfa) -> RegionNfa:
    dfa = determinize(m)
    return RegionNfa(
        dfa.alphabet,
        dfa.n_states,
        dfa.transitions,
        dfa.initial,
        frozenset(range(dfa.n_states)) - dfa.final,
    )


def combine(kind: str, m1: RegionNfa, m2: RegionNfa | None = None) -> RegionNfa:
    """Dispatch helper: kind in {union, intersect, concat, complement}."""
    if kind == "complement":
        if m2 is not None:
            raise AutomatonError("complement takes a single machine")
        return complement(m1)
    if m2 is None:
        raise AutomatonError(f"{kind} needs two machines")
    if kind == "union":
        return union(m1, m2)
    if kind == "intersect":
        return intersect(m1, m2)
    if kind == "concat":
        return concat(m1, m2)
    raise AutomatonError(f"unknown combination {kind!r}")
