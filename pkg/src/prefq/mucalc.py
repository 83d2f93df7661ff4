"""Alternation-free modal mu-calculus over induced preference graphs.

Formulas use least fixpoints only; negation is allowed over closed
subformulas.  Two engines evaluate them:

* :func:`eval_global` computes satisfaction sets bottom-up, iterating each
  ``mu`` from the empty set until it stabilizes.
* :func:`eval_local` decides one node at a time, exploring only the part of
  the graph the formula reaches from that node (tabled, goal-directed).

Text form::

    mu Z0 . (<{1}>r E=code | <{1}>r Z0)

``~`` negation, ``&``/``|`` conjunction/disjunction, ``<{ids}>`` forward
diamond (towards more preferred outcomes), ``<{ids}>r`` reverse diamond.
"""
from __future__ import annotations

import re
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import EvaluationTimeout, FormulaError, ParseError, SemanticError
from .graph import BOTTOM, InducedPreferenceGraph
from .query import format_coalition, tokenize


@dataclass(frozen=True)
class Tt:
    pass


@dataclass(frozen=True)
class Ff:
    pass


@dataclass(frozen=True)
class Atom:
    variable: str
    value: str


@dataclass(frozen=True)
class Neg:
    operand: "Formula"


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class DiamFwd:
    coalition: frozenset[int]
    operand: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "coalition", frozenset(self.coalition))


@dataclass(frozen=True)
class DiamRev:
    coalition: frozenset[int]
    operand: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "coalition", frozenset(self.coalition))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Mu:
    name: str
    body: "Formula"


Formula = Union[Tt, Ff, Atom, Neg, Conj, Disj, DiamFwd, DiamRev, Var, Mu]


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``tt``."""
    out = None
    for p in parts:
        out = p if out is None else Conj(out, p)
    return Tt() if out is None else out


def disj(parts: Iterable[Formula]) -> Formula:
    out = None
    for p in parts:
        out = p if out is None else Disj(out, p)
    return Ff() if out is None else out


def children(f: Formula) -> tuple:
    if isinstance(f, (Neg, DiamFwd, DiamRev)):
        return (f.operand,)
    if isinstance(f, (Conj, Disj)):
        return (f.left, f.right)
    if isinstance(f, Mu):
        return (f.body,)
    return ()


def subformulas(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, Mu):
        return free_vars(f.body) - {f.name}
    out = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


@dataclass(frozen=True)
class FormulaStats:
    nodes: int
    modalities: int
    binders: int


def formula_stats(f: Formula) -> FormulaStats:
    nodes = modal = binders = 0
    for g in subformulas(f):
        nodes += 1
        modal += isinstance(g, (DiamFwd, DiamRev))
        binders += isinstance(g, Mu)
    return FormulaStats(nodes, modal, binders)


# validation

def validate_af(f: Formula, free: Iterable[str] = ()) -> tuple[bool, list[str]]:
    """Check the supported fragment.

    Every fixpoint variable must be bound (or listed in ``free``), every
    negated subformula must be closed, and coalitions must be non-empty.
    Returns ``(ok, diagnostics)``.
    """
    problems = []

    def walk(g, bound):
        if isinstance(g, Var):
            if g.name not in bound:
                problems.append(f"unbound fixpoint variable {g.name} in {to_text(g)}")
        elif isinstance(g, Neg):
            fv = free_vars(g.operand)
            if fv:
                problems.append(
                    f"negation over open formula (free {', '.join(sorted(fv))}) in {to_text(g)}"
                )
            walk(g.operand, bound)
        elif isinstance(g, (DiamFwd, DiamRev)):
            if not g.coalition:
                problems.append(f"empty coalition in {to_text(g)}")
            walk(g.operand, bound)
        elif isinstance(g, Mu):
            walk(g.body, bound | {g.name})
        elif isinstance(g, (Conj, Disj)):
            walk(g.left, bound)
            walk(g.right, bound)
        elif not isinstance(g, (Tt, Ff, Atom)):
            problems.append(f"not a formula: {g!r}")

    walk(f, frozenset(free))
    return not problems, problems


def require_af(f: Formula, free: Iterable[str] = ()) -> None:
    ok, problems = validate_af(f, free)
    if not ok:
        raise FormulaError("; ".join(problems))


# printing

def to_text(f: Formula) -> str:
    return _fmt(f, 0)


def _fmt(f, level):
    if isinstance(f, Tt):
        return "tt"
    if isinstance(f, Ff):
        return "ff"
    if isinstance(f, Atom):
        return f"{f.variable}={f.value}"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Neg):
        return "~" + _fmt(f.operand, 2)
    if isinstance(f, DiamFwd):
        return f"<{format_coalition(f.coalition)}> {_fmt(f.operand, 2)}"
    if isinstance(f, DiamRev):
        return f"<{format_coalition(f.coalition)}>r {_fmt(f.operand, 2)}"
    if isinstance(f, Mu):
        return f"mu {f.name} . {_fmt(f.body, 2)}"
    if isinstance(f, Disj):
        s = f"{_fmt(f.left, 0)} | {_fmt(f.right, 1)}"
        return s if level == 0 else f"({s})"
    if isinstance(f, Conj):
        s = f"{_fmt(f.left, 1)} & {_fmt(f.right, 2)}"
        return s if level <= 1 else f"({s})"
    raise TypeError(f"not a formula: {f!r}")


# parsing

_FTOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<op>>r(?![A-Za-z0-9_])|[~&|(),{}=.<>])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


class _FormulaParser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text, _FTOKEN)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg):
        return ParseError(msg, self.text, self.tok[2])

    def accept(self, value):
        if self.tok[1] == value and self.tok[0] != "eof":
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            raise self.error(f"expected {value!r}, found {self.tok[1] or 'end of input'!r}")

    def parse(self):
        f = self.disj()
        if self.tok[0] != "eof":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return f

    def disj(self):
        f = self.conj()
        while self.accept("|"):
            f = Disj(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.accept("&"):
            f = Conj(f, self.unary())
        return f

    def unary(self):
        kind, value, _ = self.tok
        if self.accept("~"):
            return Neg(self.unary())
        if self.accept("<"):
            coalition = self.coalition()
            if self.accept(">r"):
                return DiamRev(coalition, self.unary())
            self.expect(">")
            return DiamFwd(coalition, self.unary())
        if self.accept("("):
            f = self.disj()
            self.expect(")")
            return f
        if kind != "ident":
            raise self.error(f"expected a formula, found {value or 'end of input'!r}")
        self.i += 1
        if value == "mu":
            name = self.tok
            if name[0] != "ident":
                raise self.error("expected a fixpoint variable after 'mu'")
            self.i += 1
            self.expect(".")
            return Mu(name[1], self.unary())
        if value == "tt":
            return Tt()
        if value == "ff":
            return Ff()
        if self.accept("="):
            vkind, val, _ = self.tok
            if vkind not in ("ident", "int"):
                raise self.error("expected a value after '='")
            self.i += 1
            return Atom(value, val)
        return Var(value)

    def coalition(self):
        self.expect("{")
        ids = []
        while True:
            kind, value, _ = self.tok
            if kind != "int":
                raise self.error(f"expected a stakeholder id, found {value or 'end of input'!r}")
            self.i += 1
            ids.append(int(value))
            if not self.accept(","):
                break
        self.expect("}")
        return frozenset(ids)


def parse_formula(text: str) -> Formula:
    return _FormulaParser(text).parse()


# compilation
#
# Formulas are hash-consed into a node table.  Fixpoint variables become
# binder distances, so alpha-equivalent copies (the translation duplicates
# subqueries under fresh names) share one id and one memo entry.

TT, FF, ATOM, NOT, AND, OR, DIA, VAR, MU = range(9)


@dataclass
class Compiled:
    graph: InducedPreferenceGraph
    nodes: list = field(default_factory=list)
    depth: list = field(default_factory=list)  # binders a subformula reaches out to; 0 = closed
    index: dict = field(default_factory=dict)
    root: int = -1

    def add(self, key, depth):
        fid = self.index.get(key)
        if fid is None:
            fid = len(self.nodes)
            self.nodes.append(key)
            self.depth.append(depth)
            self.index[key] = fid
        return fid


def compile_formula(f: Formula, g: InducedPreferenceGraph, free: Iterable[str] = ()) -> Compiled:
    free = list(free)
    require_af(f, free)
    schema = g.schema
    c = Compiled(g)

    def comp(h, binders):
        if isinstance(h, Tt):
            return c.add((TT,), 0)
        if isinstance(h, Ff):
            return c.add((FF,), 0)
        if isinstance(h, Atom):
            if not schema.has_value(h.variable, h.value):
                raise SemanticError(f"unknown proposition {h.variable}={h.value}")
            var = schema.var_index(h.variable)
            return c.add((ATOM, var, schema.value_index(var, h.value)), 0)
        if isinstance(h, Var):
            k = next(d for d, name in enumerate(reversed(binders)) if name == h.name)
            return c.add((VAR, k), k + 1)
        if isinstance(h, Neg):
            child = comp(h.operand, binders)
            return c.add((NOT, child), c.depth[child])
        if isinstance(h, (Conj, Disj)):
            op = AND if isinstance(h, Conj) else OR
            parts = []
            for side in (h.left, h.right):
                sid = comp(side, binders)
                if c.nodes[sid][0] == op:
                    parts.extend(c.nodes[sid][1])
                else:
                    parts.append(sid)
            parts = tuple(dict.fromkeys(parts))
            return c.add((op, parts), max(c.depth[p] for p in parts))
        if isinstance(h, (DiamFwd, DiamRev)):
            coalition = g.check_coalition(h.coalition)
            child = comp(h.operand, binders)
            return c.add((DIA, coalition, child, isinstance(h, DiamFwd)), c.depth[child])
        if isinstance(h, Mu):
            body = comp(h.body, binders + [h.name])
            return c.add((MU, body), max(c.depth[body] - 1, 0))
        raise TypeError(f"not a formula: {h!r}")

    c.root = comp(f, free)
    return c


# global engine

@dataclass
class EvalStats:
    """Per-call counters: fixpoint iterations (one entry per mu evaluation)."""

    mu_iterations: list = field(default_factory=list)
    goals: int = 0


def eval_global(
    f: Formula,
    g: InducedPreferenceGraph,
    env: Mapping[str, Iterable[int]] | None = None,
    stats: EvalStats | None = None,
) -> set[int]:
    """Satisfaction set of ``f`` over all nodes (⊥ included where it satisfies ``f``)."""
    env = dict(env or {})
    names = list(env)
    c = compile_formula(f, g, names)
    outcomes = frozenset(g.outcome_nodes())
    everything = outcomes | {BOTTOM}
    memo = {}
    stats = stats if stats is not None else EvalStats()

    def ev(fid, stack):
        closed = c.depth[fid] == 0
        if closed and fid in memo:
            return memo[fid]
        node = c.nodes[fid]
        kind = node[0]
        if kind == TT:
            out = set(everything)
        elif kind == FF:
            out = set()
        elif kind == ATOM:
            out = set(g.nodes_with(node[1], node[2]))
        elif kind == NOT:
            out = outcomes - ev(node[1], stack)
        elif kind == AND:
            out = None
            for p in node[1]:
                s = ev(p, stack)
                out = set(s) if out is None else out & s
                if not out:
                    break
        elif kind == OR:
            out = set()
            for p in node[1]:
                out |= ev(p, stack)
        elif kind == DIA:
            _, coalition, child, forward = node
            # pre-image of the child's set along the chosen direction
            out = set()
            for s in ev(child, stack):
                out |= g._step(s, coalition, not forward)
        elif kind == VAR:
            out = stack[-1 - node[1]]
        elif kind == MU:
            current = frozenset()
            iterations = 0
            while True:
                iterations += 1
                nxt = frozenset(ev(node[1], stack + (current,)))
                if nxt == current:
                    break
                current = nxt
            stats.mu_iterations.append(iterations)
            out = set(current)
        else:  # pragma: no cover
            raise AssertionError(kind)
        if closed:
            memo[fid] = out
        return out

    initial = tuple(frozenset(env[n]) for n in names)
    return set(ev(c.root, initial))


# local engine

class _Frame:
    """Tabled state of one least-fixpoint goal family."""

    __slots__ = ("fid", "values", "deps", "worklist", "current")

    def __init__(self, fid):
        self.fid = fid
        self.values = {}
        self.deps = defaultdict(set)
        self.worklist = []
        self.current = None


class LocalChecker:
    """Goal-directed model checker for one formula on one graph.

    Verdicts for closed subformulas are memoized for the lifetime of the
    checker, so asking about many nodes of the same formula shares work.
    """

    def __init__(self, f: Formula, g: InducedPreferenceGraph, deadline: float | None = None,
                 stats: EvalStats | None = None):
        if free_vars(f):
            raise FormulaError(f"formula has free variables {sorted(free_vars(f))}")
        self.c = compile_formula(f, g)
        self.g = g
        self.deadline = deadline
        self.memo = {}
        self.stats = stats if stats is not None else EvalStats()

    def check(self, node: int) -> bool:
        return self._sat(self.c.root, node, ())

    def _tick(self):
        self.stats.goals += 1
        if self.deadline is not None and self.stats.goals % 256 == 0:
            if time.monotonic() > self.deadline:
                raise EvaluationTimeout("evaluation deadline exceeded")

    def _sat(self, fid, n, frames):
        closed = self.c.depth[fid] == 0
        if closed:
            key = (fid, n)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
            frames = ()
        node = self.c.nodes[fid]
        kind = node[0]
        if kind == TT:
            out = True
        elif kind == FF:
            out = False
        elif kind == ATOM:
            out = self.g.holds(n, node[1], node[2])
        elif kind == NOT:
            out = n != BOTTOM and not self._sat(node[1], n, ())
        elif kind == AND:
            out = all(self._sat(p, n, frames) for p in node[1])
        elif kind == OR:
            out = any(self._sat(p, n, frames) for p in node[1])
        elif kind == DIA:
            _, coalition, child, forward = node
            self._tick()
            out = any(
                self._sat(child, m, frames)
                for m in sorted(self.g._step(n, coalition, forward))
            )
        elif kind == VAR:
            out = self._read(frames[-1 - node[1]], n)
        elif kind == MU:
            out = self._solve(fid, n, frames, closed)
        else:  # pragma: no cover
            raise AssertionError(kind)
        if closed:
            self.memo[(fid, n)] = out
        return out

    def _read(self, frame, m):
        if frame.current is None:  # pragma: no cover - guarded by validation
            raise FormulaError("fixpoint variable read outside its binder")
        values = frame.values
        if m in values:
            if not values[m]:
                frame.deps[m].add(frame.current)
            return values[m]
        if self.c.depth[frame.fid] == 0:
            hit = self.memo.get((frame.fid, m))
            if hit is not None:
                return hit
        values[m] = False
        frame.deps[m].add(frame.current)
        frame.worklist.append(m)
        return False

    def _solve(self, fid, root, frames, closed):
        body = self.c.nodes[fid][1]
        frame = _Frame(fid)
        frame.values[root] = False
        frame.worklist.append(root)
        inner = frames + (frame,)
        while frame.worklist:
            n = frame.worklist.pop()
            if frame.values[n]:
                continue
            self._tick()
            saved, frame.current = frame.current, n
            ok = self._sat(body, n, inner)
            frame.current = saved
            if ok:
                frame.values[n] = True
                frame.worklist.extend(frame.deps.pop(n, ()))
        if closed:
            for m, v in frame.values.items():
                self.memo[(fid, m)] = v
        return frame.values[root]


def eval_local(f: Formula, g: InducedPreferenceGraph, node: int) -> bool:
    """Whether ``node`` satisfies the closed formula ``f``, exploring on demand."""
    return LocalChecker(f, g).check(node)
