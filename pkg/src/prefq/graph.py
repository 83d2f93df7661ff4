"""Multi-stakeholder induced preference graphs.

Nodes are ints: ``0 .. n_outcomes-1`` address outcomes in canonical order and
:data:`BOTTOM` is the synthetic least-preferred node.  An edge ``worse -> better``
carries the set of stakeholders whose statements induce it.

Two concrete graphs share one traversal surface:

* :class:`LazyGraph` derives neighbours from a :class:`PreferenceProfile` on
  demand and never enumerates the outcome space unless asked for ⊥'s successors.
* :class:`ExplicitGraph` stores an annotated edge list (materialized profiles,
  random benchmark graphs, graph files).
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import CapacityError, SemanticError, ValidationError
from .model import (
    DEFAULT_LIMIT,
    Direct,
    PreferenceProfile,
    PreferenceStatement,
    VariableSchema,
    validate_statement,
)

BOTTOM = -1
FORWARD = "forward"
REVERSE = "reverse"


@dataclass(frozen=True)
class AnnotatedEdge:
    worse: int
    better: int
    coalition: frozenset[int]


def node_label(schema: VariableSchema, node: int):
    """Outcome tuple for an outcome node, ``None`` for ⊥."""
    return None if node == BOTTOM else schema.outcome(node)


def induced_edges_of_statement(
    schema: VariableSchema, s: PreferenceStatement, limit: int = DEFAULT_LIMIT
) -> list[tuple[tuple, tuple]]:
    """All ``(worse, better)`` outcome pairs induced by one statement.

    Variables in the statement's less-important set vary freely and
    independently on both endpoints; condition variables are fixed by the
    condition; every other variable is equal on both ends.
    """
    validate_statement(schema, s)
    if isinstance(s, Direct):
        return [(s.worse, s.better)]
    cond = s.condition.as_dict()
    free = s.less_important
    rest = [n for n in schema.names if n != s.variable and n not in cond and n not in free]
    ydoms = [schema.domain(y) for y in schema.names if y in free]
    count = math.prod(len(schema.domain(n)) for n in rest) * math.prod(len(d) for d in ydoms) ** 2
    if count > limit:
        raise CapacityError(f"statement induces {count} edges, limit is {limit}")

    def build(shared, ys, value):
        shared_it, ys_it = iter(shared), iter(ys)
        out = []
        for name in schema.names:
            if name == s.variable:
                out.append(value)
            elif name in cond:
                out.append(cond[name])
            elif name in free:
                out.append(next(ys_it))
            else:
                out.append(next(shared_it))
        return tuple(out)

    pairs = []
    for shared in itertools.product(*(schema.domain(n) for n in rest)):
        for ys_worse in itertools.product(*ydoms):
            worse = build(shared, ys_worse, s.dispreferred)
            for ys_better in itertools.product(*ydoms):
                pairs.append((worse, build(shared, ys_better, s.preferred)))
    return pairs


class InducedPreferenceGraph:
    """Common traversal surface; subclasses supply :meth:`_step`."""

    schema: VariableSchema
    stakeholders: frozenset[int]

    @property
    def n_outcomes(self) -> int:
        return self.schema.size

    def outcome_nodes(self) -> range:
        return range(self.schema.size)

    def nodes(self) -> Iterator[int]:
        """All nodes in canonical order, ⊥ last."""
        yield from range(self.schema.size)
        yield BOTTOM

    def outcome(self, node: int):
        return node_label(self.schema, node)

    def node(self, outcome) -> int:
        return self.schema.index(tuple(outcome))

    def holds(self, node: int, var: int, value: int) -> bool:
        """Whether proposition ``variable[var] = domain[value]`` labels ``node``."""
        if node == BOTTOM:
            return False
        return (node // self.schema.weights[var]) % len(self.schema.variables[var][1]) == value

    def nodes_with(self, var: int, value: int) -> Iterator[int]:
        """Outcome nodes labelled ``var=value``, enumerated without scanning the space."""
        schema = self.schema
        others = [i for i in range(len(schema)) if i != var]
        base = value * schema.weights[var]
        for combo in itertools.product(*(range(len(schema.variables[i][1])) for i in others)):
            yield base + sum(d * schema.weights[i] for d, i in zip(combo, others))

    def check_coalition(self, coalition) -> frozenset[int]:
        coalition = frozenset(coalition)
        if not coalition:
            raise SemanticError("empty coalition")
        unknown = coalition - self.stakeholders
        if unknown:
            raise SemanticError(f"unknown stakeholder id(s) {sorted(unknown)}")
        return coalition

    def successors(self, node: int, coalition, direction: str = FORWARD) -> set[int]:
        """Neighbours of ``node`` along edges whose annotation meets ``coalition``.

        ``forward`` follows ``worse -> better``; ``reverse`` follows the edge backwards.
        """
        coalition = self.check_coalition(coalition)
        if direction not in (FORWARD, REVERSE):
            raise ValueError(f"bad direction {direction!r}")
        if node != BOTTOM and not 0 <= node < self.schema.size:
            raise ValidationError(f"node {node} is not in the graph")
        return self._step(node, coalition, direction == FORWARD)

    def _step(self, node, coalition, forward):  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class _Flip:
    """One intra-variable statement compiled to index arithmetic."""

    x_weight: int
    x_size: int
    preferred: int
    dispreferred: int
    cond: tuple  # ((weight, size, digit), ...)
    free: tuple  # ((weight, size), ...)
    offsets: tuple  # every combination of free-variable contributions


class LazyGraph(InducedPreferenceGraph):
    """Induced graph of a profile; neighbours are generated from statements on demand."""

    def __init__(self, profile: PreferenceProfile):
        self.profile = profile
        self.schema = profile.schema
        self.stakeholders = profile.stakeholders
        schema = self.schema
        flips = defaultdict(list)
        directs_fwd = defaultdict(lambda: defaultdict(set))
        directs_rev = defaultdict(lambda: defaultdict(set))
        for sid, stmts in profile.statements.items():
            for s in stmts:
                if isinstance(s, Direct):
                    w, b = schema.index(s.worse), schema.index(s.better)
                    directs_fwd[sid][w].add(b)
                    directs_rev[sid][b].add(w)
                    continue
                xi = schema.var_index(s.variable)
                cond = tuple(
                    (schema.weights[i], len(schema.variables[i][1]), schema.value_index(i, v))
                    for i, v in ((schema.var_index(n), v) for n, v in s.condition.bindings)
                )
                free_idx = sorted(schema.var_index(y) for y in s.less_important)
                free = tuple((schema.weights[i], len(schema.variables[i][1])) for i in free_idx)
                offsets = tuple(
                    sum(d * w for d, (w, _) in zip(combo, free))
                    for combo in itertools.product(*(range(size) for _, size in free))
                )
                flips[sid].append(
                    _Flip(
                        schema.weights[xi],
                        len(schema.variables[xi][1]),
                        schema.value_index(xi, s.preferred),
                        schema.value_index(xi, s.dispreferred),
                        cond,
                        free,
                        offsets,
                    )
                )
        self._flips = {sid: tuple(v) for sid, v in flips.items()}
        self._directs = (
            {sid: {k: frozenset(v) for k, v in d.items()} for sid, d in directs_fwd.items()},
            {sid: {k: frozenset(v) for k, v in d.items()} for sid, d in directs_rev.items()},
        )

    def _step(self, node, coalition, forward):
        if node == BOTTOM:
            return set(range(self.schema.size)) if forward else set()
        out = set()
        directs = self._directs[0 if forward else 1]
        for sid in coalition:
            d = directs.get(sid)
            if d and node in d:
                out.update(d[node])
            for f in self._flips.get(sid, ()):
                src, dst = (f.dispreferred, f.preferred) if forward else (f.preferred, f.dispreferred)
                if (node // f.x_weight) % f.x_size != src:
                    continue
                if not all((node // cw) % cs == cd for cw, cs, cd in f.cond):
                    continue
                base = node + (dst - src) * f.x_weight
                for fw, fs in f.free:
                    base -= ((node // fw) % fs) * fw
                for off in f.offsets:
                    out.add(base + off)
        if not forward:
            out.add(BOTTOM)
        return out


class ExplicitGraph(InducedPreferenceGraph):
    """Graph stored as an annotated edge list, with ⊥ edges added implicitly."""

    def __init__(
        self,
        schema: VariableSchema,
        stakeholders: Iterable[int],
        edges: Mapping[tuple[int, int], Iterable[int]] | Iterable[AnnotatedEdge],
    ):
        self.schema = schema
        self.stakeholders = frozenset(stakeholders)
        if not self.stakeholders:
            raise ValidationError("graph needs at least one stakeholder")
        n = schema.size
        merged = defaultdict(set)
        items = edges.items() if isinstance(edges, Mapping) else ((
            (e.worse, e.better), e.coalition) for e in edges)
        for (w, b), ann in items:
            ann = set(ann)
            if b == BOTTOM:
                raise ValidationError("no edge may end at the bottom node")
            if w == BOTTOM:
                continue
            if not (0 <= w < n and 0 <= b < n):
                raise ValidationError(f"edge {w} -> {b} references a node outside 0..{n - 1}")
            if not ann:
                raise ValidationError(f"edge {w} -> {b} has an empty annotation")
            if not ann <= self.stakeholders:
                raise ValidationError(
                    f"edge {w} -> {b} names unknown stakeholders {sorted(ann - self.stakeholders)}"
                )
            merged[(w, b)] |= ann
        everyone = self.stakeholders
        fwd = defaultdict(dict)
        rev = defaultdict(dict)
        for (w, b), ann in merged.items():
            ann = frozenset(ann)
            fwd[w][b] = ann
            rev[b][w] = ann
        fwd[BOTTOM] = {o: everyone for o in range(n)}
        for o in range(n):
            rev[o][BOTTOM] = everyone
        self._fwd = dict(fwd)
        self._rev = dict(rev)
        self._n_edges = len(merged)

    @property
    def n_edges(self) -> int:
        """Number of annotated edges, ⊥ edges excluded."""
        return self._n_edges

    def edge_list(self, include_bottom: bool = False) -> list[AnnotatedEdge]:
        out = []
        for w in sorted(self._fwd):
            if w == BOTTOM and not include_bottom:
                continue
            for b in sorted(self._fwd[w]):
                out.append(AnnotatedEdge(w, b, self._fwd[w][b]))
        if include_bottom:
            out.sort(key=lambda e: (e.worse != BOTTOM, e.worse, e.better))
        return out

    def _step(self, node, coalition, forward):
        adj = (self._fwd if forward else self._rev).get(node)
        if not adj:
            return set()
        return {m for m, ann in adj.items() if not ann.isdisjoint(coalition)}


def materialize(g: InducedPreferenceGraph, limit: int = DEFAULT_LIMIT) -> ExplicitGraph:
    """Explicit edge list of ``g``; explicit graphs are returned unchanged."""
    if isinstance(g, ExplicitGraph):
        return g
    if not isinstance(g, LazyGraph):
        raise TypeError(f"cannot materialize {type(g).__name__}")
    schema = g.schema
    if schema.size > limit:
        raise CapacityError(f"outcome space has {schema.size} outcomes, limit is {limit}")
    edges = defaultdict(set)
    total = 0
    for sid, stmts in g.profile.statements.items():
        for s in stmts:
            pairs = induced_edges_of_statement(schema, s, limit)
            total += len(pairs)
            if total > limit:
                raise CapacityError(f"more than {limit} edge incidences")
            for worse, better in pairs:
                edges[(schema.index(worse), schema.index(better))].add(sid)
    return ExplicitGraph(schema, g.stakeholders, edges)


class TouchRecorder(InducedPreferenceGraph):
    """Delegating graph that records every node an evaluator inspects or is handed."""

    def __init__(self, inner: InducedPreferenceGraph):
        self.inner = inner
        self.schema = inner.schema
        self.stakeholders = inner.stakeholders
        self.touched: set[int] = set()

    def outcome_nodes(self):
        nodes = self.inner.outcome_nodes()
        self.touched.update(nodes)
        return nodes

    def nodes(self):
        for n in self.inner.nodes():
            self.touched.add(n)
            yield n

    def holds(self, node, var, value):
        self.touched.add(node)
        return self.inner.holds(node, var, value)

    def nodes_with(self, var, value):
        for n in self.inner.nodes_with(var, value):
            self.touched.add(n)
            yield n

    def _step(self, node, coalition, forward):
        self.touched.add(node)
        out = self.inner._step(node, coalition, forward)
        self.touched.update(out)
        return out
