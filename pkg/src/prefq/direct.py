"""Reference evaluator: query answers by explicit reachability.

This is the oracle the model-checking engines are checked against, so it
follows the set definitions literally and keeps no state between calls.
Reachability runs over a materialized graph.

The universe of ``tt`` contains ⊥ (an outcome with no other relation still
dominates ⊥), negation complements within the outcomes only, and the
top-level answer never contains ⊥.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable

from .graph import BOTTOM, ExplicitGraph, InducedPreferenceGraph, materialize
from .model import DEFAULT_LIMIT
from .query import And, FalseQ, Not, Or, Pref, Prop, Query, SemanticsMode, TrueQ


def single(a: int) -> frozenset[int]:
    return frozenset([a])


def _reach(g: ExplicitGraph, targets: Iterable[int], coalition, forward: bool) -> set[int]:
    coalition = g.check_coalition(coalition)
    seen = set()
    queue = deque(sorted(targets))
    while queue:
        n = queue.popleft()
        for m in sorted(g._step(n, coalition, forward)):
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return seen


def dominators(g: InducedPreferenceGraph, targets: Iterable[int], who) -> set[int]:
    """Nodes with a non-empty path *from* some target, every edge endorsed by ``who``.

    ``who`` is a coalition: a singleton gives one stakeholder's dominance, a
    larger set gives the chained relation where each edge needs only one
    endorsing member.
    """
    return _reach(materialize(g), targets, who, forward=True)


def dominated(g: InducedPreferenceGraph, targets: Iterable[int], who) -> set[int]:
    """Nodes with a non-empty path *to* some target, every edge endorsed by ``who``."""
    return _reach(materialize(g), targets, who, forward=False)


def eval_direct(
    q: Query, g: InducedPreferenceGraph, mode: SemanticsMode, limit: int = DEFAULT_LIMIT
) -> set[int]:
    """Outcome nodes in the answer to ``q`` (⊥ stripped)."""
    eg = materialize(g, limit)
    return _eval(q, eg, SemanticsMode(mode), set(eg.outcome_nodes())) - {BOTTOM}


def _eval(q, g, mode, outcomes):
    if isinstance(q, TrueQ):
        return outcomes | {BOTTOM}
    if isinstance(q, FalseQ):
        return set()
    if isinstance(q, Prop):
        schema = g.schema
        var = schema.var_index(q.variable)
        return set(g.nodes_with(var, schema.value_index(var, q.value)))
    if isinstance(q, Not):
        return outcomes - _eval(q.operand, g, mode, outcomes)
    if isinstance(q, And):
        return _eval(q.left, g, mode, outcomes) & _eval(q.right, g, mode, outcomes)
    if isinstance(q, Or):
        return _eval(q.left, g, mode, outcomes) | _eval(q.right, g, mode, outcomes)
    if isinstance(q, Pref):
        return _eval(q.psi1, g, mode, outcomes) & _pref(q, g, mode, outcomes)
    raise TypeError(f"not a query: {q!r}")


def _pref(q, g, mode, outcomes):
    return preferred_part(g, _eval(q.psi2, g, mode, outcomes), q.coalition, mode)


def preferred_part(
    g: InducedPreferenceGraph, targets: Iterable[int], coalition, mode: SemanticsMode
) -> set[int]:
    """Witness and agreement part of ``P(_, psi2, coalition)`` given psi2's node set.

    The result is a subset of the outcomes; the caller intersects it with
    psi1's set.
    """
    eg = materialize(g)
    outcomes = set(eg.outcome_nodes())
    targets = set(targets)
    members = sorted(eg.check_coalition(coalition))
    if mode is SemanticsMode.CONSENSUS:
        result = outcomes
        for a in members:
            result &= _reach(eg, targets, single(a), True)
            result -= _reach(eg, targets, single(a), False)
        return result
    if mode.chained_witness:
        witness = _reach(eg, targets, members, True)
    else:
        witness = set().union(*(_reach(eg, targets, single(a), True) for a in members))
    if mode.chained_agreement:
        below = _reach(eg, targets, members, False)
    else:
        below = set().union(*(_reach(eg, targets, single(a), False) for a in members))
    return (outcomes - below) & witness


def outcomes_of(g: InducedPreferenceGraph, nodes: Iterable[int]) -> list[tuple]:
    """Sorted outcome tuples for a node set."""
    return [g.outcome(n) for n in sorted(nodes) if n != BOTTOM]
