"""One entry point over the three evaluation routes."""
from __future__ import annotations

import time

from .direct import eval_direct
from .graph import BOTTOM, InducedPreferenceGraph
from .mucalc import Atom, Conj, Disj, EvalStats, Ff, LocalChecker, eval_global
from .query import Query, SemanticsMode, validate_query
from .translate import translate

ENGINES = ("direct", "mc-global", "mc-local")


def candidates(f, g: InducedPreferenceGraph):
    """Outcome nodes that can possibly satisfy ``f``, or ``None`` for all of them.

    Only the propositional skeleton is inspected, so a query guarded by a
    proposition never enumerates outcomes outside that proposition.
    """
    if isinstance(f, Ff):
        return set()
    if isinstance(f, Atom):
        schema = g.schema
        var = schema.var_index(f.variable)
        return set(g.nodes_with(var, schema.value_index(var, f.value)))
    if isinstance(f, Conj):
        left = candidates(f.left, g)
        if left is not None and not left:
            return left
        right = candidates(f.right, g)
        if left is None or right is None:
            return right if left is None else left
        return left & right
    if isinstance(f, Disj):
        left = candidates(f.left, g)
        if left is None:
            return None
        right = candidates(f.right, g)
        return None if right is None else left | right
    return None


def evaluate(
    q: Query,
    g: InducedPreferenceGraph,
    mode: SemanticsMode | str,
    engine: str = "mc-local",
    timeout: float | None = None,
    stats: EvalStats | None = None,
) -> list[int]:
    """Sorted outcome nodes answering ``q`` under ``mode`` using ``engine``."""
    mode = SemanticsMode(mode) if isinstance(mode, SemanticsMode) else SemanticsMode.parse(mode)
    validate_query(q, g.schema, g.stakeholders)
    if engine == "direct":
        return sorted(eval_direct(q, g, mode))
    formula = translate(q, mode).formula
    if engine == "mc-global":
        return sorted(eval_global(formula, g, stats=stats) - {BOTTOM})
    if engine == "mc-local":
        deadline = None if timeout is None else time.monotonic() + timeout
        checker = LocalChecker(formula, g, deadline=deadline, stats=stats)
        pool = candidates(formula, g)
        pool = g.outcome_nodes() if pool is None else sorted(pool)
        return [n for n in pool if checker.check(n)]
    raise ValueError(f"unknown engine {engine!r} (choose from {', '.join(ENGINES)})")
