"""Seeded random instances for the two benchmark setups.

Randomness comes from :class:`random.Random` (MT19937) seeded with the
config's integer seed.  Only ``random()``, ``randrange()``, ``choice()``,
``choices()`` and ``sample()`` are used; their outputs are stable across
platforms and CPython versions.  Same config, same instance.
"""
from __future__ import annotations

import graphlib
import logging
import random
from collections import defaultdict
from dataclasses import dataclass

from .errors import CapacityError, ValidationError
from .formats import abstract_schema
from .graph import ExplicitGraph, induced_edges_of_statement
from .model import (
    DEFAULT_LIMIT,
    Direct,
    IntraVariable,
    PartialAssignment,
    PreferenceProfile,
    VariableSchema,
)

log = logging.getLogger(__name__)

STATEMENT_KINDS = ("unconditional", "conditional", "importance", "direct")


@dataclass(frozen=True)
class ProfileGenConfig:
    seed: int
    n_variables: int
    n_stakeholders: int
    statements_per_stakeholder: int
    statement_mix: tuple[float, float, float, float] = (0.4, 0.3, 0.2, 0.1)
    max_retries: int = 50

    def __post_init__(self):
        if self.n_variables < 1 or self.n_stakeholders < 1:
            raise ValidationError("need at least one variable and one stakeholder")
        if self.statements_per_stakeholder < 0:
            raise ValidationError("statement count must be non-negative")
        if len(self.statement_mix) != 4 or min(self.statement_mix) < 0:
            raise ValidationError("statement mix needs four non-negative proportions")
        if abs(sum(self.statement_mix) - 1.0) > 1e-9:
            raise ValidationError("statement mix must sum to 1")


@dataclass(frozen=True)
class GraphGenConfig:
    seed: int
    n_stakeholders: int
    n_outcomes: int
    max_edges_per_stakeholder: int

    def __post_init__(self):
        if min(self.n_stakeholders, self.n_outcomes, self.max_edges_per_stakeholder) < 1:
            raise ValidationError("graph config counts must be positive")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "GraphGenConfig":
        """``"10,100,200"`` -> stakeholders, outcomes, edges per stakeholder."""
        try:
            a, o, e = (int(x) for x in text.split(","))
        except ValueError:
            raise ValidationError(f"bad graph config {text!r}, expected 'S,O,E'") from None
        return cls(seed, a, o, e)

    @property
    def label(self) -> str:
        return f"{self.n_stakeholders},{self.n_outcomes},{self.max_edges_per_stakeholder}"


def binary_schema(n: int) -> VariableSchema:
    return VariableSchema(tuple((f"x{i}", ("v0", "v1")) for i in range(1, n + 1)))


def _sample_statement(rng: random.Random, schema: VariableSchema, kind: str):
    names = schema.names
    if kind == "direct":
        better = tuple(rng.choice(dom) for _, dom in schema.variables)
        worse = tuple(rng.choice(dom) for _, dom in schema.variables)
        return None if better == worse else Direct(better, worse)
    if len(names) == 1:
        kind = "unconditional"
    x = rng.choice(names)
    preferred, dispreferred = rng.sample(schema.domain(x), 2)
    others = [n for n in names if n != x]
    condition = PartialAssignment()
    less = frozenset()
    if kind == "conditional":
        k = rng.randrange(1, min(2, len(others)) + 1)
        cond_vars = rng.sample(others, k)
        condition = PartialAssignment(tuple((v, rng.choice(schema.domain(v))) for v in cond_vars))
    elif kind == "importance":
        k = rng.randrange(1, min(2, len(others)) + 1)
        less = frozenset(rng.sample(others, k))
    return IntraVariable(x, preferred, dispreferred, condition, less)


def _acyclic(edges) -> bool:
    graph = defaultdict(set)
    for w, b in edges:
        graph[b].add(w)
    try:
        tuple(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError:
        return False
    return True


def gen_profile(cfg: ProfileGenConfig, limit: int = DEFAULT_LIMIT) -> PreferenceProfile:
    """Random profile in which every stakeholder's own induced graph is acyclic.

    Candidates are drawn by statement kind according to the mix; one that
    would close a cycle (or repeats an earlier statement) is discarded and
    redrawn, up to ``max_retries`` times per slot.
    """
    rng = random.Random(cfg.seed)
    schema = binary_schema(cfg.n_variables)
    if schema.size > limit:
        raise CapacityError(f"outcome space has {schema.size} outcomes, limit is {limit}")
    statements = {}
    for sid in range(1, cfg.n_stakeholders + 1):
        chosen = []
        edges = set()
        for _ in range(cfg.statements_per_stakeholder):
            for _attempt in range(cfg.max_retries):
                kind = rng.choices(STATEMENT_KINDS, weights=cfg.statement_mix)[0]
                s = _sample_statement(rng, schema, kind)
                if s is None or s in chosen:
                    continue
                new = {
                    (schema.index(w), schema.index(b))
                    for w, b in induced_edges_of_statement(schema, s, limit)
                }
                if _acyclic(edges | new):
                    chosen.append(s)
                    edges |= new
                    break
            else:
                log.warning(
                    "stakeholder %d: no consistent statement after %d tries, keeping %d",
                    sid, cfg.max_retries, len(chosen),
                )
        statements[sid] = tuple(chosen)
    return PreferenceProfile(schema, statements)


def gen_graph(cfg: GraphGenConfig) -> ExplicitGraph:
    """Random annotated graph over abstract outcomes; cycles are allowed.

    Each stakeholder draws ``max_edges_per_stakeholder`` ordered pairs of
    distinct nodes uniformly; repeats collapse, so it ends up with at most that
    many edges.
    """
    rng = random.Random(cfg.seed)
    n = cfg.n_outcomes
    edges = defaultdict(set)
    if n > 1:
        for sid in range(1, cfg.n_stakeholders + 1):
            for _ in range(cfg.max_edges_per_stakeholder):
                w = rng.randrange(n)
                b = rng.randrange(n - 1)
                b += b >= w
                edges[(w, b)].add(sid)
    return ExplicitGraph(abstract_schema(n), range(1, cfg.n_stakeholders + 1), edges)
