import logging
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefq.errors import ValidationError
from prefq.formats import graph_to_text, profile_to_text
from prefq.gen import GraphGenConfig, ProfileGenConfig, gen_graph, gen_profile
from prefq.graph import BOTTOM, LazyGraph, induced_edges_of_statement
from prefq.query import SemanticsMode, parse_query
from prefq.direct import eval_direct


def _acyclic_per_stakeholder(profile):
    schema = profile.schema
    for stmts in profile.statements.values():
        d = nx.DiGraph()
        for s in stmts:
            d.add_edges_from(induced_edges_of_statement(schema, s))
        if not nx.is_directed_acyclic_graph(d):
            return False
    return True


def test_example_profile_is_acyclic():
    p = gen_profile(ProfileGenConfig(1, 5, 4, 4))
    assert p.schema.size == 32
    assert len(p.statements) == 4
    assert _acyclic_per_stakeholder(p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(1, 6), st.integers(1, 5), st.integers(0, 8))
def test_generated_profiles_are_acyclic(seed, v, a, k):
    p = gen_profile(ProfileGenConfig(seed, v, a, k))
    assert _acyclic_per_stakeholder(p)
    assert all(len(stmts) <= k for stmts in p.statements.values())


def test_empty_statement_lists():
    p = gen_profile(ProfileGenConfig(3, 3, 2, 0))
    assert all(stmts == () for stmts in p.statements.values())
    g = LazyGraph(p)
    for mode in SemanticsMode:
        assert eval_direct(parse_query("P(tt, tt, {1,2})"), g, mode) == set(range(8))


def test_profile_determinism():
    cfg = ProfileGenConfig(42, 6, 5, 5)
    assert profile_to_text(gen_profile(cfg)) == profile_to_text(gen_profile(cfg))
    assert profile_to_text(gen_profile(cfg)) != profile_to_text(gen_profile(ProfileGenConfig(43, 6, 5, 5)))


def test_exhaustion_is_reported(caplog):
    with caplog.at_level(logging.WARNING, logger="prefq.gen"):
        p = gen_profile(ProfileGenConfig(0, 1, 1, 3))
    assert len(p.statements[1]) < 3
    assert "no consistent statement" in caplog.text


@pytest.mark.parametrize("kwargs", [
    dict(seed=0, n_variables=0, n_stakeholders=1, statements_per_stakeholder=1),
    dict(seed=0, n_variables=1, n_stakeholders=1, statements_per_stakeholder=-1),
    dict(seed=0, n_variables=1, n_stakeholders=1, statements_per_stakeholder=1,
         statement_mix=(0.5, 0.5, 0.5, 0.0)),
])
def test_bad_profile_configs(kwargs):
    with pytest.raises(ValidationError):
        ProfileGenConfig(**kwargs)


def _incidences(g):
    return Counter(a for e in g.edge_list() for a in e.coalition)


def test_benchmark_config_sizes():
    g = gen_graph(GraphGenConfig(7, 10, 100, 200))
    per = _incidences(g)
    assert sum(per.values()) <= 2000
    assert all(c <= 200 for c in per.values())
    assert len(g.successors(BOTTOM, {1})) == 100
    assert all(e.worse != e.better for e in g.edge_list())


def test_tiny_graph():
    g = gen_graph(GraphGenConfig(0, 1, 2, 1))
    assert g.n_edges <= 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(1, 6), st.integers(1, 60), st.integers(1, 100))
def test_graph_caps_and_determinism(seed, a, n, e):
    cfg = GraphGenConfig(seed, a, n, e)
    g = gen_graph(cfg)
    assert all(c <= e for c in _incidences(g).values())
    assert graph_to_text(g) == graph_to_text(gen_graph(cfg))


def test_graph_config_parse():
    cfg = GraphGenConfig.parse("30,400,400", seed=5)
    assert (cfg.n_stakeholders, cfg.n_outcomes, cfg.max_edges_per_stakeholder, cfg.seed) == (30, 400, 400, 5)
    assert cfg.label == "30,400,400"
    for bad in ("1,2", "a,b,c", "0,1,1"):
        with pytest.raises(ValidationError):
            GraphGenConfig.parse(bad)
