import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefq.errors import SemanticError
from prefq.model import IntraVariable, PreferenceProfile
from prefq.direct import dominated, dominators, eval_direct, single
from prefq.formats import abstract_schema
from prefq.graph import BOTTOM, ExplicitGraph, LazyGraph, materialize
from prefq.query import COLLABORATIVE, Not, Pref, Prop, SemanticsMode, TrueQ, parse_query

from conftest import (
    LATTICE,
    lattice_safe,
    lattice_violations,
    random_instance,
    random_query,
    singletonize,
    tuples,
)

CS, W1A2, W1A1, W2A2, W2A1 = SemanticsMode


def no_code(g):
    return set(g.nodes_with(0, g.schema.value_index(0, "noCode")))


def test_dominators_examples(running):
    t = no_code(running)
    assert tuples(running, dominators(running, t, single(1))) == {
        ("code", "simple", "noFix"), ("code", "simple", "fix"),
        ("code", "complex", "fix"), ("code", "complex", "noFix"),
    }
    assert len(dominators(running, t, single(2))) == 3
    chained = tuples(running, dominators(running, t, {1, 2}))
    assert len(chained) == 6 and ("noCode", "simple", "noFix") in chained


def test_dominated_examples(running):
    t = no_code(running)
    assert BOTTOM in dominated(running, t, single(1))
    assert tuples(running, dominated(running, t, single(2))) == {
        ("code", "complex", "noFix"), ("noCode", "complex", "fix")
    }
    assert dominated(running, t, single(1)) == {BOTTOM}
    # (noCode,complex,noFix) is chained below (noCode,simple,noFix): stakeholder 1
    # lifts it to (code,complex,noFix), which stakeholder 2 places below the target.
    assert tuples(running, dominated(running, t, {1, 2})) == {
        ("code", "complex", "fix"), ("code", "complex", "noFix"), ("noCode", "complex", "fix"),
        ("noCode", "complex", "noFix"),
    }


def test_bottom_dominates_nothing(running):
    assert BOTTOM not in dominators(running, set(range(8)) | {BOTTOM}, {1, 2, 3})


def test_unknown_stakeholder(running):
    with pytest.raises(SemanticError):
        dominators(running, {0}, single(4))


GOLDEN = {
    W1A2: {("code", "simple", "fix"), ("code", "simple", "noFix"), ("noCode", "simple", "fix")},
    W1A1: {("code", "simple", "fix"), ("code", "simple", "noFix"), ("noCode", "simple", "fix"),
           ("code", "complex", "fix")},
    W2A2: {("code", "simple", "fix"), ("code", "simple", "noFix"), ("noCode", "simple", "fix"),
           ("noCode", "simple", "noFix")},
    W2A1: {("code", "simple", "fix"), ("code", "simple", "noFix"), ("noCode", "simple", "fix"),
           ("code", "complex", "fix"), ("noCode", "simple", "noFix")},
}


@pytest.mark.parametrize("mode", COLLABORATIVE)
def test_collaborative_golden(running, mode):
    q = parse_query("P(tt, E=noCode, {1,2})")
    assert tuples(running, eval_direct(q, running, mode)) == GOLDEN[mode]


def test_single_stakeholder_examples(running):
    q1 = parse_query("P(tt, E=code, {1})")
    q2 = parse_query("P(tt, E=code, {2})")
    for mode in SemanticsMode:
        assert tuples(running, eval_direct(q1, running, mode)) == {
            ("code", "simple", "noFix"), ("code", "complex", "noFix")
        }
        assert tuples(running, eval_direct(q2, running, mode)) == {
            ("code", "simple", "fix"), ("noCode", "simple", "noFix")
        }


def test_non_dominated_sets(running):
    nd1 = eval_direct(parse_query("P(tt, tt, {1})"), running, CS)
    assert tuples(running, nd1) == {("code", "simple", "noFix"), ("code", "complex", "noFix")}
    nd2 = tuples(running, eval_direct(parse_query("P(tt, tt, {2})"), running, W2A2))
    assert nd2 == {("code", "simple", "noFix"), ("code", "simple", "fix"),
                   ("noCode", "simple", "noFix"), ("noCode", "complex", "noFix")}


def test_consensus_examples(running):
    assert tuples(running, eval_direct(parse_query("P(tt, tt, {1,2})"), running, CS)) == {
        ("code", "simple", "noFix")
    }
    assert eval_direct(parse_query("P(tt, E=code, {1,2})"), running, CS) == set()


def test_cycle_safety():
    g = ExplicitGraph(abstract_schema(2), [1], {(0, 1): {1}, (1, 0): {1}})
    for psi2 in ("tt", "node=n0", "node=n1"):
        q = parse_query(f"P(tt, {psi2}, {{1}})")
        for mode in SemanticsMode:
            assert eval_direct(q, g, mode) == set()


def _oracle_reach(g, targets, coalition, forward):
    """Non-empty filtered path reachability via networkx."""
    coalition = set(coalition)
    d = nx.DiGraph()
    d.add_nodes_from(g.nodes())
    for e in g.edge_list(include_bottom=True):
        if e.coalition & coalition:
            d.add_edge(e.worse, e.better) if forward else d.add_edge(e.better, e.worse)
    out = set()
    for t in targets:
        for s in d.successors(t):
            out.add(s)
            out |= nx.descendants(d, s)
    return out


seeds = st.integers(0, 10**6)


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_reachability_matches_networkx(seed, data):
    g, rng = random_instance(seed)
    eg = materialize(g)
    ids = sorted(g.stakeholders)
    coalition = data.draw(st.sets(st.sampled_from(ids), min_size=1))
    targets = data.draw(st.sets(st.sampled_from(list(eg.nodes()))))
    assert dominators(eg, targets, coalition) == _oracle_reach(eg, targets, coalition, True)
    assert dominated(eg, targets, coalition) == _oracle_reach(eg, targets, coalition, False)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_lattice_and_singleton_collapse(seed):
    g, rng = random_instance(seed)
    q = random_query(rng, g.schema, g.stakeholders, 2)
    assert lattice_violations(g, q) == []
    sq = singletonize(q, rng)
    answers = [eval_direct(sq, g, m) for m in SemanticsMode]
    assert all(x == answers[0] for x in answers)


def test_lattice_needs_positive_occurrence():
    # Under negation the inclusions flip, so the whole-query check is skipped.
    g, rng = random_instance(3668)
    q = parse_query("!P(tt, !x5=v0, {1,2,3})")
    assert not lattice_safe(q)
    assert lattice_violations(g, q) == []
    r = {m: eval_direct(q, g, m) for m in COLLABORATIVE}
    assert any(not r[lo] <= r[hi] for lo, hi in LATTICE)


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_coalition_monotone_witness(seed, data):
    g, rng = random_instance(seed)
    ids = sorted(g.stakeholders)
    small = data.draw(st.sets(st.sampled_from(ids), min_size=1))
    big = small | data.draw(st.sets(st.sampled_from(ids)))
    targets = data.draw(st.sets(st.sampled_from(list(g.outcome_nodes()))))
    assert dominators(g, targets, small) <= dominators(g, targets, big)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_double_negation_and_no_bottom(seed):
    g, rng = random_instance(seed)
    q = random_query(rng, g.schema, g.stakeholders, 2)
    for mode in SemanticsMode:
        plain = eval_direct(q, g, mode)
        assert BOTTOM not in plain
        assert eval_direct(Not(Not(q)), g, mode) == plain


def test_cyclic_profile_excludes_mutual_dominance(running_profile):
    p = PreferenceProfile(running_profile.schema, {
        1: (IntraVariable("E", "code", "noCode"), IntraVariable("E", "noCode", "code")),
    })
    g = LazyGraph(p)
    q = Pref(TrueQ(), Prop("E", "code"), frozenset({1}))
    assert eval_direct(q, g, CS) == set()
