import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefq.errors import ParseError
from prefq.formats import graph_to_text, parse_graph, parse_profile, profile_to_text
from prefq.gen import GraphGenConfig, ProfileGenConfig, gen_graph, gen_profile
from prefq.model import Direct, IntraVariable, PartialAssignment

from conftest import running_text


def test_running_fixture(running_profile):
    p = running_profile
    assert p.schema.names == ("E", "A", "F")
    assert p.stakeholders == frozenset({1, 2, 3})
    assert p.statements[1][1] == IntraVariable("F", "noFix", "fix", PartialAssignment.of(E="code"))
    assert p.statements[2][2] == Direct(("noCode", "simple", "noFix"), ("code", "complex", "noFix"))
    assert p.statements[3][2].less_important == frozenset({"A", "F"})


def test_profile_round_trip(running_profile):
    text = profile_to_text(running_profile)
    assert parse_profile(text) == running_profile
    assert profile_to_text(parse_profile(text)) == text


@pytest.mark.parametrize("text, line", [
    ("variables { E: a, b; }\nstakeholder 1 { E=a > E=a; }", 2),
    ("variables { E: a, b; }\nstakeholder 1 { E=a > F=b; }", 2),
    ("variables { E: a, b; F: c, d; }\nstakeholder 1 {\n outcome (E=a) > (E=b, F=c); }", 3),
    ("variables { E: a, b; }\nstakeholder 0 { }", 2),
    ("variables { E: a, b; }\nstakeholder 1 { }\nstakeholder 1 { }", 3),
    ("variables { E: a, b; }", 1),
    ("variables { E a, b; }", 1),
])
def test_profile_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_profile(text)
    assert info.value.line == line


def test_graph_format():
    g = parse_graph("# demo\ngraph 2 3\n0 -> 1 : {1}\n1 -> 2 : {1,2}\n0 -> 1 : {2}\n")
    assert g.n_outcomes == 3 and g.n_edges == 2
    assert graph_to_text(g) == "graph 2 3\n0 -> 1 : {1,2}\n1 -> 2 : {1,2}\n"


@pytest.mark.parametrize("text", [
    "", "graph 0 3", "graph 1 2\n0 -> 2 : {1}", "graph 1 2\n0 -> 1 : {2}", "graph 1 2\n0 => 1 : {1}",
])
def test_graph_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_generated_round_trips(seed):
    p = gen_profile(ProfileGenConfig(seed, 4, 3, 4))
    assert parse_profile(profile_to_text(p)) == p
    g = gen_graph(GraphGenConfig(seed, 3, 20, 15))
    assert graph_to_text(parse_graph(graph_to_text(g))) == graph_to_text(g)


def test_fixture_text_is_canonical_dsl():
    assert "stakeholder 3 { E=code > E=noCode; A=simple > A=complex; E=code > E=noCode over A, F; }" in running_text()
