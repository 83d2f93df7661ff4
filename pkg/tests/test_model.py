import pytest

from prefq.errors import CapacityError, ValidationError
from prefq.model import (
    TRUE,
    Direct,
    IntraVariable,
    PartialAssignment,
    PreferenceProfile,
    VariableSchema,
    outcome_space,
    satisfies,
    validate_statement,
)

SCHEMA = VariableSchema.of({"E": ["code", "noCode"], "A": ["simple", "complex"], "F": ["fix", "noFix"]})


def test_outcome_space_running_schema():
    space = outcome_space(SCHEMA)
    assert len(space) == 8
    assert space[0] == ("code", "simple", "fix")
    assert space[-1] == ("noCode", "complex", "noFix")


def test_outcome_space_singleton_and_binary():
    assert outcome_space(VariableSchema.of({"X": ["x"]})) == [("x",)]
    ten = VariableSchema(tuple((f"x{i}", ("v0", "v1")) for i in range(10)))
    assert len(outcome_space(ten)) == 1024


def test_outcome_space_capacity():
    with pytest.raises(CapacityError):
        outcome_space(SCHEMA, limit=7)


def test_index_round_trip():
    for i, o in enumerate(outcome_space(SCHEMA)):
        assert SCHEMA.index(o) == i
        assert SCHEMA.outcome(i) == o


def test_satisfies():
    fix = PartialAssignment.of(F="fix")
    assert satisfies(SCHEMA, ("code", "simple", "fix"), fix)
    assert not satisfies(SCHEMA, ("code", "simple", "noFix"), fix)
    assert satisfies(SCHEMA, ("noCode", "complex", "noFix"), TRUE)


@pytest.mark.parametrize("spec", [
    {"E": []},
    {"E": ["a", "a"]},
    {"tt": ["a"]},
    {"1x": ["a"]},
])
def test_bad_schemas(spec):
    with pytest.raises(ValidationError):
        VariableSchema.of(spec)


@pytest.mark.parametrize("stmt", [
    IntraVariable("E", "code", "code"),
    IntraVariable("E", "code", "nope"),
    IntraVariable("Q", "code", "noCode"),
    IntraVariable("E", "code", "noCode", PartialAssignment.of(E="code")),
    IntraVariable("E", "code", "noCode", PartialAssignment.of(F="fix"), frozenset({"F"})),
    IntraVariable("E", "code", "noCode", less_important=frozenset({"E"})),
    Direct(("code", "simple", "fix"), ("code", "simple", "fix")),
    Direct(("code", "simple"), ("noCode", "simple")),
])
def test_invalid_statements(stmt):
    with pytest.raises(ValidationError):
        validate_statement(SCHEMA, stmt)


def test_profile_rejects_bad_ids_and_dedups():
    p1 = IntraVariable("E", "code", "noCode")
    with pytest.raises(ValidationError):
        PreferenceProfile(SCHEMA, {0: (p1,)})
    prof = PreferenceProfile(SCHEMA, {2: (p1, p1), 1: ()})
    assert prof.stakeholders == frozenset({1, 2})
    assert prof.statements[2] == (p1,)
