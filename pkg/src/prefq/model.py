"""Preference vocabulary: variables, outcomes, conditions and statements.

Outcomes are plain tuples of value names in schema variable order.  Internally
the graph layer addresses outcomes by their index in the canonical enumeration
(mixed radix over the domains, first variable most significant), which
:class:`VariableSchema` converts to and from.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import CapacityError, ValidationError

DEFAULT_LIMIT = 2**20

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"tt", "ff", "P", "all", "mu", "if", "over", "outcome"})

Outcome = tuple


@dataclass(frozen=True)
class VariableSchema:
    """Ordered preference variables with ordered finite domains."""

    variables: tuple[tuple[str, tuple[str, ...]], ...]
    _var_index: dict = field(init=False, repr=False, compare=False)
    _val_index: tuple = field(init=False, repr=False, compare=False)
    _weights: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        variables = tuple((name, tuple(dom)) for name, dom in self.variables)
        object.__setattr__(self, "variables", variables)
        if not variables:
            raise ValidationError("schema needs at least one variable")
        var_index = {}
        for i, (name, dom) in enumerate(variables):
            _check_ident(name, "variable")
            if name in var_index:
                raise ValidationError(f"duplicate variable {name!r}")
            if not dom:
                raise ValidationError(f"variable {name!r} has an empty domain")
            for v in dom:
                _check_ident(v, "value")
            if len(set(dom)) != len(dom):
                raise ValidationError(f"duplicate value in domain of {name!r}")
            var_index[name] = i
        object.__setattr__(self, "_var_index", var_index)
        object.__setattr__(
            self, "_val_index", tuple({v: j for j, v in enumerate(dom)} for _, dom in variables)
        )
        weights = []
        w = 1
        for _, dom in reversed(variables):
            weights.append(w)
            w *= len(dom)
        object.__setattr__(self, "_weights", tuple(reversed(weights)))

    @classmethod
    def of(cls, spec: Mapping[str, Sequence[str]] | Iterable[tuple[str, Sequence[str]]]):
        items = spec.items() if isinstance(spec, Mapping) else spec
        return cls(tuple((k, tuple(v)) for k, v in items))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    @property
    def size(self) -> int:
        """Number of outcomes, the product of the domain sizes."""
        return math.prod(len(dom) for _, dom in self.variables)

    def __len__(self):
        return len(self.variables)

    def __contains__(self, name):
        return name in self._var_index

    def var_index(self, name: str) -> int:
        try:
            return self._var_index[name]
        except KeyError:
            raise ValidationError(f"unknown variable {name!r}") from None

    def domain(self, name: str) -> tuple[str, ...]:
        return self.variables[self.var_index(name)][1]

    def value_index(self, var: int, value: str) -> int:
        try:
            return self._val_index[var][value]
        except KeyError:
            name = self.variables[var][0]
            raise ValidationError(f"{value!r} is not in the domain of {name!r}") from None

    def has_value(self, name: str, value: str) -> bool:
        return name in self._var_index and value in self._val_index[self._var_index[name]]

    def variables_with_value(self, value: str) -> list[str]:
        return [name for i, (name, _) in enumerate(self.variables) if value in self._val_index[i]]

    # canonical indexing

    def digits(self, index: int) -> list[int]:
        out = []
        for w, (_, dom) in zip(self._weights, self.variables):
            out.append((index // w) % len(dom))
        return out

    def encode(self, digits: Sequence[int]) -> int:
        return sum(d * w for d, w in zip(digits, self._weights))

    @property
    def weights(self) -> tuple[int, ...]:
        return self._weights

    def outcome(self, index: int) -> Outcome:
        return tuple(dom[d] for d, (_, dom) in zip(self.digits(index), self.variables))

    def index(self, outcome: Outcome) -> int:
        self.check_outcome(outcome)
        return sum(self._val_index[i][v] * w for i, (v, w) in enumerate(zip(outcome, self._weights)))

    def check_outcome(self, outcome: Outcome) -> None:
        if len(outcome) != len(self.variables):
            raise ValidationError(
                f"outcome {outcome!r} has {len(outcome)} values, expected {len(self.variables)}"
            )
        for i, v in enumerate(outcome):
            if v not in self._val_index[i]:
                raise ValidationError(
                    f"{v!r} is not in the domain of {self.variables[i][0]!r}"
                )


def _check_ident(name, what):
    if not isinstance(name, str) or not _IDENT.match(name):
        raise ValidationError(f"invalid {what} name {name!r}")
    if name in RESERVED:
        raise ValidationError(f"{what} name {name!r} is a reserved word")


def outcome_space(schema: VariableSchema, limit: int = DEFAULT_LIMIT) -> list[Outcome]:
    """All outcomes in lexicographic schema order."""
    if schema.size > limit:
        raise CapacityError(f"outcome space has {schema.size} outcomes, limit is {limit}")
    return list(itertools.product(*(dom for _, dom in schema.variables)))


@dataclass(frozen=True)
class PartialAssignment:
    """Bindings of a subset of variables; the empty assignment is ``true``."""

    bindings: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        seen = {}
        for var, val in self.bindings:
            if var in seen:
                raise ValidationError(f"variable {var!r} bound more than once")
            seen[var] = val
        object.__setattr__(self, "bindings", tuple(sorted(seen.items())))

    @classmethod
    def of(cls, mapping: Mapping[str, str] | None = None, **kw):
        items = dict(mapping or {}, **kw)
        return cls(tuple(items.items()))

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(var for var, _ in self.bindings)

    def as_dict(self) -> dict[str, str]:
        return dict(self.bindings)

    def __bool__(self):
        return bool(self.bindings)

    def __len__(self):
        return len(self.bindings)

    def validate(self, schema: VariableSchema) -> None:
        for var, val in self.bindings:
            schema.value_index(schema.var_index(var), val)


TRUE = PartialAssignment()


def satisfies(schema: VariableSchema, outcome: Outcome, condition: PartialAssignment) -> bool:
    """True iff every binding of ``condition`` agrees with ``outcome``."""
    return all(outcome[schema.var_index(var)] == val for var, val in condition.bindings)


@dataclass(frozen=True)
class IntraVariable:
    """``[condition] variable=preferred > variable=dispreferred [less_important]``."""

    variable: str
    preferred: str
    dispreferred: str
    condition: PartialAssignment = TRUE
    less_important: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "less_important", frozenset(self.less_important))
        if isinstance(self.condition, Mapping):
            object.__setattr__(self, "condition", PartialAssignment.of(self.condition))


@dataclass(frozen=True)
class Direct:
    """A preference between two total outcomes."""

    better: Outcome
    worse: Outcome

    def __post_init__(self):
        object.__setattr__(self, "better", tuple(self.better))
        object.__setattr__(self, "worse", tuple(self.worse))


PreferenceStatement = Union[IntraVariable, Direct]


def validate_statement(schema: VariableSchema, s: PreferenceStatement) -> None:
    if isinstance(s, Direct):
        schema.check_outcome(s.better)
        schema.check_outcome(s.worse)
        if s.better == s.worse:
            raise ValidationError("direct statement relates an outcome to itself")
        return
    if not isinstance(s, IntraVariable):
        raise ValidationError(f"not a preference statement: {s!r}")
    xi = schema.var_index(s.variable)
    schema.value_index(xi, s.preferred)
    schema.value_index(xi, s.dispreferred)
    if s.preferred == s.dispreferred:
        raise ValidationError(f"statement prefers {s.variable}={s.preferred} to itself")
    s.condition.validate(schema)
    cond_vars = s.condition.variables
    if s.variable in cond_vars:
        raise ValidationError(f"condition binds the flipped variable {s.variable!r}")
    for y in s.less_important:
        schema.var_index(y)
    overlap = s.less_important & (cond_vars | {s.variable})
    if overlap:
        raise ValidationError(
            f"less-important set overlaps the flipped or condition variables: {sorted(overlap)}"
        )


@dataclass(frozen=True)
class PreferenceProfile:
    """Per-stakeholder preference statements over one schema."""

    schema: VariableSchema
    statements: Mapping[int, tuple[PreferenceStatement, ...]]

    def __post_init__(self):
        if not self.statements:
            raise ValidationError("profile has no stakeholders")
        normalized = {}
        for sid in sorted(self.statements):
            if not isinstance(sid, int) or isinstance(sid, bool) or sid <= 0:
                raise ValidationError(f"stakeholder ids must be positive integers, got {sid!r}")
            stmts = []
            for s in self.statements[sid]:
                validate_statement(self.schema, s)
                if s not in stmts:
                    stmts.append(s)
            normalized[sid] = tuple(stmts)
        object.__setattr__(self, "statements", normalized)

    @property
    def stakeholders(self) -> frozenset[int]:
        return frozenset(self.statements)
