"""Preference query language: AST, parser, printer and semantics modes.

Concrete syntax::

    expr   := term ("|" term)*
    term   := factor ("&" factor)*
    factor := "!" factor | "tt" | "ff" | prop
            | "P" "(" expr "," expr "," coalition ")" | "(" expr ")"
    prop   := IDENT "=" IDENT | IDENT
    coalition := "{" INT ("," INT)* "}" | "all"

``#`` starts a comment that runs to the end of the line.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import ParseError, SemanticError
from .model import VariableSchema


class SemanticsMode(enum.Enum):
    CONSENSUS = "cs"
    W1A2 = "w1a2"
    W1A1 = "w1a1"
    W2A2 = "w2a2"
    W2A1 = "w2a1"

    @classmethod
    def parse(cls, text: str) -> "SemanticsMode":
        try:
            return cls(text.lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown semantics {text!r} (choose from {choices})") from None

    @property
    def chained_witness(self) -> bool:
        return self in (SemanticsMode.W2A2, SemanticsMode.W2A1)

    @property
    def chained_agreement(self) -> bool:
        return self in (SemanticsMode.W1A2, SemanticsMode.W2A2)


COLLABORATIVE = (SemanticsMode.W1A2, SemanticsMode.W1A1, SemanticsMode.W2A2, SemanticsMode.W2A1)


@dataclass(frozen=True)
class TrueQ:
    pass


@dataclass(frozen=True)
class FalseQ:
    pass


@dataclass(frozen=True)
class Prop:
    variable: str
    value: str


@dataclass(frozen=True)
class Not:
    operand: "Query"


@dataclass(frozen=True)
class And:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class Or:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class Pref:
    """Outcomes satisfying ``psi1`` preferred over those satisfying ``psi2`` by ``coalition``."""

    psi1: "Query"
    psi2: "Query"
    coalition: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "coalition", frozenset(self.coalition))
        if not self.coalition:
            raise ValueError("coalition must be non-empty")


Query = Union[TrueQ, FalseQ, Prop, Not, And, Or, Pref]


def nesting_depth(q: Query) -> int:
    if isinstance(q, Pref):
        return 1 + max(nesting_depth(q.psi1), nesting_depth(q.psi2))
    if isinstance(q, Not):
        return nesting_depth(q.operand)
    if isinstance(q, (And, Or)):
        return max(nesting_depth(q.left), nesting_depth(q.right))
    return 0


def operator_count(q: Query) -> int:
    """Number of ``!``, ``&``, ``|`` and ``P`` operators in ``q``."""
    if isinstance(q, Pref):
        return 1 + operator_count(q.psi1) + operator_count(q.psi2)
    if isinstance(q, Not):
        return 1 + operator_count(q.operand)
    if isinstance(q, (And, Or)):
        return 1 + operator_count(q.left) + operator_count(q.right)
    return 0


def coalitions(q: Query) -> Iterable[frozenset[int]]:
    if isinstance(q, Pref):
        yield q.coalition
        yield from coalitions(q.psi1)
        yield from coalitions(q.psi2)
    elif isinstance(q, Not):
        yield from coalitions(q.operand)
    elif isinstance(q, (And, Or)):
        yield from coalitions(q.left)
        yield from coalitions(q.right)


def validate_query(q: Query, schema: VariableSchema, stakeholders=None) -> None:
    """Check propositions against ``schema`` and coalitions against ``stakeholders``."""
    if isinstance(q, Prop):
        if not schema.has_value(q.variable, q.value):
            raise SemanticError(f"unknown proposition {q.variable}={q.value}")
    elif isinstance(q, Not):
        validate_query(q.operand, schema, stakeholders)
    elif isinstance(q, (And, Or)):
        validate_query(q.left, schema, stakeholders)
        validate_query(q.right, schema, stakeholders)
    elif isinstance(q, Pref):
        if stakeholders is not None:
            unknown = q.coalition - frozenset(stakeholders)
            if unknown:
                raise SemanticError(f"unknown stakeholder id(s) {sorted(unknown)}")
        validate_query(q.psi1, schema, stakeholders)
        validate_query(q.psi2, schema, stakeholders)


# printing

def format_coalition(coalition) -> str:
    return "{" + ",".join(str(a) for a in sorted(coalition)) + "}"


def to_text(q: Query) -> str:
    return _fmt(q, 0)


def _fmt(q, level):
    # level: 0 = disjunction context, 1 = conjunction, 2 = factor
    if isinstance(q, TrueQ):
        return "tt"
    if isinstance(q, FalseQ):
        return "ff"
    if isinstance(q, Prop):
        return f"{q.variable}={q.value}"
    if isinstance(q, Not):
        return "!" + _fmt(q.operand, 2)
    if isinstance(q, Pref):
        return f"P({_fmt(q.psi1, 0)}, {_fmt(q.psi2, 0)}, {format_coalition(q.coalition)})"
    if isinstance(q, Or):
        s = f"{_fmt(q.left, 0)} | {_fmt(q.right, 1)}"
        return s if level == 0 else f"({s})"
    if isinstance(q, And):
        s = f"{_fmt(q.left, 1)} & {_fmt(q.right, 2)}"
        return s if level <= 1 else f"({s})"
    raise TypeError(f"not a query: {q!r}")


# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[!&|(),{}=])
    """,
    re.VERBOSE,
)


def tokenize(text: str, pattern=_TOKEN):
    pos = 0
    tokens = []
    while pos < len(text):
        m = pattern.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, schema, stakeholders):
        self.text = text
        self.schema = schema
        self.stakeholders = None if stakeholders is None else frozenset(stakeholders)
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg, pos=None, cls=ParseError):
        return cls(msg, self.text, self.tok[2] if pos is None else pos)

    def accept(self, value):
        if self.tok[1] == value and self.tok[0] in ("op", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")

    def parse(self):
        q = self.expr()
        if self.tok[0] != "eof":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return q

    def expr(self):
        q = self.term()
        while self.accept("|"):
            q = Or(q, self.term())
        return q

    def term(self):
        q = self.factor()
        while self.accept("&"):
            q = And(q, self.factor())
        return q

    def factor(self):
        kind, value, pos = self.tok
        if self.accept("!"):
            return Not(self.factor())
        if self.accept("("):
            q = self.expr()
            self.expect(")")
            return q
        if kind != "ident":
            raise self.error(f"expected a query, found {value or 'end of input'!r}")
        self.i += 1
        if value == "tt":
            return TrueQ()
        if value == "ff":
            return FalseQ()
        if value == "P" and self.tok[1] == "(":
            self.i += 1
            psi1 = self.expr()
            self.expect(",")
            psi2 = self.expr()
            self.expect(",")
            coalition = self.coalition()
            self.expect(")")
            return Pref(psi1, psi2, coalition)
        if self.accept("="):
            vkind, val, vpos = self.tok
            if vkind not in ("ident", "int"):
                raise self.error("expected a value after '='")
            self.i += 1
            if self.schema is not None and not self.schema.has_value(value, val):
                raise self.error(f"unknown proposition {value}={val}", pos, SemanticError)
            return Prop(value, val)
        return self.bare(value, pos)

    def bare(self, value, pos):
        if self.schema is None:
            raise self.error(f"bare value {value!r} needs a schema to resolve", pos, SemanticError)
        owners = self.schema.variables_with_value(value)
        if not owners:
            raise self.error(f"unknown proposition {value!r}", pos, SemanticError)
        if len(owners) > 1:
            raise self.error(
                f"ambiguous value {value!r} (in domains of {', '.join(owners)})", pos, SemanticError
            )
        return Prop(owners[0], value)

    def coalition(self):
        kind, value, pos = self.tok
        if self.accept("all"):
            if self.stakeholders is None:
                raise self.error("'all' needs a known stakeholder set", pos, SemanticError)
            return self.stakeholders
        self.expect("{")
        if self.tok[1] == "}":
            raise self.error("empty coalition")
        ids = []
        while True:
            kind, value, pos = self.tok
            if kind != "int":
                raise self.error(f"expected a stakeholder id, found {value or 'end of input'!r}")
            self.i += 1
            ids.append(int(value))
            if not self.accept(","):
                break
        self.expect("}")
        return frozenset(ids)


def parse_query(text: str, schema: VariableSchema | None = None, stakeholders=None) -> Query:
    """Parse query text; propositions are checked against ``schema`` when given."""
    return _Parser(text, schema, stakeholders).parse()
