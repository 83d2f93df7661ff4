"""Text formats: the preference DSL and the explicit graph format.

Preference DSL::

    variables { E: code, noCode; A: simple, complex; F: fix, noFix; }
    stakeholder 1 { E=code > E=noCode; if E=code: F=noFix > F=fix; }
    stakeholder 3 { E=code > E=noCode over A, F; }
    stakeholder 2 { outcome (E=noCode, A=simple, F=noFix) > (E=code, A=complex, F=noFix); }

Graph format (outcomes are 0-based indices, ⊥ is implicit)::

    graph 2 3
    0 -> 1 : {1}
    1 -> 2 : {1,2}

Both formats accept ``#`` comments.
"""
from __future__ import annotations

import re

from .errors import ParseError, ValidationError
from .graph import ExplicitGraph
from .model import (
    Direct,
    IntraVariable,
    PartialAssignment,
    PreferenceProfile,
    VariableSchema,
    validate_statement,
)
from .query import format_coalition, tokenize

_DSL_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|[{}:;,=>()])
    """,
    re.VERBOSE,
)


class _Reader:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text, _DSL_TOKEN)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, msg, pos=None):
        return ParseError(msg, self.text, self.tok[2] if pos is None else pos)

    def at(self, value):
        return self.tok[1] == value and self.tok[0] != "eof"

    def accept(self, value):
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            raise self.error(f"expected {value!r}, found {self.tok[1] or 'end of input'!r}")

    def take(self, kind, what):
        k, v, _ = self.tok
        if k != kind:
            raise self.error(f"expected {what}, found {v or 'end of input'!r}")
        self.i += 1
        return v


def parse_profile(text: str) -> PreferenceProfile:
    r = _Reader(text)
    r.expect("variables")
    r.expect("{")
    variables = []
    while not r.accept("}"):
        name = r.take("ident", "a variable name")
        r.expect(":")
        dom = [r.take("ident", "a value")]
        while r.accept(","):
            dom.append(r.take("ident", "a value"))
        r.expect(";")
        variables.append((name, tuple(dom)))
    try:
        schema = VariableSchema(tuple(variables))
    except ValidationError as e:
        raise ParseError(str(e), text, 0) from None
    statements = {}
    while r.tok[0] != "eof":
        pos = r.tok[2]
        r.expect("stakeholder")
        sid = int(r.take("int", "a stakeholder id"))
        if sid <= 0:
            raise r.error("stakeholder ids must be positive", pos)
        if sid in statements:
            raise r.error(f"stakeholder {sid} declared twice", pos)
        r.expect("{")
        stmts = []
        while not r.accept("}"):
            spos = r.tok[2]
            s = _statement(r, schema)
            try:
                validate_statement(schema, s)
            except ValidationError as e:
                raise r.error(str(e), spos) from None
            stmts.append(s)
        statements[sid] = tuple(stmts)
    if not statements:
        raise r.error("no stakeholders declared")
    return PreferenceProfile(schema, statements)


def _binding(r):
    var = r.take("ident", "a variable")
    r.expect("=")
    return var, r.take("ident", "a value")


def _bindings(r, closer):
    items = [_binding(r)]
    while r.accept(","):
        items.append(_binding(r))
    r.expect(closer)
    return items


def _statement(r, schema):
    pos = r.tok[2]
    if r.accept("outcome"):
        r.expect("(")
        better = _total(r, schema, _bindings(r, ")"), pos)
        r.expect(">")
        r.expect("(")
        worse = _total(r, schema, _bindings(r, ")"), pos)
        r.expect(";")
        return Direct(better, worse)
    condition = PartialAssignment()
    if r.accept("if"):
        items = _bindings(r, ":")
        if len({v for v, _ in items}) != len(items):
            raise r.error("condition binds a variable twice", pos)
        condition = PartialAssignment(tuple(items))
    var, preferred = _binding(r)
    r.expect(">")
    vpos = r.tok[2]
    var2, dispreferred = _binding(r)
    if var2 != var:
        raise r.error(f"both sides must name the same variable ({var} vs {var2})", vpos)
    less = []
    if r.accept("over"):
        less.append(r.take("ident", "a variable"))
        while r.accept(","):
            less.append(r.take("ident", "a variable"))
    r.expect(";")
    return IntraVariable(var, preferred, dispreferred, condition, frozenset(less))


def _total(r, schema, items, pos):
    given = dict(items)
    if len(given) != len(items):
        raise r.error("outcome binds a variable twice", pos)
    missing = [n for n in schema.names if n not in given]
    extra = [n for n in given if n not in schema]
    if missing or extra:
        raise r.error(
            "direct statements must assign every variable exactly"
            + (f"; missing {', '.join(missing)}" if missing else "")
            + (f"; unknown {', '.join(extra)}" if extra else ""),
            pos,
        )
    return tuple(given[n] for n in schema.names)


def _cond_text(schema, cond):
    d = cond.as_dict()
    return ", ".join(f"{n}={d[n]}" for n in schema.names if n in d)


def statement_to_text(schema: VariableSchema, s) -> str:
    if isinstance(s, Direct):
        b = ", ".join(f"{n}={v}" for n, v in zip(schema.names, s.better))
        w = ", ".join(f"{n}={v}" for n, v in zip(schema.names, s.worse))
        return f"outcome ({b}) > ({w});"
    out = f"if {_cond_text(schema, s.condition)}: " if s.condition else ""
    out += f"{s.variable}={s.preferred} > {s.variable}={s.dispreferred}"
    if s.less_important:
        out += " over " + ", ".join(n for n in schema.names if n in s.less_important)
    return out + ";"


def profile_to_text(profile: PreferenceProfile) -> str:
    schema = profile.schema
    lines = ["variables {"]
    for name, dom in schema.variables:
        lines.append(f"  {name}: {', '.join(dom)};")
    lines.append("}")
    for sid, stmts in profile.statements.items():
        lines.append(f"stakeholder {sid} {{")
        lines.extend(f"  {statement_to_text(schema, s)}" for s in stmts)
        lines.append("}")
    return "\n".join(lines) + "\n"


GRAPH_VARIABLE = "node"


def abstract_schema(n_outcomes: int) -> VariableSchema:
    """Single synthetic variable whose values name the abstract outcomes."""
    if n_outcomes < 1:
        raise ValidationError("a graph needs at least one outcome")
    return VariableSchema(((GRAPH_VARIABLE, tuple(f"n{i}" for i in range(n_outcomes))),))


_EDGE = re.compile(r"\s*(\d+)\s*->\s*(\d+)\s*:\s*\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}\s*\Z")
_HEADER = re.compile(r"\s*graph\s+(\d+)\s+(\d+)\s*\Z")


def parse_graph(text: str) -> ExplicitGraph:
    header = None
    edges = []
    offset = 0
    for line in text.split("\n"):
        body = line.split("#", 1)[0]
        pos = offset
        offset += len(line) + 1
        if not body.strip():
            continue
        if header is None:
            m = _HEADER.match(body)
            if not m:
                raise ParseError("expected 'graph <n_stakeholders> <n_outcomes>'", text, pos)
            header = int(m.group(1)), int(m.group(2))
            if header[0] < 1 or header[1] < 1:
                raise ParseError("graph needs at least one stakeholder and one outcome", text, pos)
            continue
        m = _EDGE.match(body)
        if not m:
            raise ParseError("expected '<from> -> <to> : {ids}'", text, pos)
        w, b = int(m.group(1)), int(m.group(2))
        ids = {int(x) for x in m.group(3).split(",")}
        if w >= header[1] or b >= header[1]:
            raise ParseError(f"outcome index out of range 0..{header[1] - 1}", text, pos)
        if not all(1 <= a <= header[0] for a in ids):
            raise ParseError(f"stakeholder id out of range 1..{header[0]}", text, pos)
        edges.append(((w, b), ids))
    if header is None:
        raise ParseError("empty graph file", text, 0)
    merged = {}
    for key, ids in edges:
        merged.setdefault(key, set()).update(ids)
    return ExplicitGraph(abstract_schema(header[1]), range(1, header[0] + 1), merged)


def graph_to_text(g: ExplicitGraph) -> str:
    lines = [f"graph {max(g.stakeholders)} {g.n_outcomes}"]
    for e in g.edge_list():
        lines.append(f"{e.worse} -> {e.better} : {format_coalition(e.coalition)}")
    return "\n".join(lines) + "\n"
