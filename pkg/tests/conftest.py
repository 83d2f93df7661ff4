import random
from importlib import resources

import pytest
from hypothesis import strategies as st

from prefq.direct import eval_direct, preferred_part
from prefq.formats import parse_profile
from prefq.gen import ProfileGenConfig, gen_profile
from prefq.graph import BOTTOM, LazyGraph
from prefq.query import And, FalseQ, Not, Or, Pref, Prop, SemanticsMode, TrueQ


def running_text():
    return resources.files("prefq").joinpath("data/running_example.pref").read_text()


@pytest.fixture(scope="session")
def running_profile():
    return parse_profile(running_text())


@pytest.fixture(scope="session")
def running(running_profile):
    return LazyGraph(running_profile)


def tuples(g, nodes):
    """Outcome tuples of ``nodes``, ⊥ dropped."""
    return {g.outcome(n) for n in nodes if n != BOTTOM}


def random_query(rng, schema, stakeholders, depth):
    """Random query with P-nesting at most ``depth``."""
    ids = sorted(stakeholders)

    def prop():
        name, dom = rng.choice(schema.variables)
        return Prop(name, rng.choice(dom))

    def build(d, size):
        r = rng.random()
        if size <= 0 or r < 0.25:
            return rng.choice([TrueQ(), TrueQ(), FalseQ(), prop(), prop(), prop()])
        if d > 0 and r < 0.7:
            k = rng.randint(1, min(3, len(ids)))
            return Pref(build(d - 1, size - 1), build(d - 1, size - 1), frozenset(rng.sample(ids, k)))
        if r < 0.8:
            return Not(build(d, size - 1))
        op = And if r < 0.9 else Or
        return op(build(d, size - 1), build(d, size - 1))

    return build(depth, 4)


def random_instance(seed):
    rng = random.Random(seed)
    cfg = ProfileGenConfig(
        seed,
        n_variables=rng.randint(1, 7),
        n_stakeholders=rng.randint(1, 6),
        statements_per_stakeholder=rng.randint(0, 5),
    )
    return LazyGraph(gen_profile(cfg)), rng


@st.composite
def queries(draw, schema, stakeholders, max_depth=2):
    return random_query(random.Random(draw(st.integers(0, 2**32))), schema, stakeholders,
                        draw(st.integers(0, max_depth)))


def pref_subterms(q):
    if isinstance(q, Pref):
        yield q
        yield from pref_subterms(q.psi1)
        yield from pref_subterms(q.psi2)
    elif isinstance(q, Not):
        yield from pref_subterms(q.operand)
    elif isinstance(q, (And, Or)):
        yield from pref_subterms(q.left)
        yield from pref_subterms(q.right)


def lattice_safe(q, negated=False):
    """True when every P occurs un-negated with P-free operands.

    Only then do the operator-level inclusions carry over to the whole query.
    """
    if isinstance(q, Pref):
        return not negated and next(pref_subterms(q.psi1), None) is None \
            and next(pref_subterms(q.psi2), None) is None
    if isinstance(q, Not):
        return lattice_safe(q.operand, not negated)
    if isinstance(q, (And, Or)):
        return lattice_safe(q.left, negated) and lattice_safe(q.right, negated)
    return True


W1A2, W1A1, W2A2, W2A1 = (SemanticsMode(m) for m in ("w1a2", "w1a1", "w2a2", "w2a1"))
LATTICE = ((W1A2, W1A1), (W1A1, W2A1), (W1A2, W2A2), (W2A2, W2A1))


def lattice_violations(g, q):
    """Inclusion failures, checked per P operator (operands fixed) and, when safe, per query."""
    bad = []
    for p in pref_subterms(q):
        for base in SemanticsMode:
            targets = eval_direct(p.psi2, g, base)
            part = {m: preferred_part(g, targets, p.coalition, m) for m in (W1A2, W1A1, W2A2, W2A1)}
            bad += [(p, base, lo, hi) for lo, hi in LATTICE if not part[lo] <= part[hi]]
    if lattice_safe(q):
        whole = {m: eval_direct(q, g, m) for m in (W1A2, W1A1, W2A2, W2A1)}
        bad += [(q, None, lo, hi) for lo, hi in LATTICE if not whole[lo] <= whole[hi]]
    return bad


def singletonize(q, rng):
    """Same query shape with every coalition cut down to one member."""
    if isinstance(q, Pref):
        return Pref(singletonize(q.psi1, rng), singletonize(q.psi2, rng),
                    frozenset([rng.choice(sorted(q.coalition))]))
    if isinstance(q, Not):
        return Not(singletonize(q.operand, rng))
    if isinstance(q, (And, Or)):
        return type(q)(singletonize(q.left, rng), singletonize(q.right, rng))
    return q
