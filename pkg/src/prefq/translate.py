"""Compile preference queries into alternation-free mu-calculus formulas.

For ``P(psi1, psi2, A)`` with ``W`` the witness part and ``G`` the agreement
part::

    dom_r(B) = mu Z . (<B>r psi2 | <B>r Z)     some psi2-outcome is reachable
                                               backwards: the node dominates it
    dom(B)   = mu Z . (<B> psi2 | <B> Z)       the node is dominated by a
                                               psi2-outcome

    cs    psi1 & dom_r(a1) & ~dom(a1) & dom_r(a2) & ~dom(a2) & ...
    w1a2  psi1 & (dom_r(a1) | dom_r(a2) | ...) & ~dom(A)
    w1a1  psi1 & (dom_r(a1) | ...) & ~dom(a1) & ~dom(a2) & ...
    w2a2  psi1 & dom_r(A) & ~dom(A)
    w2a1  psi1 & dom_r(A) & ~dom(a1) & ~dom(a2) & ...

Stakeholders are taken in ascending id order.  ``psi2`` is re-translated into
every fixpoint body, each copy with its own fresh variable names.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import mucalc as mc
from .query import And, FalseQ, Not, Or, Pref, Prop, Query, SemanticsMode, TrueQ


@dataclass(frozen=True)
class TranslationOutput:
    formula: mc.Formula
    fresh_variable_counter: int
    stats: mc.FormulaStats


def translate(q: Query, mode: SemanticsMode) -> TranslationOutput:
    mode = SemanticsMode(mode)
    counter = itertools.count()

    def fresh():
        return f"Z{next(counter)}"

    def tr(q):
        if isinstance(q, TrueQ):
            return mc.Tt()
        if isinstance(q, FalseQ):
            return mc.Ff()
        if isinstance(q, Prop):
            return mc.Atom(q.variable, q.value)
        if isinstance(q, Not):
            return mc.Neg(tr(q.operand))
        if isinstance(q, And):
            return mc.Conj(tr(q.left), tr(q.right))
        if isinstance(q, Or):
            return mc.Disj(tr(q.left), tr(q.right))
        if isinstance(q, Pref):
            return pref(q)
        raise TypeError(f"not a query: {q!r}")

    def reach(coalition, psi2, diamond):
        z = fresh()
        target = tr(psi2)
        return mc.Mu(z, mc.Disj(diamond(coalition, target), diamond(coalition, mc.Var(z))))

    def dominates(coalition, psi2):
        return reach(coalition, psi2, mc.DiamRev)

    def undominated(coalition, psi2):
        return mc.Neg(reach(coalition, psi2, mc.DiamFwd))

    def pref(q):
        members = [frozenset([a]) for a in sorted(q.coalition)]
        everyone = q.coalition
        parts = [tr(q.psi1)]
        if mode is SemanticsMode.CONSENSUS:
            for a in members:
                parts.append(dominates(a, q.psi2))
                parts.append(undominated(a, q.psi2))
            return mc.conj(parts)
        if mode.chained_witness:
            parts.append(dominates(everyone, q.psi2))
        else:
            parts.append(mc.disj(dominates(a, q.psi2) for a in members))
        if mode.chained_agreement:
            parts.append(undominated(everyone, q.psi2))
        else:
            parts.extend(undominated(a, q.psi2) for a in members)
        return mc.conj(parts)

    formula = tr(q)
    return TranslationOutput(formula, next(counter), mc.formula_stats(formula))
