"""Evaluate the vulnerability-prioritization example under every semantics and engine."""
from importlib import resources

from prefq.engines import ENGINES, evaluate
from prefq.formats import parse_profile
from prefq.graph import LazyGraph
from prefq.mucalc import to_text
from prefq.query import SemanticsMode, parse_query
from prefq.translate import translate

QUERIES = [
    "P(tt, E=noCode, {1,2})",
    "P(tt, E=code, {1})",
    "P(tt, E=code, {2})",
    "P(tt, tt, {1,2})",
    "P(tt, tt, {2})",
]


def main():
    text = resources.files("prefq").joinpath("data/running_example.pref").read_text()
    g = LazyGraph(parse_profile(text))
    for qt in QUERIES:
        q = parse_query(qt, g.schema, g.stakeholders)
        print(qt)
        for mode in SemanticsMode:
            answers = {e: evaluate(q, g, mode, e) for e in ENGINES}
            agree = len({tuple(a) for a in answers.values()}) == 1
            shown = ", ".join("(" + ",".join(g.outcome(n)) + ")" for n in answers["direct"])
            print(f"  {mode.value:5} {'ok ' if agree else 'BAD'} [{shown}]")
    print()
    print("w2a2 translation of", QUERIES[0])
    print(" ", to_text(translate(parse_query(QUERIES[0]), SemanticsMode.W2A2).formula))


if __name__ == "__main__":
    main()
