"""Timing and answer sizes on random consistent preference profiles.

For each variable count, several seeded profiles are generated and a fixed
set of queries is answered with the on-the-fly engine under the four
collaborative semantics; the mean time and mean answer size are printed.
"""
import argparse
import time
from statistics import mean

from prefq.engines import evaluate
from prefq.gen import ProfileGenConfig, gen_profile
from prefq.graph import LazyGraph
from prefq.query import COLLABORATIVE, parse_query

QUERIES = {
    "nondominated": "P(tt, tt, {1,2,3})",
    "improve": "P(tt, x1=v0, {1,2})",
    "nested": "P(tt, P(tt, tt, {1,2}), {3,4})",
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--variables", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    p.add_argument("--stakeholders", type=int, default=4)
    p.add_argument("--statements", type=int, default=6)
    p.add_argument("--profiles", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    print(f"{'vars':>4} {'query':>12} " + " ".join(f"{m.value:>16}" for m in COLLABORATIVE))
    for n in args.variables:
        graphs = [LazyGraph(gen_profile(ProfileGenConfig(args.seed + i, n, args.stakeholders,
                                                         args.statements)))
                  for i in range(args.profiles)]
        for qid, text in QUERIES.items():
            q = parse_query(text)
            cells = []
            for mode in COLLABORATIVE:
                times, sizes = [], []
                for g in graphs:
                    start = time.perf_counter()
                    sizes.append(len(evaluate(q, g, mode)))
                    times.append(time.perf_counter() - start)
                cells.append(f"{mean(times):8.4f} ({mean(sizes):5.1f})")
            print(f"{n:>4} {qid:>12} " + " ".join(f"{c:>16}" for c in cells))


if __name__ == "__main__":
    main()
