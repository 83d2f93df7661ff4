"""``prefq`` command line: eval, check, translate, gen, bench.

Exit codes: 0 success, 1 parse or usage error, 2 semantic error (unknown
stakeholder or proposition), 3 engine disagreement or violated invariant.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from statistics import mean

from .engines import ENGINES, evaluate
from .errors import (
    CapacityError,
    EvaluationTimeout,
    FormulaError,
    ParseError,
    SemanticError,
    ValidationError,
)
from .formats import graph_to_text, parse_graph, parse_profile, profile_to_text
from .gen import GraphGenConfig, ProfileGenConfig, gen_graph, gen_profile
from .graph import LazyGraph
from .mucalc import parse_formula, to_text
from .query import COLLABORATIVE, Pref, SemanticsMode, parse_query, to_text as query_text
from .translate import translate

JSON_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_SEMANTIC, EXIT_INTERNAL = 0, 1, 2, 3

BENCH_QUERIES = {
    "q1": "P(tt, P(tt, tt, {1,2}), {3,4})",
    "q2": "P(tt, P(tt, tt, {1,2,3}), {4,5,6})",
    "q3": "P(tt, P(tt, P(tt, tt, {1,2,3}), {4,5,6}), {7,8,9})",
}

LATTICE = (("w1a2", "w1a1"), ("w1a1", "w2a1"), ("w1a2", "w2a2"), ("w2a2", "w2a1"))

log = logging.getLogger("prefq")


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass
class Instance:
    graph: object
    abstract: bool
    label: str


def load_instance(args) -> Instance:
    if bool(args.spec) == bool(args.graph):
        raise UsageError("give exactly one of --spec FILE or --graph FILE")
    path = args.spec or args.graph
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if args.spec:
        return Instance(LazyGraph(parse_profile(text)), False, path)
    return Instance(parse_graph(text), True, path)


def render(inst: Instance, node: int):
    if inst.abstract:
        return node
    return list(inst.graph.outcome(node))


def render_text(inst: Instance, node: int) -> str:
    if inst.abstract:
        return str(node)
    return "(" + ", ".join(inst.graph.outcome(node)) + ")"


def _query(args, inst):
    g = inst.graph
    return parse_query(args.query, g.schema, g.stakeholders)


def _timeout(args):
    return None if args.timeout_ms is None else args.timeout_ms / 1000.0


def cmd_eval(args) -> int:
    inst = load_instance(args)
    q = _query(args, inst)
    mode = SemanticsMode.parse(args.semantics)
    start = time.perf_counter()
    result = evaluate(q, inst.graph, mode, args.engine, timeout=_timeout(args))
    elapsed = (time.perf_counter() - start) * 1000
    if args.paranoid:
        for other in ENGINES:
            if other != args.engine:
                alt = evaluate(q, inst.graph, mode, other)
                if alt != result:
                    witness = min(set(alt) ^ set(result))
                    raise InvariantViolation(
                        f"engines {args.engine} and {other} disagree on {render_text(inst, witness)}"
                    )
    if args.json:
        print(json.dumps({
            "version": JSON_VERSION,
            "query": query_text(q),
            "semantics": mode.value,
            "engine": args.engine,
            "results": [render(inst, n) for n in result],
            "elapsed_ms": round(elapsed, 3),
        }))
    else:
        for n in result:
            print(render_text(inst, n))
        print(f"# {len(result)} result(s), {mode.value}, {args.engine}, {elapsed:.1f} ms",
              file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    inst = load_instance(args)
    q = _query(args, inst)
    answers = {}
    failures = []
    print(f"{'mode':6} " + " ".join(f"{e:>9}" for e in ENGINES) + "  agree")
    for mode in SemanticsMode:
        row = {e: evaluate(q, inst.graph, mode, e) for e in ENGINES}
        ref = row["direct"]
        agree = all(r == ref for r in row.values())
        print(f"{mode.value:6} " + " ".join(f"{len(row[e]):>9}" for e in ENGINES)
              + ("  ok" if agree else "  FAIL"))
        if not agree:
            for e, r in row.items():
                if r != ref:
                    w = min(set(r) ^ set(ref))
                    failures.append(f"{mode.value}: {e} vs direct differ on {render_text(inst, w)}")
        answers[mode.value] = set(ref)
    for small, big in LATTICE:
        extra = answers[small] - answers[big]
        ok = not extra
        print(f"{small} <= {big}: {'ok' if ok else 'FAIL'}")
        if not ok:
            failures.append(f"{small} not within {big}: {render_text(inst, min(extra))}")
    if isinstance(q, Pref) and len(q.coalition) == 1:
        same = len({frozenset(v) for v in answers.values()}) == 1
        print(f"singleton collapse: {'ok' if same else 'FAIL'}")
        if not same:
            failures.append("singleton coalition gives different answers across modes")
    if failures:
        for f in failures:
            print(f"witness: {f}", file=sys.stderr)
        return EXIT_INTERNAL
    print("all checks passed")
    return EXIT_OK


def cmd_translate(args) -> int:
    schema = stakeholders = None
    if args.spec or args.graph:
        inst = load_instance(args)
        schema, stakeholders = inst.graph.schema, inst.graph.stakeholders
    q = parse_query(args.query, schema, stakeholders)
    out = translate(q, SemanticsMode.parse(args.semantics))
    text = to_text(out.formula)
    if parse_formula(text) != out.formula:
        raise InvariantViolation("formula printer/parser round trip failed")
    print(text)
    if args.stats:
        s = out.stats
        print(f"# nodes={s.nodes} modalities={s.modalities} binders={s.binders}", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "profile":
        cfg = ProfileGenConfig(args.seed, args.variables, args.stakeholders, args.statements)
        text = profile_to_text(gen_profile(cfg))
    else:
        text = graph_to_text(gen_graph(GraphGenConfig.parse(args.config, args.seed)))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


@dataclass
class RunRecord:
    config: str
    seed: int
    query_id: str
    mode: str
    engine: str
    time_ms: float
    result_size: int | None
    status: str = "ok"


CSV_FIELDS = ["config", "seed", "query_id", "mode", "engine", "time_ms", "result_size", "status"]


def _bench_instance(config: str, seed: int):
    """``S,O,E`` is a random graph; ``p:V,S,K`` a random profile."""
    if config.startswith("p:"):
        try:
            v, s, k = (int(x) for x in config[2:].split(","))
        except ValueError:
            raise ValidationError(f"bad profile config {config!r}, expected 'p:V,S,K'") from None
        return LazyGraph(gen_profile(ProfileGenConfig(seed, v, s, k)))
    return gen_graph(GraphGenConfig.parse(config, seed))


def run_bench(configs, queries, modes, repeat, seed=0, engine="mc-local",
              timeout=120.0, workers=1, sink=None):
    """Run every (config, replicate, query, mode) cell; yields RunRecords in order."""
    jobs = [(c, seed + r) for c in configs for r in range(repeat)]
    parsed = {qid: parse_query(text) for qid, text in queries.items()}

    def run(job):
        config, s = job
        g = _bench_instance(config, s)
        out = []
        for qid, q in parsed.items():
            for mode in modes:
                start = time.perf_counter()
                try:
                    res = evaluate(q, g, mode, engine, timeout=timeout)
                    status, size = "ok", len(res)
                except EvaluationTimeout:
                    status, size = "timeout", None
                ms = (time.perf_counter() - start) * 1000
                out.append(RunRecord(config, s, qid, mode.value, engine, round(ms, 3), size, status))
        return out

    lock = threading.Lock()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for records in pool.map(run, jobs):
            with lock:
                for rec in records:
                    if sink is not None:
                        sink(rec)
                    yield rec


def summarize(records) -> str:
    cells = {}
    for r in records:
        cells.setdefault((r.config, r.query_id), {}).setdefault(r.mode, []).append(r)
    modes = sorted({r.mode for r in records}, key=[m.value for m in SemanticsMode].index)
    lines = ["config        query  " + "  ".join(f"{m:>10}" for m in modes)]
    for (config, qid), by_mode in cells.items():
        vals = []
        for m in modes:
            rs = by_mode.get(m, [])
            ok = [r.time_ms for r in rs if r.status == "ok"]
            vals.append(f"{mean(ok) / 1000:10.4f}" if ok else f"{'timeout':>10}")
        lines.append(f"{config:13} {qid:6} " + "  ".join(vals))
    return "\n".join(lines)


def cmd_bench(args) -> int:
    configs = args.config or ["10,100,200"]
    queries = {}
    for i, q in enumerate(args.query or list(BENCH_QUERIES)):
        if q in BENCH_QUERIES:
            queries[q] = BENCH_QUERIES[q]
        else:
            queries[f"custom{i}"] = q
    modes = [SemanticsMode.parse(m) for m in (args.semantics or [m.value for m in COLLABORATIVE])]
    for c in configs:  # reject malformed configs before writing any output
        _bench_instance(c, 0)
    fh = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        records = list(run_bench(
            configs, queries, modes, args.repeat, seed=args.seed, engine=args.engine,
            timeout=_timeout(args), workers=args.workers,
            sink=lambda rec: writer.writerow(asdict(rec)),
        ))
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.summary and records:
        print(summarize(records), file=sys.stderr if fh is sys.stdout else sys.stdout)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="prefq", description="Multi-stakeholder preference queries.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(sp):
        sp.add_argument("--spec", metavar="FILE", help="preference file")
        sp.add_argument("--graph", metavar="FILE", help="explicit graph file")

    def semantics_arg(sp, default="w2a2"):
        sp.add_argument("--semantics", default=default,
                        help="cs, w1a2, w1a1, w2a2 or w2a1 (default %(default)s)")

    sp = sub.add_parser("eval", help="answer a query")
    instance_args(sp)
    sp.add_argument("--query", required=True)
    semantics_arg(sp)
    sp.add_argument("--engine", choices=ENGINES, default="mc-local")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--paranoid", action="store_true", help="cross-check against all engines")
    sp.add_argument("--timeout-ms", type=int)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("check", help="cross-check engines and the semantics lattice")
    instance_args(sp)
    sp.add_argument("--query", required=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("translate", help="print the mu-calculus translation")
    instance_args(sp)
    sp.add_argument("--query", required=True)
    semantics_arg(sp)
    sp.add_argument("--stats", action="store_true")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("gen", help="generate a random instance")
    sp.add_argument("kind", choices=("profile", "graph"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--variables", type=int, default=5)
    sp.add_argument("--stakeholders", type=int, default=4)
    sp.add_argument("--statements", type=int, default=4)
    sp.add_argument("--config", default="10,100,200", help="graph config S,O,E")
    sp.add_argument("-o", "--output", metavar="FILE")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bench", help="timing harness, CSV output")
    sp.add_argument("--config", action="append",
                    help="S,O,E random graph or p:V,S,K random profile (repeatable)")
    sp.add_argument("--query", action="append",
                    help=f"query id ({', '.join(BENCH_QUERIES)}) or query text (repeatable)")
    sp.add_argument("--semantics", action="append", help="repeatable; default: the four collaborative modes")
    sp.add_argument("--engine", choices=ENGINES, default="mc-local")
    sp.add_argument("--repeat", type=int, default=25)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", metavar="PATH")
    sp.add_argument("--timeout-ms", type=int, default=120_000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--summary", action="store_true", help="print mean seconds per cell")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SemanticError, FormulaError) as e:
        print(f"prefq: error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC
    except (ParseError, UsageError, ValidationError, CapacityError, OSError, ValueError) as e:
        print(f"prefq: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as e:
        print(f"prefq: invariant violated: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except EvaluationTimeout as e:
        print(f"prefq: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
