"""Mean evaluation time per (configuration, query, semantics) on random annotated graphs.

Mirrors the layout of a timing table: rows are graph configurations and
queries, columns the four collaborative semantics.  Raw runs go to a CSV.

    python scripts/timing_table.py --repeat 25 --csv timing.csv
"""
import argparse
import csv
import sys
from dataclasses import asdict

from prefq.cli import BENCH_QUERIES, CSV_FIELDS, run_bench, summarize
from prefq.query import COLLABORATIVE

CONFIGS = ["10,100,200", "10,200,200", "20,200,400", "30,400,400"]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", action="append", help=f"default: {' '.join(CONFIGS)}")
    p.add_argument("--repeat", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout-s", type=float, default=120.0)
    p.add_argument("--csv", help="write raw runs here")
    args = p.parse_args(argv)
    fh = open(args.csv, "w", newline="") if args.csv else None
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS) if fh else None
    if writer:
        writer.writeheader()
    records = list(run_bench(
        args.config or CONFIGS, BENCH_QUERIES, COLLABORATIVE, args.repeat, seed=args.seed,
        timeout=args.timeout_s, workers=args.workers,
        sink=(lambda r: writer.writerow(asdict(r))) if writer else None,
    ))
    if fh:
        fh.close()
    print("mean seconds per run")
    print(summarize(records))
    worst = max((r.time_ms for r in records if r.status == "ok"), default=0.0)
    print(f"worst single run: {worst / 1000:.3f} s; timeouts: "
          f"{sum(r.status == 'timeout' for r in records)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
