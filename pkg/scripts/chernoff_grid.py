"""Estimate binomial upper-tail frequencies on a grid and compare with exp(-t/6).

Each cell appends one record to a JSON-lines results file.
"""

from __future__ import annotations

import argparse
import math
import sys

from oddminor_forge.montecarlo import probe_chernoff
from oddminor_forge.reports import append_jsonl, result_record

GRID = [(1000, 0.1, 200), (10, 0.5, 10), (100, 0.2, 40), (200, 0.05, 25), (50, 0.3, 30)]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--results", default="chernoff_grid.jsonl")
    args = parser.parse_args(argv)
    ok = True
    print("N p t frequency bound margin")
    for N, p, t in GRID:
        est = probe_chernoff(N, p, t, args.trials, seed=args.seed, jobs=args.jobs)
        bound = math.exp(-t / 6)
        margin = bound + 5 * math.sqrt(bound * (1 - bound) / args.trials)
        ok &= est.estimate <= margin
        print(f"{N} {p} {t} {est.estimate:.6g} {bound:.6g} {margin:.6g}", flush=True)
        append_jsonl(args.results, result_record("estimate", {"target": "chernoff", "N": N, "p": p, "t": t, "estimate": est}))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
