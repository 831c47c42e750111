"""Check that every k-critical graph on n <= 2k - 2 vertices has a join partition.

Exhaustive for each n up to --n-max (at most 8).  Prints one line per n with
the candidate count, the critical count, and the number lacking a join.
Exits 1 if any graph lacks one.
"""

from __future__ import annotations

import argparse
import sys
import time

from oddminor_forge.appendix import critical_graphs_without_join
from oddminor_forge.codecs import encode_graph6


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=7, help="largest vertex count (n = 8 takes several minutes)")
    args = parser.parse_args(argv)
    failed = False
    print("n critical without_join seconds")
    for n in range(1, args.n_max + 1):
        start = time.perf_counter()
        found, bad = critical_graphs_without_join(n)
        print(f"{n} {found} {len(bad)} {time.perf_counter() - start:.1f}", flush=True)
        for g in bad:
            print(f"  no join: {encode_graph6(g)}")
        failed |= bool(bad)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
