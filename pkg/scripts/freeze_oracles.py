"""Recompute the frozen reference table used by the unit tests.

Runs the slow oracles in tests/oracles.py over every isomorphism class with
n <= 5, a set of named graphs, and seeded random graphs with n in {6, 7}, and
writes tests/data/frozen_oracles.json.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402


def named_graphs() -> dict[str, tuple[int, list]]:
    def cycle(n):
        return n, [(i, (i + 1) % n) for i in range(n)]

    def complete(n):
        return n, list(itertools.combinations(range(n), 2))

    petersen = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
    petersen += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return {
        "C4": cycle(4),
        "C5": cycle(5),
        "C6": cycle(6),
        "C7": cycle(7),
        "K6": complete(6),
        "K7": complete(7),
        "W5": (6, [(0, i) for i in range(1, 6)] + [(i, i % 5 + 1) for i in range(1, 6)]),
        "paw": (4, [(0, 1), (1, 2), (0, 2), (2, 3)]),
        "co_matching6": (6, [e for e in itertools.combinations(range(6), 2) if e not in {(0, 1), (2, 3), (4, 5)}]),
        "petersen": (10, petersen),
    }


def classes_up_to(n_max: int) -> list[tuple[int, list]]:
    out = []
    for n in range(n_max + 1):
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for code in range(1 << len(pairs)):
            edges = [pairs[k] for k in range(len(pairs)) if code >> k & 1]
            key = oracles.canonical_form(n, edges)
            if key not in seen:
                seen.add(key)
                out.append((n, [list(e) for e in key]))
    return out


def random_graphs(seed: int, per_n: int) -> list[tuple[int, list]]:
    rng = random.Random(seed)
    out = []
    for n in (6, 7):
        for _ in range(per_n):
            p = rng.choice((0.3, 0.5, 0.7))
            out.append((n, [list(e) for e in itertools.combinations(range(n), 2) if rng.random() < p]))
    return out


def row(n: int, edges: list, heavy: bool = True) -> dict:
    r = {
        "n": n,
        "edges": edges,
        "triangles": len(oracles.triangles(n, edges)),
        "alpha_at_most_two": oracles.alpha_at_most_two(n, edges),
        "chi": oracles.chromatic_number(n, edges),
        "nu": oracles.matching_number(n, edges),
        "bipartite": oracles.is_bipartite(n, edges),
    }
    if heavy:
        r["pairing"] = oracles.max_pairing(n, edges)
        r["t_star"] = oracles.odd_clique_minor(n, edges)
    return r


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20240517)
    ap.add_argument("--per-n", type=int, default=15)
    ap.add_argument("--out", default=str(ROOT / "tests" / "data" / "frozen_oracles.json"))
    args = ap.parse_args()
    table = {
        "classes": [row(n, e) for n, e in classes_up_to(5)],
        "random": [row(n, e) for n, e in random_graphs(args.seed, args.per_n)],
        "named": {k: row(n, [list(x) for x in e], heavy=n <= 7) for k, (n, e) in named_graphs().items()},
    }
    Path(args.out).write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")
    print(f"wrote {args.out}: {len(table['classes'])} classes, {len(table['random'])} random, {len(table['named'])} named")


if __name__ == "__main__":
    main()
