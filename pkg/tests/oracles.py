"""Slow, obviously-correct reference implementations used to freeze test values.

Everything here works on ``(n, edges)`` with plain Python sets and shares no
code with the package.
"""

from __future__ import annotations

import itertools


def adjacency(n: int, edges) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def triangles(n: int, edges) -> set[tuple[int, int, int]]:
    adj = adjacency(n, edges)
    return {t for t in itertools.combinations(range(n), 3) if t[1] in adj[t[0]] and t[2] in adj[t[0]] and t[2] in adj[t[1]]}


def alpha_at_most_two(n: int, edges) -> bool:
    adj = adjacency(n, edges)
    return not any(
        b not in adj[a] and c not in adj[a] and c not in adj[b] for a, b, c in itertools.combinations(range(n), 3)
    )


def chromatic_number(n: int, edges) -> int:
    adj = adjacency(n, edges)
    for k in range(n + 1):
        colour = [-1] * n

        def place(v: int) -> bool:
            if v == n:
                return True
            for c in range(k):
                if all(colour[w] != c for w in adj[v]):
                    colour[v] = c
                    if place(v + 1):
                        return True
            colour[v] = -1
            return False

        if place(0):
            return k
    return n


def matching_number(n: int, edges) -> int:
    edges = [tuple(sorted(e)) for e in edges]

    def best(i: int, used: frozenset) -> int:
        if i == len(edges):
            return 0
        u, v = edges[i]
        skip = best(i + 1, used)
        if u in used or v in used:
            return skip
        return max(skip, 1 + best(i + 1, used | {u, v}))

    return best(0, frozenset())


def max_pairing(n: int, edges) -> int:
    """Largest list of disjoint ordered pairs (u_i, v_i) where every two
    indices i != j have u_i ~ u_j or v_i ~ v_j."""
    adj = adjacency(n, edges)
    best = 0

    def grow(pairs: list, used: set) -> None:
        nonlocal best
        best = max(best, len(pairs))
        if len(pairs) + (n - len(used)) // 2 <= best:
            return
        for u in range(n):
            if u in used:
                continue
            for v in range(n):
                if v == u or v in used:
                    continue
                if all(u in adj[a] or v in adj[b] for a, b in pairs):
                    pairs.append((u, v))
                    used |= {u, v}
                    grow(pairs, used)
                    used -= {u, v}
                    pairs.pop()

    grow([], set())
    return best


def _set_partitions(items: list[int]):
    """Partitions of a subset of ``items``: every vertex is unused or in a block."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield part
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _valid_colourings(block: list[int], adj) -> list[dict[int, int]]:
    """Colourings of ``block`` whose bichromatic edges connect the block."""
    out = []
    for bits in itertools.product((0, 1), repeat=len(block)):
        col = dict(zip(block, bits))
        seen = {block[0]}
        stack = [block[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in col and y not in seen and col[y] != col[x]:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == len(block):
            out.append(col)
    return out


def _linked(a: dict, b: dict, adj) -> bool:
    return any(y in b and b[y] == ca for x, ca in a.items() for y in adj[x])


def odd_clique_minor(n: int, edges) -> int:
    """Largest t such that the graph has a K_t odd minor (set partitions x colourings)."""
    adj = adjacency(n, edges)
    best = 0
    for part in _set_partitions(list(range(n))):
        k = len(part)
        if k <= best:
            continue
        options = [_valid_colourings(b, adj) for b in part]
        if any(not o for o in options):
            continue

        def choose(i: int, chosen: list) -> bool:
            if i == k:
                return True
            for col in options[i]:
                if all(_linked(col, c, adj) for c in chosen):
                    chosen.append(col)
                    if choose(i + 1, chosen):
                        return True
                    chosen.pop()
            return False

        if choose(0, []):
            best = k
    return best


def is_bipartite(n: int, edges) -> bool:
    adj = adjacency(n, edges)
    side = [-1] * n
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return False
    return True


def canonical_form(n: int, edges) -> tuple:
    """Lexicographically smallest sorted edge list over all relabellings."""
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return best
