"""Join partitions, criticality, and the small-n chromatic-number sweep.

Graphs on at most 8 vertices are handled as integer codes: bit k of a code
is the k-th pair (i, j), i < j, in lexicographic order, matching
:func:`graph.graph_from_bitmask`.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations, permutations

import numpy as np
from numba import njit

from .errors import LimitExceeded, PreconditionFailed
from .graph import (
    DEFAULT_EXACT_LIMIT,
    Graph,
    chromatic_number,
    complement,
    connected_components,
    graph_from_bitmask,
    independence_at_most_two,
)
from .oddminor import max_odd_clique_minor

CODE_LIMIT = 8


@dataclass(frozen=True)
class JoinPartition:
    x1: frozenset[int]
    x2: frozenset[int]

    def __post_init__(self):
        if not self.x1 or not self.x2 or self.x1 & self.x2:
            raise ValueError("join partition needs two disjoint non-empty sides")

    def is_valid_in(self, g: Graph) -> bool:
        if self.x1 | self.x2 != frozenset(range(g.n)):
            return False
        return all(g.has_edge(a, b) for a in self.x1 for b in self.x2)


def find_join_partition(g: Graph) -> JoinPartition | None:
    """X1 is the complement component holding vertex 0; None if the complement is connected."""
    if g.n < 2:
        return None
    comps = connected_components(complement(g))
    if len(comps) < 2:
        return None
    x1 = frozenset(next(c for c in comps if 0 in c))
    return JoinPartition(x1, frozenset(range(g.n)) - x1)


def is_k_critical(g: Graph, k: int, limit: int = DEFAULT_EXACT_LIMIT) -> bool:
    """chi(g) = k and deleting any edge or any vertex lowers it to k - 1."""
    if g.n > limit:
        raise LimitExceeded(f"criticality check limited to n <= {limit}")
    if chromatic_number(g, limit) != k:
        return False
    for u, v in g.edges():
        if chromatic_number(g.without_edge(u, v), limit) != k - 1:
            return False
    for v in range(g.n):
        if chromatic_number(g.without_vertex(v), limit) != k - 1:
            return False
    return True


@dataclass(frozen=True)
class PropReport:
    n: int
    chi: int
    t_star: int
    bound: int  # ceil(3 t* / 2)
    verdict: bool
    literal_t: int  # t* + 1: g has no K_t odd minor
    literal_bound: int  # ceil(3 (t - 1) / 2)
    literal_verdict: bool


@dataclass(frozen=True)
class KSReport:
    n: int
    t_star: int
    needed: int
    verdict: bool


def _require_alpha_two(g: Graph) -> None:
    if not independence_at_most_two(g):
        raise PreconditionFailed("graph has an independent set of size 3")


def _exact_t_star(g: Graph) -> int:
    result = max_odd_clique_minor(g)
    if result.status != "exact":
        raise LimitExceeded("odd-minor search did not finish")
    return result.t


def check_prop_1_4(g: Graph, limit: int = DEFAULT_EXACT_LIMIT) -> PropReport:
    _require_alpha_two(g)
    chi = chromatic_number(g, limit)
    t_star = _exact_t_star(g)
    bound = math.ceil(3 * t_star / 2)
    t = t_star + 1
    literal = math.ceil(3 * (t - 1) / 2)
    return PropReport(g.n, chi, t_star, bound, chi <= bound, t, literal, chi <= literal)


def check_ks_bound(g: Graph) -> KSReport:
    _require_alpha_two(g)
    t_star = _exact_t_star(g)
    needed = math.ceil(g.n / 3)
    return KSReport(g.n, t_star, needed, t_star >= needed)


# ---------------------------------------------------------------------------
# code-level enumeration


def pair_table(n: int) -> np.ndarray:
    """``table[i, j]`` = bit index of pair {i, j}; -1 on the diagonal."""
    table = np.full((n, n), -1, dtype=np.int64)
    for k, (i, j) in enumerate(combinations(range(n), 2)):
        table[i, j] = table[j, i] = k
    return table


def _pair_lists(n: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = np.array(list(combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)
    return pairs[:, 0].copy(), pairs[:, 1].copy()


@njit(cache=True)
def _triangle_free_codes(n, table, total):
    out = np.empty(total, dtype=np.int64)
    k = 0
    for code in range(total):
        ok = True
        for a in range(n):
            if not ok:
                break
            for b in range(a + 1, n):
                if not (code >> table[a, b]) & 1:
                    continue
                for c in range(b + 1, n):
                    if (code >> table[a, c]) & 1 and (code >> table[b, c]) & 1:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            out[k] = code
            k += 1
    return out[:k]


def triangle_free_codes(n: int) -> np.ndarray:
    """Every labelled triangle-free graph on n vertices, as codes."""
    if n > CODE_LIMIT - 1:
        raise LimitExceeded("code enumeration limited to n <= 7")
    return _triangle_free_codes(n, pair_table(n), 1 << (n * (n - 1) // 2))


def alpha_two_codes(n: int) -> np.ndarray:
    """Every labelled graph on n vertices with independence number <= 2.

    These are exactly the complements of the triangle-free graphs.
    """
    full = (1 << (n * (n - 1) // 2)) - 1
    return np.sort(triangle_free_codes(n) ^ full)


@njit(cache=True)
def _canonical_codes(codes, perms, table, pa, pb):
    out = np.empty(len(codes), dtype=np.int64)
    npairs = len(pa)
    ea = np.empty(npairs, dtype=np.int64)
    eb = np.empty(npairs, dtype=np.int64)
    for idx in range(len(codes)):
        code = codes[idx]
        ne = 0
        for k in range(npairs):
            if (code >> k) & 1:
                ea[ne] = pa[k]
                eb[ne] = pb[k]
                ne += 1
        best = code
        for r in range(perms.shape[0]):
            val = 0
            for e in range(ne):
                val |= np.int64(1) << table[perms[r, ea[e]], perms[r, eb[e]]]
            if val < best:
                best = val
        out[idx] = best
    return out


def canonical_codes(codes: np.ndarray, n: int) -> np.ndarray:
    """Smallest code over all vertex relabellings (isomorphism-class key)."""
    if n > CODE_LIMIT:
        raise LimitExceeded("canonical codes limited to n <= 8")
    perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, max(n, 1))
    pa, pb = _pair_lists(n)
    return _canonical_codes(np.asarray(codes, dtype=np.int64), perms, pair_table(n), pa, pb)


def isomorphism_classes(codes: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(representative codes, labelled multiplicities), representatives sorted."""
    if n <= 1:
        return np.asarray(codes, dtype=np.int64), np.ones(len(codes), dtype=np.int64)
    # the complement has fewer edges for dense inputs; relabelling commutes with it
    full = (1 << (n * (n - 1) // 2)) - 1
    sparse = np.where(np.bitwise_count(np.asarray(codes, dtype=np.int64)) * 2 > n * (n - 1) // 2, codes ^ full, codes)
    flipped = sparse != codes
    canon = canonical_codes(sparse, n)
    canon = np.where(flipped, canon ^ full, canon)
    reps, counts = np.unique(canon, return_counts=True)
    return reps, counts


# ---------------------------------------------------------------------------
# Gallai candidates


@njit(cache=True, inline="always")
def _low(x):
    k = 0
    while not (x >> k) & 1:
        k += 1
    return k


@njit(cache=True)
def _gallai_candidates(n, pa, pb, max_codeg, min_chi):
    """Codes of graphs H with max degree <= max_codeg and clique cover number >= min_chi.

    Filters run cheapest first: degrees, then the matching bound
    cover(H) <= n - nu(H), then the exact clique cover k together with
    vertex-criticality and the degree bound deg_H <= n - k.
    """
    npairs = len(pa)
    total = np.int64(1) << npairs
    full = (1 << n) - 1
    out = np.empty(1024, dtype=np.int64)
    count = 0
    deg = np.zeros(n, dtype=np.int64)
    adj = np.zeros(n, dtype=np.int64)
    best = np.zeros(1 << n, dtype=np.int64)
    cliques = np.zeros(1 << n, dtype=np.bool_)
    for code in range(total):
        for v in range(n):
            deg[v] = 0
            adj[v] = 0
        ok = True
        for k in range(npairs):
            if (code >> k) & 1:
                a = pa[k]
                b = pb[k]
                deg[a] += 1
                deg[b] += 1
                if deg[a] > max_codeg or deg[b] > max_codeg:
                    ok = False
                    break
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        if not ok:
            continue
        # matching number by subset DP on the lowest vertex
        for s in range(1, full + 1):
            low = _low(s)
            rest = s & ~(1 << low)
            val = best[rest]
            nb = adj[low] & rest
            while nb:
                w = _low(nb)
                nb &= nb - 1
                if 1 + best[rest & ~(1 << w)] > val:
                    val = 1 + best[rest & ~(1 << w)]
            best[s] = val
        if n - best[full] < min_chi:
            continue
        # exact clique cover number
        for s in range(1, full + 1):
            low = _low(s)
            rest = s & ~(1 << low)
            cliques[s] = rest == 0 or (cliques[rest] and (adj[low] & rest) == rest)
        for s in range(1, full + 1):
            low = _low(s)
            rest = s & ~(1 << low)
            nb = adj[low] & rest
            val = n + 1
            sub = nb
            while True:
                if cliques[sub | (1 << low)] and 1 + best[rest & ~sub] < val:
                    val = 1 + best[rest & ~sub]
                if sub == 0:
                    break
                sub = (sub - 1) & nb
            best[s] = val
        k = best[full]
        if k < min_chi:
            continue
        # vertex-critical: every H - v has clique cover number k - 1
        for v in range(n):
            if best[full & ~(1 << v)] != k - 1 or deg[v] > n - k:
                ok = False
                break
        if ok:
            if count == len(out):
                out = np.concatenate((out, np.empty(len(out), dtype=np.int64)))
            out[count] = code
            count += 1
    return out[:count]


def gallai_candidates(n: int) -> list[Graph]:
    """Superset of the k-critical graphs on n vertices with n <= 2k - 2.

    Such a graph has minimum degree >= k - 1 >= n / 2, so its complement H
    has max degree <= n - 1 - ceil(n / 2), and chi(G), the clique cover
    number of H, is at least n/2 + 1.  Every returned graph is also
    vertex-critical.
    """
    if n > CODE_LIMIT:
        raise LimitExceeded("Gallai enumeration limited to n <= 8")
    if n < 1:
        return []
    pa, pb = _pair_lists(n)
    max_codeg = n - 1 - math.ceil(n / 2)
    k_min = math.ceil((n + 2) / 2)
    codes = _gallai_candidates(n, pa, pb, max_codeg, k_min)
    return [complement(graph_from_bitmask(n, int(c))) for c in codes]


def critical_graphs_without_join(n: int) -> tuple[int, list[Graph]]:
    """(number of k-critical graphs with n <= 2k - 2, those lacking a join partition)."""
    found = 0
    bad = []
    for g in gallai_candidates(n):
        k = chromatic_number(g)
        if k >= 2 and n <= 2 * k - 2 and is_k_critical(g, k):
            found += 1
            jp = find_join_partition(g)
            if jp is None or not jp.is_valid_in(g):
                bad.append(g)
    return found, bad


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepRecord:
    n: int
    code: int
    labelled: int
    chi: int
    t_star: int
    prop_verdict: bool
    literal_verdict: bool
    ks_verdict: bool
    ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def check_code(n: int, code: int, labelled: int = 1) -> SweepRecord:
    g = graph_from_bitmask(n, int(code))
    prop = check_prop_1_4(g)
    ks = check_ks_bound(g)
    ratio = prop.chi / prop.t_star if prop.t_star else 0.0
    return SweepRecord(n, int(code), int(labelled), prop.chi, prop.t_star, prop.verdict, prop.literal_verdict, ks.verdict, ratio)


def _check_batch(n: int, items: list[tuple[int, int]]) -> list[SweepRecord]:
    return [check_code(n, c, k) for c, k in items]


def sweep_corpus(n: int, reduce_isomorphism: bool = True) -> list[tuple[int, int]]:
    """(code, labelled multiplicity) pairs covering every alpha <= 2 graph on n vertices."""
    codes = alpha_two_codes(n)
    if not reduce_isomorphism:
        return [(int(c), 1) for c in codes]
    reps, counts = isomorphism_classes(codes, n)
    return [(int(c), int(k)) for c, k in zip(reps, counts)]


def sweep_appendix(ns, jobs: int = 1, reduce_isomorphism: bool = True) -> list[SweepRecord]:
    records: list[SweepRecord] = []
    for n in ns:
        items = sweep_corpus(n, reduce_isomorphism)
        if jobs <= 1:
            records.extend(_check_batch(n, items))
            continue
        size = max(1, math.ceil(len(items) / (4 * jobs)))
        batches = [items[i : i + size] for i in range(0, len(items), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_check_batch, [n] * len(batches), batches):
                records.extend(part)
    return records
