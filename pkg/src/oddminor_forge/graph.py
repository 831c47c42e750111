"""Dense exact graph kernel.

A :class:`Graph` is an immutable simple undirected graph on ``0..n-1``
whose adjacency is stored as packed ``uint64`` rows.  Small-graph search
code reads the ``masks`` view (Python-int bitsets); large-graph code works
on ``rows`` directly through the compiled kernels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import LimitExceeded

WORD_BITS = 64
DEFAULT_EXACT_LIMIT = 64


def words_for(n: int) -> int:
    return max(1, (n + WORD_BITS - 1) // WORD_BITS)


def pack_bool_matrix(mat: np.ndarray) -> np.ndarray:
    """Pack a square boolean matrix into ``(n, W)`` little-endian words."""
    n = mat.shape[0]
    nbytes = words_for(n) * 8
    packed = np.packbits(mat.astype(bool, copy=False), axis=1, bitorder="little")
    out = np.zeros((n, nbytes), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view("<u8").astype(np.uint64, copy=False)


def unpack_rows(rows: np.ndarray, n: int) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros((0, n), dtype=bool)
    bits = np.unpackbits(np.ascontiguousarray(rows).view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n].astype(bool)


def tail_mask(n: int) -> np.ndarray:
    """Word mask with exactly the bits 0..n-1 set."""
    mask = np.zeros(words_for(n), dtype=np.uint64)
    full, rem = divmod(n, WORD_BITS)
    mask[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rem:
        mask[full] = np.uint64((1 << rem) - 1)
    return mask


class Graph:
    """Finite simple undirected graph with packed adjacency rows."""

    __slots__ = ("n", "rows", "__dict__")

    def __init__(self, n: int, rows: np.ndarray, *, check: bool = True):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        if rows.shape != (n, words_for(n)):
            raise ValueError(f"rows must have shape {(n, words_for(n))}, got {rows.shape}")
        if check and n:
            mat = unpack_rows(rows, words_for(n) * WORD_BITS)
            if mat[:, n:].any():
                raise ValueError("adjacency references vertices >= n")
            mat = mat[:, :n]
            if mat.diagonal().any():
                raise ValueError("self-loops are not allowed")
            if not np.array_equal(mat, mat.T):
                raise ValueError("adjacency must be symmetric")
        rows.flags.writeable = False
        self.n = n
        self.rows = rows

    # -- constructors -----------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros((n, words_for(n)), dtype=np.uint64), check=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        mat = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            mat[u, v] = mat[v, u] = True
        return cls(n, pack_bool_matrix(mat), check=False)

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "Graph":
        mat = np.asarray(mat, dtype=bool)
        return cls(mat.shape[0], pack_bool_matrix(mat))

    @classmethod
    def from_masks(cls, n: int, masks: Sequence[int]) -> "Graph":
        mat = np.zeros((n, n), dtype=bool)
        for u, mask in enumerate(masks):
            while mask:
                low = mask & -mask
                mat[u, low.bit_length() - 1] = True
                mask ^= low
        return cls(n, pack_bool_matrix(mat))

    # -- views --------------------------------------------------------------

    def to_matrix(self) -> np.ndarray:
        return unpack_rows(self.rows, self.n)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhoods as Python-int bitsets."""
        return tuple(int.from_bytes(self.rows[u].tobytes(), "little") for u in range(self.n))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        out: list[tuple[int, ...]] = []
        for start, block in self._row_blocks():
            for row in block:
                out.append(tuple(np.flatnonzero(row).tolist()))
        return tuple(out)

    def _row_blocks(self, block_bits: int = 1 << 24):
        step = max(1, block_bits // max(1, self.n))
        for start in range(0, self.n, step):
            yield start, unpack_rows(self.rows[start : start + step], self.n)

    @cached_property
    def degrees(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        return np.bitwise_count(self.rows).sum(axis=1, dtype=np.int64)

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def neighbors(self, v: int) -> list[int]:
        if "adjacency" in self.__dict__:
            return list(self.adjacency[v])
        return np.flatnonzero(unpack_rows(self.rows[v : v + 1], self.n)[0]).tolist()

    def has_edge(self, u: int, v: int) -> bool:
        return bool((int(self.rows[u, v >> 6]) >> (v & 63)) & 1)

    @property
    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self.edge_array().tolist()]

    def edge_array(self) -> np.ndarray:
        """``(E, 2)`` int array of edges u < v in lexicographic order."""
        parts = [np.zeros((0, 2), dtype=np.int64)]
        for start, block in self._row_blocks():
            idx = np.argwhere(block)
            idx[:, 0] += start
            parts.append(idx[idx[:, 1] > idx[:, 0]])
        return np.concatenate(parts)

    # -- derived graphs -----------------------------------------------------

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        idx = np.asarray(list(vertices), dtype=np.int64)
        sub = self.to_matrix()[np.ix_(idx, idx)]
        return Graph(len(idx), pack_bool_matrix(sub), check=False)

    def with_edge(self, u: int, v: int) -> "Graph":
        return self._toggled(u, v, True)

    def without_edge(self, u: int, v: int) -> "Graph":
        return self._toggled(u, v, False)

    def without_vertex(self, v: int) -> "Graph":
        return self.induced_subgraph([x for x in range(self.n) if x != v])

    def _toggled(self, u: int, v: int, present: bool) -> "Graph":
        if u == v:
            raise ValueError("self-loops are not allowed")
        rows = self.rows.copy()
        for a, b in ((u, v), (v, u)):
            bit = np.uint64(1) << np.uint64(b & 63)
            if present:
                rows[a, b >> 6] |= bit
            else:
                rows[a, b >> 6] &= ~bit
        return Graph(self.n, rows, check=False)

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.rows, other.rows)

    def __hash__(self) -> int:
        return hash((self.n, self.rows.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"

    def is_subgraph_of(self, other: "Graph") -> bool:
        """Same vertex set and every edge of ``self`` is an edge of ``other``."""
        return self.n == other.n and not np.any(self.rows & ~other.rows)


@dataclass(frozen=True)
class Matching:
    edges: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.edges)

    def is_valid_in(self, g: Graph) -> bool:
        seen: set[int] = set()
        for u, v in self.edges:
            if u in seen or v in seen or not g.has_edge(u, v):
                return False
            seen.update((u, v))
        return True


# ---------------------------------------------------------------------------
# basic operations


def complement(g: Graph) -> Graph:
    if g.n == 0:
        return g
    return Graph(g.n, K.complement_rows(g.rows, tail_mask(g.n)[-1]), check=False)


def list_triangles(g: Graph) -> set[tuple[int, int, int]]:
    """All triangles as sorted vertex triples."""
    if g.n < 3:
        return set()
    count = K.count_triangles(g.rows)
    out = np.empty((count, 3), dtype=np.int64)
    K.fill_triangles(g.rows, out)
    return {tuple(t) for t in out.tolist()}


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    if g.n < 3:
        return None
    u, v, w = K.first_triangle(g.rows)
    return None if u < 0 else (int(u), int(v), int(w))


def is_triangle_free(g: Graph) -> bool:
    return find_triangle(g) is None


def independence_at_most_two(g: Graph) -> bool:
    """alpha(g) <= 2, decided as: the complement of g is triangle-free."""
    return is_triangle_free(complement(g))


def max_degree(g: Graph) -> int:
    return int(g.degrees.max()) if g.n else 0


def is_bipartite(g: Graph) -> bool:
    return odd_cycle(g) is None


def odd_cycle(g: Graph) -> list[int] | None:
    """Some odd cycle of ``g`` as a vertex list, or None if g is bipartite."""
    side = [-1] * g.n
    parent = [-1] * g.n
    adj = g.adjacency
    for s in range(g.n):
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if side[w] == -1:
                    side[w] = 1 - side[v]
                    parent[w] = v
                    queue.append(w)
                elif side[w] == side[v]:
                    return _close_cycle(parent, v, w)
    return None


def _close_cycle(parent: list[int], a: int, b: int) -> list[int]:
    path_a = [a]
    while parent[path_a[-1]] != -1:
        path_a.append(parent[path_a[-1]])
    path_b = [b]
    while parent[path_b[-1]] != -1:
        path_b.append(parent[path_b[-1]])
    on_a = {v: i for i, v in enumerate(path_a)}
    for j, v in enumerate(path_b):
        if v in on_a:
            return path_a[: on_a[v] + 1] + path_b[:j][::-1]
    raise AssertionError("BFS tree paths must meet at the root")


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    adj = g.adjacency
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


# ---------------------------------------------------------------------------
# chromatic number: DSATUR branch and bound on bitsets


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _greedy_clique(masks: Sequence[int], n: int) -> int:
    best = 1 if n else 0
    for start in range(n):
        cand = masks[start]
        size = 1
        while cand:
            # pick candidate with most neighbours among remaining candidates
            pick, pick_deg = -1, -1
            c = cand
            while c:
                low = c & -c
                v = low.bit_length() - 1
                c ^= low
                d = _popcount(masks[v] & cand)
                if d > pick_deg:
                    pick, pick_deg = v, d
            size += 1
            cand &= masks[pick]
        best = max(best, size)
    return best


def _dsatur_greedy(masks: Sequence[int], n: int) -> list[int]:
    colors = [-1] * n
    class_masks: list[int] = []
    uncolored = (1 << n) - 1
    degs = [_popcount(m) for m in masks]
    for _ in range(n):
        v = _select_vertex(masks, degs, class_masks, uncolored)
        for c, cm in enumerate(class_masks):
            if not cm & masks[v]:
                break
        else:
            c = len(class_masks)
            class_masks.append(0)
        class_masks[c] |= 1 << v
        colors[v] = c
        uncolored &= ~(1 << v)
    return colors


def _select_vertex(masks, degs, class_masks, uncolored) -> int:
    best_v, best_key = -1, None
    u = uncolored
    while u:
        low = u & -u
        v = low.bit_length() - 1
        u ^= low
        sat = sum(1 for cm in class_masks if cm & masks[v])
        key = (sat, degs[v])
        if best_key is None or key > best_key:
            best_v, best_key = v, key
    return best_v


def optimal_coloring(g: Graph, limit: int = DEFAULT_EXACT_LIMIT) -> list[int]:
    """A minimum proper colouring (colour index per vertex)."""
    n = g.n
    if n > limit:
        raise LimitExceeded(f"exact colouring limited to n <= {limit}, got n = {n}")
    if n == 0:
        return []
    masks = g.masks
    best = _dsatur_greedy(masks, n)
    best_k = max(best) + 1
    lower = _greedy_clique(masks, n)
    if best_k == lower:
        return best
    degs = [_popcount(m) for m in masks]
    colors = [-1] * n
    class_masks: list[int] = []

    def search(uncolored: int) -> bool:
        nonlocal best, best_k
        if not uncolored:
            best, best_k = colors.copy(), len(class_masks)
            return best_k == lower
        v = _select_vertex(masks, degs, class_masks, uncolored)
        rest = uncolored & ~(1 << v)
        for c in range(len(class_masks)):
            if class_masks[c] & masks[v]:
                continue
            class_masks[c] |= 1 << v
            colors[v] = c
            done = search(rest)
            class_masks[c] &= ~(1 << v)
            colors[v] = -1
            if done:
                return True
        if len(class_masks) + 1 < best_k:
            class_masks.append(1 << v)
            colors[v] = len(class_masks) - 1
            done = search(rest)
            class_masks.pop()
            colors[v] = -1
            if done:
                return True
        return False

    search((1 << n) - 1)
    return best


def chromatic_number(g: Graph, limit: int = DEFAULT_EXACT_LIMIT) -> int:
    coloring = optimal_coloring(g, limit)
    return max(coloring) + 1 if coloring else 0


# ---------------------------------------------------------------------------
# maximum matching: Edmonds blossom shrinking with greedy warm start


def greedy_matching(g: Graph) -> Matching:
    """Maximal (not maximum) matching, scanning vertices in index order."""
    mate = [-1] * g.n
    adj = g.adjacency
    for v in range(g.n):
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break
    return Matching(frozenset((v, mate[v]) for v in range(g.n) if v < mate[v]))


def max_matching(g: Graph) -> Matching:
    mate = _max_matching_mate(g.n, g.adjacency)
    return Matching(frozenset((v, mate[v]) for v in range(g.n) if v < mate[v]))


def matching_number(n: int, adj: Sequence[Sequence[int]]) -> int:
    """nu of the graph given by adjacency lists (no Graph object needed)."""
    mate = _max_matching_mate(n, adj)
    return sum(1 for v in range(n) if v < mate[v])


def leaf_reduced_matching_number(n: int, adj: Sequence[Sequence[int]]) -> int:
    """nu via repeated leaf matching, with blossom search on whatever core remains.

    Matching a degree-one vertex to its neighbour is always consistent with
    some maximum matching, so forests never reach the blossom stage.
    """
    nbrs = [set(a) for a in adj]
    alive = [True] * n
    stack = [v for v in range(n) if len(nbrs[v]) == 1]
    matched = 0

    def drop(v: int) -> None:
        alive[v] = False
        for w in nbrs[v]:
            nbrs[w].discard(v)
            if alive[w] and len(nbrs[w]) == 1:
                stack.append(w)
        nbrs[v] = set()

    while stack:
        v = stack.pop()
        if not alive[v] or len(nbrs[v]) != 1:
            continue
        (w,) = nbrs[v]
        matched += 1
        alive[v] = False
        nbrs[w].discard(v)
        nbrs[v] = set()
        drop(w)
    core = [v for v in range(n) if alive[v] and nbrs[v]]
    if not core:
        return matched
    index = {v: i for i, v in enumerate(core)}
    return matched + matching_number(len(core), [[index[w] for w in nbrs[v]] for v in core])


def _max_matching_mate(n: int, adj: Sequence[Sequence[int]]) -> list[int]:
    mate = [-1] * n
    for v in range(n):
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break

    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n
    in_blossom = [False] * n
    lca_mark = [0] * n
    stamp = 0

    def lca(a: int, b: int) -> int:
        nonlocal stamp
        stamp += 1
        while True:
            a = base[a]
            lca_mark[a] = stamp
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if lca_mark[b] == stamp:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, marked: list[int]) -> None:
        while base[v] != b:
            for x in (base[v], base[mate[v]]):
                if not in_blossom[x]:
                    in_blossom[x] = True
                    marked.append(x)
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_path(root: int) -> int:
        touched = [root]
        in_tree[root] = True
        queue = deque([root])
        found = -1
        while queue and found == -1:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    marked: list[int] = []
                    mark_path(v, cur, to, marked)
                    mark_path(to, cur, v, marked)
                    for i in touched:
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                    for x in marked:
                        in_blossom[x] = False
                elif parent[to] == -1:
                    parent[to] = v
                    touched.append(to)
                    if mate[to] == -1:
                        found = to
                        break
                    nxt = mate[to]
                    in_tree[nxt] = True
                    touched.append(nxt)
                    queue.append(nxt)
        if found != -1:
            v = found
            while v != -1:
                pv = parent[v]
                ppv = mate[pv]
                mate[v], mate[pv] = pv, v
                v = ppv
        for i in touched:
            parent[i] = -1
            base[i] = i
            in_tree[i] = False
        return found

    for root in range(n):
        if mate[root] == -1 and adj[root]:
            find_path(root)
    return mate


# ---------------------------------------------------------------------------
# brute-force oracles used by the test-suite and acceptance checks


def brute_force_chromatic_number(g: Graph) -> int:
    n = g.n
    if n == 0:
        return 0
    edges = g.edges()
    for k in range(1, n + 1):
        for assignment in _colorings(n, k):
            if all(assignment[u] != assignment[v] for u, v in edges):
                return k
    return n


def _colorings(n: int, k: int):
    # restricted-growth strings: first occurrence of colour c precedes c+1
    def rec(i: int, used: int, acc: list[int]):
        if i == n:
            yield acc
            return
        for c in range(min(used + 1, k)):
            acc.append(c)
            yield from rec(i + 1, max(used, c + 1), acc)
            acc.pop()

    yield from rec(0, 0, [])


def brute_force_matching_number(g: Graph) -> int:
    edges = g.edges()
    best = 0
    for r in range(len(edges), 0, -1):
        if r <= best or r > g.n // 2:
            continue
        for subset in combinations(edges, r):
            verts = [x for e in subset for x in e]
            if len(set(verts)) == 2 * r:
                return r
    return best


def brute_force_alpha_at_most_two(g: Graph) -> bool:
    return not any(
        not g.has_edge(a, b) and not g.has_edge(a, c) and not g.has_edge(b, c)
        for a, b, c in combinations(range(g.n), 3)
    )


# ---------------------------------------------------------------------------
# named families


def complete_graph(n: int) -> Graph:
    return complement(Graph.empty(n))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def wheel_graph(rim: int) -> Graph:
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph.from_edges(rim + 1, edges)


def perfect_matching_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Plain G(n, p) sample for tests and corpora (not the construction sampler)."""
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph(n, pack_bool_matrix(upper | upper.T), check=False)


def graph_from_bitmask(n: int, code: int) -> Graph:
    """Graph whose edge (i, j), i < j, is bit k of ``code`` in lexicographic pair order."""
    edges = [pair for k, pair in enumerate(combinations(range(n), 2)) if (code >> k) & 1]
    return Graph.from_edges(n, edges)
