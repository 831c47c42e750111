"""Odd connected pairings and the image-pair graph induced by a vertex map."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidPairing, LimitExceeded
from .graph import Graph

BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True, eq=False)
class Pairing:
    """Ordered pairs (u_i, v_i) on pairwise distinct vertices."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(u), int(v)) for u, v in self.pairs)
        seen: set[int] = set()
        for u, v in pairs:
            if u < 0 or v < 0:
                raise InvalidPairing(f"negative vertex in pair ({u}, {v})")
            if u in seen or v in seen or u == v:
                raise InvalidPairing(f"pair ({u}, {v}) repeats a vertex")
            seen.update((u, v))
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(x for pair in self.pairs for x in pair)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pairing):
            return NotImplemented
        return frozenset(self.pairs) == frozenset(other.pairs)

    def __hash__(self) -> int:
        return hash(frozenset(self.pairs))

    def check_range(self, n: int) -> None:
        for u, v in self.pairs:
            if u >= n or v >= n:
                raise InvalidPairing(f"pair ({u}, {v}) leaves the vertex range [0, {n})")


def canonical_pairing(s: int) -> Pairing:
    return Pairing(tuple((2 * i, 2 * i + 1) for i in range(s)))


def is_odd_connected_pairing(g: Graph, pairing: Pairing) -> bool:
    """Every two pairs are joined by a u-u or a v-v edge."""
    pairing.check_range(g.n)
    masks = g.masks
    pairs = pairing.pairs
    for i, (ui, vi) in enumerate(pairs):
        mu, mv = masks[ui], masks[vi]
        for uj, vj in pairs[i + 1 :]:
            if not ((mu >> uj) & 1 or (mv >> vj) & 1):
                return False
    return True


@dataclass(frozen=True)
class PairingResult:
    size: int
    witness: Pairing
    status: str  # "exact" or "lower-bound"
    nodes: int = 0


def max_odd_connected_pairing(g: Graph, budget: int | None = None) -> PairingResult:
    """Branch and bound over the lowest undecided vertex.

    That vertex is either unused or opens a pair with a higher undecided
    vertex in one of two orientations.  Reversing every pair preserves
    validity, so the first pair is only tried as (low, high).  ``budget``
    caps the number of explored nodes.
    """
    n = g.n
    masks = g.masks
    best: list = [0, ()]
    nodes = 0
    exhausted = False

    def compatible(chosen, a: int, b: int) -> bool:
        ma, mb = masks[a], masks[b]
        for u, v in chosen:
            if not ((ma >> u) & 1 or (mb >> v) & 1):
                return False
        return True

    def dfs(free: int, chosen: list) -> None:
        nonlocal nodes, exhausted
        nodes += 1
        if budget is not None and nodes > budget:
            exhausted = True
            return
        if len(chosen) > best[0]:
            best[0], best[1] = len(chosen), tuple(chosen)
        if len(chosen) + free.bit_count() // 2 <= best[0] or free == 0:
            return
        x = (free & -free).bit_length() - 1
        rest = free & ~(1 << x)
        ys = rest
        while ys:
            y = (ys & -ys).bit_length() - 1
            ys &= ys - 1
            orientations = ((x, y),) if not chosen else ((x, y), (y, x))
            for a, b in orientations:
                if compatible(chosen, a, b):
                    chosen.append((a, b))
                    dfs(rest & ~(1 << y), chosen)
                    chosen.pop()
                    if exhausted:
                        return
        dfs(rest, chosen)

    dfs((1 << n) - 1, [])
    return PairingResult(best[0], Pairing(best[1]), "lower-bound" if exhausted else "exact", nodes)


def brute_force_max_pairing(g: Graph) -> int:
    """Enumerate every valid pairing; exact maximum size."""
    if g.n > BRUTE_FORCE_LIMIT:
        raise LimitExceeded(f"brute force pairing limited to n <= {BRUTE_FORCE_LIMIT}")
    adj = g.to_matrix()
    ordered = [(u, v) for u in range(g.n) for v in range(g.n) if u != v]
    best = 0

    def extend(start: int, chosen: list, used: set) -> None:
        nonlocal best
        best = max(best, len(chosen))
        for k in range(start, len(ordered)):
            u, v = ordered[k]
            if u in used or v in used:
                continue
            if all(adj[u, a] or adj[v, b] for a, b in chosen):
                chosen.append((u, v))
                used.update((u, v))
                extend(k + 1, chosen, used)
                used.difference_update((u, v))
                chosen.pop()

    extend(0, [], set())
    return best


# ---------------------------------------------------------------------------
# image pairs under a map [n] -> [m]


def _image_pair(pi: np.ndarray, a: int, b: int) -> tuple[int, int] | None:
    x, y = int(pi[a]), int(pi[b])
    if x == y:
        return None
    return (x, y) if x < y else (y, x)


def _check_map(pairing: Pairing, pi) -> np.ndarray:
    pi = np.asarray(pi)
    pairing.check_range(len(pi))
    return pi


def respectful_index(pairing: Pairing, pi) -> int:
    """Number of distinct non-degenerate image pairs {pi(u_i), pi(v_i)}."""
    pi = _check_map(pairing, pi)
    images = {_image_pair(pi, u, v) for u, v in pairing.pairs}
    images.discard(None)
    return len(images)


def is_eps_respectful(pairing: Pairing, pi, eps: float) -> bool:
    return respectful_index(pairing, pi) >= eps * pairing.size


def respectful_indices(pairing: Pairing, pi) -> list[int]:
    """One index per distinct non-degenerate image pair (the lowest)."""
    pi = _check_map(pairing, pi)
    seen: set[tuple[int, int]] = set()
    out = []
    for i, (u, v) in enumerate(pairing.pairs):
        img = _image_pair(pi, u, v)
        if img is not None and img not in seen:
            seen.add(img)
            out.append(i)
    return out


BasePair = tuple[int, int]
PairEdge = tuple[BasePair, BasePair]


@dataclass(frozen=True)
class PairGraph:
    """Graph on 2-subsets of [m], stored as sorted pairs of sorted pairs."""

    m: int
    edges: frozenset[PairEdge] = field(default_factory=frozenset)

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"loop at {a}")
            for x, y in (a, b):
                if not (0 <= x < y < self.m):
                    raise ValueError(f"{(x, y)} is not a 2-subset of [{self.m}]")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> Counter:
        deg: Counter = Counter()
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def max_degree(self) -> int:
        deg = self.degrees()
        return max(deg.values()) if deg else 0


def pi_graph_multiplicity(
    pairing: Pairing,
    pi,
    forbidden: Callable[[int, int], bool] | None = None,
    indices: Sequence[int] | None = None,
) -> Counter:
    """Each image edge with the number of index pairs {i, j} emitting it."""
    pi = _check_map(pairing, pi)
    pairs = pairing.pairs
    idx = range(len(pairs)) if indices is None else sorted(indices)
    idx = list(idx)
    counts: Counter = Counter()
    for a, i in enumerate(idx):
        ui, vi = pairs[i]
        for j in idx[a + 1 :]:
            uj, vj = pairs[j]
            left = _image_pair(pi, ui, uj)
            right = _image_pair(pi, vi, vj)
            if left is None or right is None or left == right:
                continue
            if forbidden is not None and (forbidden(ui, uj) or forbidden(vi, vj)):
                continue
            counts[(left, right) if left < right else (right, left)] += 1
    return counts


def build_pi_graph(
    pairing: Pairing,
    pi,
    forbidden: Callable[[int, int], bool] | None = None,
    m: int | None = None,
) -> PairGraph:
    pi_arr = np.asarray(pi)
    if m is None:
        m = int(pi_arr.max()) + 1 if len(pi_arr) else 0
    return PairGraph(m, frozenset(pi_graph_multiplicity(pairing, pi_arr, forbidden)))


def restricted_fiber_sizes(pairing: Pairing, pi) -> Counter:
    """f(z) = |pi^-1(z) intersected with the vertices of the pairing|."""
    pi = _check_map(pairing, pi)
    return Counter(int(pi[x]) for x in pairing.vertices)


def degree_bound_violations(pair_graph: PairGraph, fibers: Counter) -> list[tuple[BasePair, int, int]]:
    """Vertices {x, y} with degree above f(x) f(y), as (vertex, degree, bound)."""
    out = []
    for (x, y), d in sorted(pair_graph.degrees().items()):
        bound = fibers.get(x, 0) * fibers.get(y, 0)
        if d > bound:
            out.append(((x, y), d, bound))
    return out


def random_pairing(n: int, s: int, rng: np.random.Generator) -> Pairing:
    if 2 * s > n:
        raise InvalidPairing(f"an {s}-pairing needs {2 * s} vertices, only {n} available")
    verts = rng.choice(n, size=2 * s, replace=False)
    return Pairing(tuple((int(verts[2 * i]), int(verts[2 * i + 1])) for i in range(s)))


def pairing_from_lists(pairs: Iterable[Sequence[int]]) -> Pairing:
    out = []
    for item in pairs:
        if len(item) != 2:
            raise InvalidPairing(f"pair {item!r} does not have two entries")
        out.append((int(item[0]), int(item[1])))
    return Pairing(tuple(out))
