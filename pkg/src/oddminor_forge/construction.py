"""Randomised two-blowup overlay producing a graph with independence number <= 2.

Pipeline, all driven by one 64-bit seed:

    H*_X ~ G(m, m^-1/2) --thin--> H_X ~ G(m, p) --strip triangles--> H'_X
    pi_X : [n] -> [m] uniform
    H0 = pullback(H'_R, pi_R) u pullback(H'_B, pi_B)   (edges coloured red/blue)
    H  = H0 minus every red edge closed by a blue cherry and vice versa
    G  = complement(H)

Large instances never go through an n x n boolean matrix; pullbacks and
cherry closures are computed on the m-vertex base graphs and expanded into
packed rows with the kernels below.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit

from . import _kernels as K
from .errors import (
    CouplingViolation,
    DegenerateParams,
    MonochromaticTriangle,
    ResidualTriangle,
)
from .graph import (
    Graph,
    complement,
    find_triangle,
    independence_at_most_two,
    pack_bool_matrix,
    tail_mask,
    words_for,
)

STREAM_KEY = b"oddminor-forge"
STREAM_ORDER = ("coupled_r", "coupled_b", "pi_r", "pi_b")
# above this size verification skips the generic n x n triangle scan
GENERIC_CHECK_LIMIT = 8192


# ---------------------------------------------------------------------------
# seeding


def derive_seed(seed: int, *keys: object) -> int:
    """64-bit child seed from a keyed hash of (seed, keys...)."""
    h = hashlib.blake2b(digest_size=8, key=STREAM_KEY)
    h.update((int(seed) & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"))
    for k in keys:
        h.update(b"\x1f")
        h.update(str(k).encode())
    return int.from_bytes(h.digest(), "little")


def stream(seed: int, *keys: object) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *keys)))


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    m: int
    p: float
    seed: int = 0
    use_paper_defaults: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DegenerateParams(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise DegenerateParams(f"m must be >= 1, got {self.m}")
        if not (0.0 <= self.p <= 1.0):
            raise DegenerateParams(f"p must lie in [0, 1], got {self.p}")

    @property
    def coupling_p(self) -> float:
        return self.m ** -0.5


def paper_m(n: int) -> int:
    return math.ceil(n / math.log(n) ** 8)


def default_p(m: int) -> float:
    log_m = math.log(m)
    if log_m == 0:
        return math.inf
    return 1.0 / (math.sqrt(m) * log_m**2)


def default_params(n: int, seed: int = 0) -> ConstructionParams:
    """m = ceil(n / ln^8 n), p = 1 / (sqrt(m) ln^2 m)."""
    if n < 3:
        raise DegenerateParams(f"n must be >= 3 for the default formulas, got n = {n}")
    m = paper_m(n)
    if m < 2:
        raise DegenerateParams(f"default m = {m} < 2 at n = {n}")
    p = default_p(m)
    if p > 1:
        raise DegenerateParams(f"default p = {p:.6g} > 1 at n = {n} (m = {m})")
    return ConstructionParams(n=n, m=m, p=p, seed=seed, use_paper_defaults=True)


def smallest_default_n(upper: int = 1 << 62) -> int:
    """Smallest n >= 3 accepted by :func:`default_params`.

    ``n / ln^8 n`` dips far below 1 after n = 3 and only climbs back for
    astronomically large n, so the scan is a bisection on that increasing
    tail (past e^8, where the ratio is monotone).
    """
    for n in range(3, 3000):
        if _accepted(n):
            return n
    lo, hi = 3000, upper
    if not _accepted(hi):
        raise ValueError("no accepted n below the search ceiling")
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if _accepted(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _accepted(n: int) -> bool:
    try:
        default_params(n)
    except DegenerateParams:
        return False
    return True


# ---------------------------------------------------------------------------
# sampling


def _graph_from_pair_mask(m: int, keep: np.ndarray) -> Graph:
    iu, ju = np.triu_indices(m, 1)
    mat = np.zeros((m, m), dtype=bool)
    mat[iu[keep], ju[keep]] = True
    mat |= mat.T
    return Graph(m, pack_bool_matrix(mat), check=False)


def sample_gnp(m: int, p: float, rng: np.random.Generator) -> Graph:
    """G(m, p) with one uniform draw per pair, pairs in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    draws = rng.random(m * (m - 1) // 2)
    return _graph_from_pair_mask(m, draws < p)


def sample_coupled_pair(m: int, p: float, rng: np.random.Generator) -> tuple[Graph, Graph]:
    """(H*, H) with H* ~ G(m, m^-1/2) and H an independent thinning of H* at rate p sqrt(m)."""
    q = m ** -0.5
    if p > q:
        raise CouplingViolation(f"p = {p:.6g} exceeds m^-1/2 = {q:.6g} (m = {m})")
    retain = min(1.0, p * math.sqrt(m))
    if math.isclose(retain, 1.0, rel_tol=0.0, abs_tol=1e-12):
        retain = 1.0
    star = rng.random(m * (m - 1) // 2) < q
    kept = star.copy()
    kept[star] = rng.random(int(star.sum())) < retain
    return _graph_from_pair_mask(m, star), _graph_from_pair_mask(m, kept)


def sample_uniform_map(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    if m < 1:
        raise ValueError("m must be >= 1")
    pi = rng.integers(0, m, size=n, dtype=np.int64)
    pi.flags.writeable = False
    return pi


def strip_triangle_edges(g: Graph) -> Graph:
    """Drop, simultaneously, every edge lying in a triangle of ``g``."""
    if g.n < 3:
        return g
    return Graph(g.n, g.rows & ~K.edges_in_triangles(g.rows), check=False)


# ---------------------------------------------------------------------------
# coloured graphs and pullbacks


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    """Edge set with each edge carrying red, blue, or both."""

    red: Graph
    blue: Graph

    def __post_init__(self):
        if self.red.n != self.blue.n:
            raise ValueError("red and blue layers must share the vertex set")

    @property
    def n(self) -> int:
        return self.red.n

    @property
    def underlying(self) -> Graph:
        return Graph(self.n, self.red.rows | self.blue.rows, check=False)

    def colors(self, u: int, v: int) -> frozenset[str]:
        out = set()
        if self.red.has_edge(u, v):
            out.add("red")
        if self.blue.has_edge(u, v):
            out.add("blue")
        return frozenset(out)

    @classmethod
    def from_edge_colors(cls, n: int, colored: dict[tuple[int, int], str | set[str]]) -> "ColoredGraph":
        red, blue = [], []
        for (u, v), cols in colored.items():
            cols = {cols} if isinstance(cols, str) else set(cols)
            if not cols or not cols <= {"red", "blue"}:
                raise ValueError(f"edge ({u}, {v}) needs a non-empty subset of red/blue")
            if "red" in cols:
                red.append((u, v))
            if "blue" in cols:
                blue.append((u, v))
        return cls(Graph.from_edges(n, red), Graph.from_edges(n, blue))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self.red == other.red and self.blue == other.blue


def fiber_rows(pi: np.ndarray, m: int) -> np.ndarray:
    """``(m, W)`` packed indicator rows of the preimages pi^-1(x)."""
    n = len(pi)
    rows = np.zeros((m, words_for(n)), dtype=np.uint64)
    idx = np.arange(n, dtype=np.int64)
    np.bitwise_or.at(rows, (np.asarray(pi), idx >> 6), np.uint64(1) << (idx & 63).astype(np.uint64))
    return rows


def fiber_sizes(pi: np.ndarray, m: int) -> np.ndarray:
    return np.bincount(np.asarray(pi, dtype=np.int64), minlength=m)


def _check_map(pi: np.ndarray, m: int, name: str) -> np.ndarray:
    pi = np.asarray(pi, dtype=np.int64)
    if pi.ndim != 1 or (len(pi) and (pi.min() < 0 or pi.max() >= m)):
        raise ValueError(f"{name} must be a total map into [0, {m})")
    return pi


def pullback(base: Graph, pi: np.ndarray) -> Graph:
    """Graph on [n]: {u, v} is an edge iff {pi(u), pi(v)} is an edge of ``base``."""
    pi = _check_map(pi, base.n, "pi")
    expanded = K.gather_or_rows(base.rows, fiber_rows(pi, base.n), base.n)
    return Graph(len(pi), expanded[pi], check=False)


def overlay_pullbacks(hprime_r: Graph, hprime_b: Graph, pi_r, pi_b) -> ColoredGraph:
    if hprime_r.n != hprime_b.n:
        raise ValueError("base graphs must share the vertex count m")
    if len(pi_r) != len(pi_b):
        raise ValueError("maps must share the domain [n]")
    for name, base in (("red", hprime_r), ("blue", hprime_b)):
        tri = find_triangle(base)
        if tri is not None:
            # a base triangle lifts to a monochromatic triangle of H0
            raise MonochromaticTriangle(f"{name} base graph has triangle {tri}")
    return ColoredGraph(pullback(hprime_r, pi_r), pullback(hprime_b, pi_b))


def _closed_rows(graph: Graph) -> np.ndarray:
    """Packed rows: bit (u, v) set iff u != v have a common neighbour."""
    rows = K.gather_or_rows(graph.rows, graph.rows, graph.n)
    idx = np.arange(graph.n)
    rows[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
    return rows


def resolve_minority_edges(h0: ColoredGraph) -> Graph:
    """Delete each red edge closed by a blue cherry and each blue edge closed by a red cherry."""
    red, blue = h0.red.rows, h0.blue.rows
    red_closed = _closed_rows(h0.red)
    blue_closed = _closed_rows(h0.blue)
    drop_red = red & blue_closed
    drop_blue = blue & red_closed
    if np.any((drop_red | drop_blue) & red & blue):
        # a bicoloured edge with a cherry would close a monochromatic triangle
        raise MonochromaticTriangle("a deleted edge carries both colours")
    h = Graph(h0.n, (red | blue) & ~drop_red & ~drop_blue, check=False)
    tri = find_triangle(h)
    if tri is not None:
        raise ResidualTriangle(f"triangle {tri} survived minority-edge deletion")
    return h


# -- base-level cherry algebra for pullback overlays -------------------------


def closed_base_pairs(hprime: Graph, pi: np.ndarray) -> np.ndarray:
    """m x m bool: (x, y) has a common neighbour in ``hprime`` whose fibre is non-empty.

    For u, v in [n] the pair {u, v} is closed by a cherry of this colour in
    H0 exactly when ``closed[pi(u), pi(v)]``; the diagonal covers u, v in the
    same fibre.
    """
    m = hprime.n
    # float32 products are exact here: every entry is an integer <= m
    a = hprime.to_matrix().astype(np.float32)
    occupied = (fiber_sizes(pi, m) > 0).astype(np.float32)
    return (a * occupied) @ a > 0.5


def expand_base_rows(base_mask: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """``(m, W)`` rows: OR of fibres pi^-1(y) over y with base_mask[x, y]."""
    m = base_mask.shape[0]
    return K.gather_or_rows(pack_bool_matrix(base_mask), fiber_rows(pi, m), m)


@njit(cache=True)
def _resolve_pullback_rows(red, blue, pi_r, pi_b, red_closed, blue_closed):
    n, nw = red.shape
    out = np.empty_like(red)
    clash = -1
    for u in range(n):
        rc = red_closed[pi_r[u]]
        bc = blue_closed[pi_b[u]]
        for k in range(nw):
            r = red[u, k]
            b = blue[u, k]
            drop = (r & bc[k]) | (b & rc[k])
            if drop & r & b and clash < 0:
                clash = u
            out[u, k] = (r | b) & ~drop
    return out, clash


def resolve_pullback(h0: ColoredGraph, hprime_r: Graph, hprime_b: Graph, pi_r, pi_b) -> Graph:
    """Same result as :func:`resolve_minority_edges`, computed through the base graphs."""
    rc = expand_base_rows(closed_base_pairs(hprime_r, pi_r), pi_r)
    bc = expand_base_rows(closed_base_pairs(hprime_b, pi_b), pi_b)
    rows, clash = _resolve_pullback_rows(
        h0.red.rows, h0.blue.rows, np.asarray(pi_r), np.asarray(pi_b), rc, bc
    )
    if clash >= 0:
        raise MonochromaticTriangle(f"vertex {clash} has a deleted bicoloured edge")
    return Graph(h0.n, rows, check=False)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True, eq=False)
class ConstructionTrace:
    params: ConstructionParams
    hstar_r: Graph
    hstar_b: Graph
    h_r: Graph
    h_b: Graph
    hprime_r: Graph
    hprime_b: Graph
    pi_r: np.ndarray
    pi_b: np.ndarray
    h0: ColoredGraph
    h: Graph
    g: Graph

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    def layers(self) -> dict[str, Graph]:
        return {
            "hstar_r": self.hstar_r,
            "hstar_b": self.hstar_b,
            "h_r": self.h_r,
            "h_b": self.h_b,
            "hprime_r": self.hprime_r,
            "hprime_b": self.hprime_b,
            "h0_red": self.h0.red,
            "h0_blue": self.h0.blue,
            "h": self.h,
            "g": self.g,
        }

    def digest(self) -> str:
        """SHA-256 over every layer, both maps and the parameters."""
        h = hashlib.sha256()
        p = self.params
        h.update(repr((p.n, p.m, float(p.p).hex(), p.seed, p.use_paper_defaults)).encode())
        for name, graph in self.layers().items():
            h.update(name.encode())
            h.update(graph.n.to_bytes(8, "little"))
            h.update(graph.rows.tobytes())
        h.update(np.asarray(self.pi_r, dtype="<i8").tobytes())
        h.update(np.asarray(self.pi_b, dtype="<i8").tobytes())
        return h.hexdigest()


def build_counterexample(params: ConstructionParams) -> ConstructionTrace:
    n, m, p, seed = params.n, params.m, params.p, params.seed
    if p > params.coupling_p:
        raise CouplingViolation(f"p = {p:.6g} exceeds m^-1/2 = {params.coupling_p:.6g}")
    hstar_r, h_r = sample_coupled_pair(m, p, stream(seed, STREAM_ORDER[0]))
    hstar_b, h_b = sample_coupled_pair(m, p, stream(seed, STREAM_ORDER[1]))
    pi_r = sample_uniform_map(n, m, stream(seed, STREAM_ORDER[2]))
    pi_b = sample_uniform_map(n, m, stream(seed, STREAM_ORDER[3]))
    hprime_r = strip_triangle_edges(h_r)
    hprime_b = strip_triangle_edges(h_b)
    h0 = overlay_pullbacks(hprime_r, hprime_b, pi_r, pi_b)
    h = resolve_pullback(h0, hprime_r, hprime_b, pi_r, pi_b)
    return ConstructionTrace(
        params=params,
        hstar_r=hstar_r,
        hstar_b=hstar_b,
        h_r=h_r,
        h_b=h_b,
        hprime_r=hprime_r,
        hprime_b=hprime_b,
        pi_r=pi_r,
        pi_b=pi_b,
        h0=h0,
        h=h,
        g=complement(h),
    )


# ---------------------------------------------------------------------------
# invariant checks over a (possibly loaded, possibly tampered) trace


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    detail: str = ""


@njit(cache=True)
def _first_row_mismatch(rows, expanded, pi):
    """First u with rows[u] != expanded[pi[u]], or -1."""
    n, nw = rows.shape
    for u in range(n):
        e = expanded[pi[u]]
        for k in range(nw):
            if rows[u, k] != e[k]:
                return u
    return -1


@njit(cache=True)
def _first_complement_mismatch(g, h, last_mask):
    n, nw = g.shape
    for u in range(n):
        for k in range(nw):
            want = ~h[u, k]
            if k == nw - 1:
                want &= last_mask
            if k == u >> 6:
                want &= ~(np.uint64(1) << np.uint64(u & 63))
            if g[u, k] != want:
                return u
    return -1


@njit(cache=True)
def _first_cross_check_violation(h, red, blue, pi_r, pi_b, red_closed, blue_closed):
    n, nw = h.shape
    for u in range(n):
        rc = red_closed[pi_r[u]]
        bc = blue_closed[pi_b[u]]
        for k in range(nw):
            r = red[u, k]
            b = blue[u, k]
            drop = (r & bc[k]) | (b & rc[k])
            if drop & r & b:
                return u, k, 0
            if h[u, k] != ((r | b) & ~drop):
                return u, k, 1
    return -1, -1, -1


@njit(cache=True)
def _structured_triangle(h, red, blue, pi_r, pi_b, red_closed, blue_closed):
    """Exact triangle search in h, given h is a subgraph of red | blue.

    Two edges of any triangle share a colour at a common vertex w; the third
    edge {u, v} either carries that colour too (then the base graph of that
    colour has a triangle, checked separately) or is of the other colour only
    and closed by a cherry of the first colour in H0.  So only such edges
    need the explicit common-neighbour scan.
    """
    n, nw = h.shape
    for u in range(n):
        rc = red_closed[pi_r[u]]
        bc = blue_closed[pi_b[u]]
        for k in range(nw):
            pure_blue = h[u, k] & ~red[u, k] & rc[k]
            pure_red = h[u, k] & ~blue[u, k] & bc[k]
            for mode in range(2):
                cand = pure_blue if mode == 0 else pure_red
                while cand:
                    b = K.lowbit_index(cand)
                    cand &= cand - np.uint64(1)
                    v = (k << 6) + b
                    col = red if mode == 0 else blue
                    for j in range(nw):
                        common = h[u, j] & h[v, j] & col[u, j] & col[v, j]
                        if common:
                            return u, v, (j << 6) + K.lowbit_index(common)
    return -1, -1, -1


def check_trace(trace: ConstructionTrace, generic_limit: int = GENERIC_CHECK_LIMIT) -> list[InvariantResult]:
    """Evaluate every structural invariant of a trace; never raises on failure."""
    results: list[InvariantResult] = []

    def record(name: str, ok: bool, detail: str = "") -> None:
        results.append(InvariantResult(name, bool(ok), "" if ok else detail))

    n, m = trace.n, trace.m
    pi_r = np.asarray(trace.pi_r, dtype=np.int64)
    pi_b = np.asarray(trace.pi_b, dtype=np.int64)
    shapes_ok = (
        all(x.n == m for x in (trace.hstar_r, trace.hstar_b, trace.h_r, trace.h_b, trace.hprime_r, trace.hprime_b))
        and all(x.n == n for x in (trace.h0.red, trace.h0.blue, trace.h, trace.g))
        and len(pi_r) == n
        and len(pi_b) == n
        and (n == 0 or (pi_r.min() >= 0 and pi_r.max() < m and pi_b.min() >= 0 and pi_b.max() < m))
    )
    record("shapes", shapes_ok, "layer sizes or map ranges do not match (n, m)")
    if not shapes_ok:
        return results

    record("coupling_r", trace.h_r.is_subgraph_of(trace.hstar_r), "h_r has an edge outside hstar_r")
    record("coupling_b", trace.h_b.is_subgraph_of(trace.hstar_b), "h_b has an edge outside hstar_b")

    for tag, h_x, hp in (("r", trace.h_r, trace.hprime_r), ("b", trace.h_b, trace.hprime_b)):
        tri = find_triangle(hp)
        record(f"hprime_{tag}_triangle_free", tri is None, f"triangle {tri}")
        record(f"hprime_{tag}_subgraph", hp.is_subgraph_of(h_x), f"hprime_{tag} not inside h_{tag}")
        strip_ok = hp == strip_triangle_edges(h_x)
        record(f"hprime_{tag}_strip", strip_ok, f"hprime_{tag} is not h_{tag} minus its triangle edges")

    for tag, layer, base, pi in (("red", trace.h0.red, trace.hprime_r, pi_r), ("blue", trace.h0.blue, trace.hprime_b, pi_b)):
        expanded = K.gather_or_rows(base.rows, fiber_rows(pi, m), m)
        u = _first_row_mismatch(layer.rows, expanded, pi)
        record(f"pullback_{tag}", u < 0, f"vertex {u} breaks the {tag} pullback")

    red, blue, h = trace.h0.red.rows, trace.h0.blue.rows, trace.h.rows
    outside = h & ~(red | blue)
    record("h_subset_h0", not outside.any(), "h has an edge absent from h0")

    rc = expand_base_rows(closed_base_pairs(trace.hprime_r, pi_r), pi_r)
    bc = expand_base_rows(closed_base_pairs(trace.hprime_b, pi_b), pi_b)
    u, k, kind = _first_cross_check_violation(h, red, blue, pi_r, pi_b, rc, bc)
    detail = {0: "bicoloured edge deleted", 1: "h differs from h0 minus cherry-closed minority edges"}.get(int(kind), "")
    record("cherry_deletion", u < 0, f"vertex {u}, word {k}: {detail}")

    if not outside.any():
        tri = _structured_triangle(h, red, blue, pi_r, pi_b, rc, bc)
        tri_ok = tri[0] < 0 and not any(r.name.startswith("hprime_") and r.name.endswith("triangle_free") and not r.passed for r in results)
        record("h_triangle_free", tri_ok, f"triangle {tuple(int(x) for x in tri)}")
    else:
        tri = find_triangle(trace.h)
        record("h_triangle_free", tri is None, f"triangle {tri}")

    g_ok = n == 0 or _first_complement_mismatch(trace.g.rows, trace.h.rows, tail_mask(n)[-1]) < 0
    record("g_is_complement", g_ok, "g differs from the complement of h")
    if n <= generic_limit:
        tri = find_triangle(trace.h)
        record("h_triangle_free_generic", tri is None, f"triangle {tri}")
        record("alpha_g_at_most_two", independence_at_most_two(trace.g), "g has an independent triple")
    else:
        # complement(g) = h is verified above, so alpha(g) <= 2 iff h is triangle-free
        tri_ok = next(r.passed for r in results if r.name == "h_triangle_free")
        record("alpha_g_at_most_two", g_ok and tri_ok, "g has an independent triple")
    return results


def trace_ok(trace: ConstructionTrace, **kw) -> bool:
    return all(r.passed for r in check_trace(trace, **kw))
