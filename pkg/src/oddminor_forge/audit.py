"""Per-trace checks of the degree, fibre, triangle and cherry quantities.

Every check records the observed integer, the real-valued bound it is
compared against, and the verdict ``observed <= bound``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels as K
from .construction import (
    ColoredGraph,
    ConstructionTrace,
    _closed_rows,
    closed_base_pairs,
    fiber_sizes,
)
from .graph import Graph, max_degree
from .pairing import (
    Pairing,
    build_pi_graph,
    degree_bound_violations,
    respectful_index,
    restricted_fiber_sizes,
)


@dataclass(frozen=True)
class Check:
    observed: float
    bound: float
    holds: bool

    @classmethod
    def at_most(cls, observed, bound) -> "Check":
        return cls(observed, float(bound), bool(observed <= bound))

    @classmethod
    def at_least(cls, observed, bound) -> "Check":
        return cls(observed, float(bound), bool(observed >= bound))


def check_degree_event(h: Graph, bound: float) -> tuple[bool, int]:
    delta = max_degree(h)
    return delta <= bound, delta


def check_fiber_event(pi, bound: float) -> tuple[bool, int]:
    pi = np.asarray(pi, dtype=np.int64)
    largest = int(np.bincount(pi).max()) if len(pi) else 0
    return largest <= bound, largest


def check_triangle_count_event(hstar: Graph, bound: float) -> tuple[bool, int]:
    worst = int(K.max_edge_triangle_count(hstar.rows)) if hstar.n >= 3 else 0
    return worst <= bound, worst


def cherry_closed_pairs(h0: ColoredGraph, color: str) -> set[tuple[int, int]]:
    """Pairs u < v with a common neighbour w along edges of the given colour."""
    layer = _layer(h0, color)
    rows = _closed_rows(layer)
    out = set()
    for u in range(layer.n):
        for wi in range(rows.shape[1]):
            word = int(rows[u, wi])
            while word:
                low = word & -word
                v = (wi << 6) + low.bit_length() - 1
                word ^= low
                if v > u:
                    out.add((u, v))
    return out


def _layer(h0: ColoredGraph, color: str) -> Graph:
    if color == "red":
        return h0.red
    if color == "blue":
        return h0.blue
    raise ValueError(f"colour must be 'red' or 'blue', got {color!r}")


def cherry_closed_count(hprime: Graph, pi) -> int:
    """Number of cherry-closed pairs of the pullback, computed on the base graph."""
    m = hprime.n
    closed = closed_base_pairs(hprime, pi)
    f = fiber_sizes(pi, m).astype(object)
    off = np.triu(closed, 1)
    xs, ys = np.nonzero(off)
    total = sum(int(f[x]) * int(f[y]) for x, y in zip(xs, ys))
    total += sum(int(f[x]) * (int(f[x]) - 1) // 2 for x in np.nonzero(np.diag(closed))[0])
    return total


@dataclass(frozen=True)
class PairingStats:
    size: int
    respectful_r: int
    respectful_b: int
    respectful_r_check: Check
    pi_size: Check
    pi_gamma_size: Check
    delta_gamma: Check
    delta_gamma_fiber: Check
    degree_bound_violations: int


@dataclass(frozen=True)
class EventReport:
    n: int
    m: int
    p: float
    eps: float
    gamma: float
    d_r: Check
    d_b: Check
    f_r: Check
    f_b: Check
    t_r: Check
    t_b: Check
    cherry_r_asymptotic: Check
    cherry_b_asymptotic: Check
    cherry_r_proof_step: Check
    cherry_b_proof_step: Check
    pairing: PairingStats | None = None

    def events(self) -> dict[str, Check]:
        return {k: getattr(self, k) for k in ("d_r", "d_b", "f_r", "f_b", "t_r", "t_b")}

    def to_dict(self) -> dict:
        return asdict(self)


def audit_instance(
    trace: ConstructionTrace,
    eps: float = 0.1,
    gamma: float = 0.01,
    pairing: Pairing | None = None,
) -> EventReport:
    n, m, p = trace.n, trace.m, trace.params.p
    log_m = math.log(m) if m > 1 else 0.0
    log_n = math.log(n) if n > 1 else 0.0
    deg_bound = 2 * p * m
    fib_bound = 2 * n / m
    tri_bound = 20 * log_m
    asym = n * n / log_n if log_n > 0 else math.inf

    d_r = Check.at_most(max_degree(trace.h_r), deg_bound)
    d_b = Check.at_most(max_degree(trace.h_b), deg_bound)
    f_r = Check.at_most(check_fiber_event(trace.pi_r, fib_bound)[1], fib_bound)
    f_b = Check.at_most(check_fiber_event(trace.pi_b, fib_bound)[1], fib_bound)
    t_r = Check.at_most(check_triangle_count_event(trace.hstar_r, tri_bound)[1], tri_bound)
    t_b = Check.at_most(check_triangle_count_event(trace.hstar_b, tri_bound)[1], tri_bound)

    cr = cherry_closed_count(trace.hprime_r, trace.pi_r)
    cb = cherry_closed_count(trace.hprime_b, trace.pi_b)
    step_r = m * d_r.observed**2 * f_r.observed**2
    step_b = m * d_b.observed**2 * f_b.observed**2

    stats = None
    if pairing is not None:
        stats = _pairing_stats(trace, pairing, eps, gamma)
    return EventReport(
        n=n,
        m=m,
        p=p,
        eps=eps,
        gamma=gamma,
        d_r=d_r,
        d_b=d_b,
        f_r=f_r,
        f_b=f_b,
        t_r=t_r,
        t_b=t_b,
        cherry_r_asymptotic=Check.at_most(cr, asym),
        cherry_b_asymptotic=Check.at_most(cb, asym),
        cherry_r_proof_step=Check.at_most(cr, step_r),
        cherry_b_proof_step=Check.at_most(cb, step_b),
        pairing=stats,
    )


def _pairing_stats(trace: ConstructionTrace, pairing: Pairing, eps: float, gamma: float) -> PairingStats:
    n, m = trace.n, trace.m
    pi_r = np.asarray(trace.pi_r)
    pi_b = np.asarray(trace.pi_b)
    closed_b = closed_base_pairs(trace.hprime_b, pi_b)

    def blue_closed(u: int, v: int) -> bool:
        return u != v and bool(closed_b[pi_b[u], pi_b[v]])

    rr = respectful_index(pairing, pi_r)
    rb = respectful_index(pairing, pi_b)
    pi_graph = build_pi_graph(pairing, pi_r, m=m)
    pi_gamma = build_pi_graph(pairing, pi_r, forbidden=blue_closed, m=m)
    fibers = restricted_fiber_sizes(pairing, pi_r)
    worst_product = 0
    for x, y in pi_gamma.degrees():
        worst_product = max(worst_product, fibers.get(x, 0) * fibers.get(y, 0))
    return PairingStats(
        size=pairing.size,
        respectful_r=rr,
        respectful_b=rb,
        respectful_r_check=Check.at_least(rr, eps * pairing.size),
        pi_size=Check.at_least(pi_graph.edge_count, eps**4 * n * n / 6),
        pi_gamma_size=Check.at_least(pi_gamma.edge_count, gamma * n * n),
        delta_gamma=Check.at_most(pi_gamma.max_degree(), 4 * n * n / (m * m)),
        delta_gamma_fiber=Check.at_most(pi_gamma.max_degree(), worst_product),
        degree_bound_violations=len(degree_bound_violations(pi_gamma, fibers)),
    )
