"""Compiled inner loops over packed adjacency rows.

Rows are ``(n, W)`` arrays of little-endian ``uint64`` words; vertex ``v``
lives at word ``v >> 6``, bit ``v & 63``.  Everything here is pure and
allocation-light so that the callers can stay in plain numpy.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return int((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def lowbit_index(x):
    # index of the lowest set bit of a non-zero word
    low = x & (~x + _ONE)
    return popcount(low - _ONE)


@njit(cache=True)
def first_triangle(rows):
    """Lowest triangle (u < v < w) in lexicographic order, or (-1, -1, -1)."""
    n, nw = rows.shape
    for u in range(n):
        for wi in range(u >> 6, nw):
            word = rows[u, wi]
            while word:
                b = lowbit_index(word)
                word &= word - _ONE
                v = (wi << 6) + b
                if v <= u:
                    continue
                for wj in range(v >> 6, nw):
                    common = rows[u, wj] & rows[v, wj]
                    while common:
                        c = lowbit_index(common)
                        common &= common - _ONE
                        w = (wj << 6) + c
                        if w > v:
                            return u, v, w
    return -1, -1, -1


@njit(cache=True)
def count_triangles(rows):
    n, nw = rows.shape
    total = 0
    for u in range(n):
        for wi in range(u >> 6, nw):
            word = rows[u, wi]
            while word:
                b = lowbit_index(word)
                word &= word - _ONE
                v = (wi << 6) + b
                if v <= u:
                    continue
                for wj in range(v >> 6, nw):
                    common = rows[u, wj] & rows[v, wj]
                    while common:
                        c = lowbit_index(common)
                        common &= common - _ONE
                        if (wj << 6) + c > v:
                            total += 1
    return total


@njit(cache=True)
def fill_triangles(rows, out):
    n, nw = rows.shape
    k = 0
    for u in range(n):
        for wi in range(u >> 6, nw):
            word = rows[u, wi]
            while word:
                b = lowbit_index(word)
                word &= word - _ONE
                v = (wi << 6) + b
                if v <= u:
                    continue
                for wj in range(v >> 6, nw):
                    common = rows[u, wj] & rows[v, wj]
                    while common:
                        c = lowbit_index(common)
                        common &= common - _ONE
                        w = (wj << 6) + c
                        if w > v:
                            out[k, 0] = u
                            out[k, 1] = v
                            out[k, 2] = w
                            k += 1
    return k


@njit(cache=True)
def edges_in_triangles(rows):
    """Boolean-per-edge rows: bit (u, v) set iff edge uv lies in a triangle."""
    n, nw = rows.shape
    out = np.zeros_like(rows)
    for u in range(n):
        for wi in range(u >> 6, nw):
            word = rows[u, wi]
            while word:
                b = lowbit_index(word)
                word &= word - _ONE
                v = (wi << 6) + b
                if v <= u:
                    continue
                hit = False
                for wj in range(nw):
                    if rows[u, wj] & rows[v, wj]:
                        hit = True
                        break
                if hit:
                    out[u, v >> 6] |= _ONE << np.uint64(v & 63)
                    out[v, u >> 6] |= _ONE << np.uint64(u & 63)
    return out


@njit(cache=True)
def max_edge_triangle_count(rows):
    """Largest number of triangles through a single edge (0 if no edges)."""
    n, nw = rows.shape
    best = 0
    for u in range(n):
        for wi in range(u >> 6, nw):
            word = rows[u, wi]
            while word:
                b = lowbit_index(word)
                word &= word - _ONE
                v = (wi << 6) + b
                if v <= u:
                    continue
                c = 0
                for wj in range(nw):
                    c += popcount(rows[u, wj] & rows[v, wj])
                if c > best:
                    best = c
    return best


@njit(cache=True)
def row_popcounts(rows):
    n, nw = rows.shape
    out = np.zeros(n, dtype=np.int64)
    for u in range(n):
        c = 0
        for wi in range(nw):
            c += popcount(rows[u, wi])
        out[u] = c
    return out


@njit(cache=True)
def gather_or_rows(base_adj_rows, fiber_rows, m):
    """For each base vertex x, OR together the fibre rows of its neighbours.

    ``base_adj_rows`` is the packed adjacency of an m-vertex base graph and
    ``fiber_rows[y]`` is the packed indicator of the preimage of y.
    """
    nw = fiber_rows.shape[1]
    out = np.zeros((m, nw), dtype=np.uint64)
    bw = base_adj_rows.shape[1]
    for x in range(m):
        for wi in range(bw):
            word = base_adj_rows[x, wi]
            while word:
                b = lowbit_index(word)
                word &= word - _ONE
                y = (wi << 6) + b
                for k in range(nw):
                    out[x, k] |= fiber_rows[y, k]
    return out


@njit(cache=True)
def complement_rows(rows, last_mask):
    n, nw = rows.shape
    out = np.empty_like(rows)
    full = ~np.uint64(0)
    for u in range(n):
        for k in range(nw):
            out[u, k] = ~rows[u, k] & (last_mask if k == nw - 1 else full)
        out[u, u >> 6] &= ~(_ONE << np.uint64(u & 63))
    return out
