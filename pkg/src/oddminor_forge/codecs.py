"""graph6 and DIMACS edge-format codecs.

graph6 packs the upper triangle column by column (x(0,1), x(0,2), x(1,2),
x(0,3), ...) into 6-bit groups offset by 63, after a size header N(n).
Large graphs are processed in column blocks so that no n x n boolean matrix
is ever materialised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedInput
from .graph import Graph, unpack_rows, words_for

_BLOCK = 2048  # columns per block; a multiple of 64
_WEIGHTS = np.array([32, 16, 8, 4, 2, 1], dtype=np.uint8)


def _pack_rows(bits: np.ndarray, n: int) -> np.ndarray:
    """Pack ``(r, c)`` booleans (c <= padded width of n) into ``(r, W)`` words."""
    r = bits.shape[0]
    packed = np.packbits(bits, axis=1, bitorder="little")
    out = np.zeros((r, words_for(n) * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view("<u8").astype(np.uint64, copy=False)


# ---------------------------------------------------------------------------
# graph6


def _size_header(n: int) -> bytes:
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return b"~" + bytes(((n >> s) & 63) + 63 for s in (12, 6, 0))
    if n <= 68719476735:
        return b"~~" + bytes(((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph6 cannot encode more than 2^36 - 1 vertices")


def _column_bits(g: Graph):
    """Yield the upper-triangle bit stream in column order, block by block."""
    n = g.n
    for j0 in range(0, n, _BLOCK):
        j1 = min(n, j0 + _BLOCK)
        block = unpack_rows(g.rows[j0:j1], n)
        lower = np.arange(n)[None, :] < np.arange(j0, j1)[:, None]
        yield block[lower]


def encode_graph6(g: Graph) -> str:
    out = [_size_header(g.n)]
    carry = np.zeros(0, dtype=bool)
    for bits in _column_bits(g):
        bits = np.concatenate([carry, bits])
        full = len(bits) - len(bits) % 6
        carry = bits[full:]
        if full:
            groups = bits[:full].reshape(-1, 6).astype(np.uint8) @ _WEIGHTS
            out.append((groups + 63).astype(np.uint8).tobytes())
    if len(carry):
        pad = np.zeros(6, dtype=bool)
        pad[: len(carry)] = carry
        out.append(bytes([int(pad.astype(np.uint8) @ _WEIGHTS) + 63]))
    return b"".join(out).decode("ascii")


def _parse_header(data: bytes) -> tuple[int, int]:
    if not data:
        raise MalformedInput("empty graph6 string", 0)
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise MalformedInput("truncated 8-byte size header", len(data))
        body, start = data[2:8], 8
    else:
        if len(data) < 4:
            raise MalformedInput("truncated 4-byte size header", len(data))
        body, start = data[1:4], 4
    n = 0
    for k, byte in enumerate(body):
        if not 63 <= byte <= 126:
            raise MalformedInput("size header byte out of range", start - len(body) + k)
        n = (n << 6) | (byte - 63)
    return n, start


def decode_graph6(text: str | bytes) -> Graph:
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    data = data.rstrip(b"\r\n")
    if data[:1] in (b":", b";", b"&"):
        raise MalformedInput("sparse6 and digraph6 are not supported", 0)
    n, start = _parse_header(data)
    if not 0 <= n:
        raise MalformedInput("bad size header", 0)
    body = np.frombuffer(data, dtype=np.uint8)[start:]
    bad = np.flatnonzero((body < 63) | (body > 126))
    if len(bad):
        raise MalformedInput("byte out of the graph6 range 63..126", start + int(bad[0]))
    total = n * (n - 1) // 2
    need = (total + 5) // 6
    if len(body) != need:
        offset = start + min(len(body), need)
        what = "truncated" if len(body) < need else "trailing data after"
        raise MalformedInput(f"{what} graph6 body (expected {need} bytes, got {len(body)})", offset)
    if total % 6 and need and ((int(body[-1]) - 63) & ((1 << (6 - total % 6)) - 1)):
        raise MalformedInput("non-zero padding bits", start + need - 1)
    if n == 0:
        return Graph.empty(0)
    rows = np.zeros((n, words_for(n)), dtype=np.uint64)
    for j0 in range(0, n, _BLOCK):
        j1 = min(n, j0 + _BLOCK)
        b0, b1 = j0 * (j0 - 1) // 2, j1 * (j1 - 1) // 2
        g0, g1 = b0 // 6, (b1 + 5) // 6
        chunk = np.unpackbits((body[g0:g1] - 63).astype(np.uint8)[:, None], axis=1)[:, 2:].ravel()
        stream = chunk[b0 - 6 * g0 : b1 - 6 * g0].astype(bool)
        lower = np.arange(n)[None, :] < np.arange(j0, j1)[:, None]
        block = np.zeros((j1 - j0, n), dtype=bool)
        block[lower] = stream
        rows[j0:j1] |= _pack_rows(block, n)
        # mirrored bits: row i < j1 gains columns j0..j1
        mirrored = _pack_rows(block[:, :j1].T.copy(), j1 - j0)
        w0 = j0 // 64
        rows[:j1, w0 : w0 + mirrored.shape[1]] |= mirrored[:, : words_for(n) - w0]
    return Graph(n, rows, check=False)


# ---------------------------------------------------------------------------
# DIMACS


@dataclass(frozen=True)
class DimacsResult:
    graph: Graph
    warnings: int
    messages: tuple[str, ...] = ()


def encode_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {line}" for line in comment.splitlines())
    edges = g.edge_array()
    lines.append(f"p edge {g.n} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def decode_dimacs_report(text: str) -> DimacsResult:
    n = None
    declared = 0
    edges: set[tuple[int, int]] = set()
    messages = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise MalformedInput("second problem line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise MalformedInput("problem line must read 'p edge <n> <m>'", lineno)
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedInput("non-integer in problem line", lineno) from None
            if n < 0 or declared < 0:
                raise MalformedInput("negative size in problem line", lineno)
        elif parts[0] == "e":
            if n is None:
                raise MalformedInput("edge line before the problem line", lineno)
            if len(parts) != 3:
                raise MalformedInput("edge line must read 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise MalformedInput("non-integer vertex", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise MalformedInput(f"vertex out of range 1..{n}", lineno)
            if u == v:
                raise MalformedInput("self-loop", lineno)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in edges:
                messages.append(f"line {lineno}: duplicate edge {u} {v}")
            edges.add(key)
        else:
            raise MalformedInput(f"unknown line type {parts[0]!r}", lineno)
    if n is None:
        raise MalformedInput("missing problem line", 0)
    lines_seen = len(edges) + len(messages)
    if lines_seen != declared:
        messages.append(f"problem line declares {declared} edges, found {lines_seen} edge lines")
    return DimacsResult(Graph.from_edges(n, sorted(edges)), len(messages), tuple(messages))


def decode_dimacs(text: str) -> Graph:
    return decode_dimacs_report(text).graph
