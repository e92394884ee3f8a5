"""graph6 reader/writer (the format used by nauty's geng and networkx).

Only what the format defines: an N(n) header followed by the upper triangle
in column order x(0,1), x(0,2), x(1,2), x(0,3), ... packed six bits per byte,
zero-padded, each byte offset by 63.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from .exceptions import ParseError
from .graphs import LabeledGraph, num_pairs, pair_index

HEADER = ">>graph6<<"


def _column_order(n: int) -> list[int]:
    return [pair_index(i, j, n) for j in range(1, n) for i in range(j)]


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise ValueError(n)
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    raise ValueError(f"n={n} is too large for graph6")


def write_graph6(g: LabeledGraph, header: bool = False) -> str:
    bits = [g.edges[k] for k in _column_order(g.n)]
    bits += [0] * (-len(bits) % 6)
    body = bytearray(_encode_n(g.n))
    for start in range(0, len(bits), 6):
        value = 0
        for b in bits[start:start + 6]:
            value = (value << 1) | b
        body.append(value + 63)
    text = body.decode("ascii")
    return HEADER + text if header else text


def parse_graph6(text: str | bytes, line: int | None = None) -> LabeledGraph:
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.strip()
    base = 0
    if data.startswith(HEADER.encode()):
        base = len(HEADER)
        data = data[base:]
    if not data:
        raise ParseError("empty graph6 string", offset=base, line=line)
    for k, ch in enumerate(data):
        if not 63 <= ch <= 126:
            raise ParseError(f"byte {ch!r} outside the graph6 range 63..126", offset=base + k, line=line)

    if data[0] != 126:
        n, pos = data[0] - 63, 1
    else:
        if len(data) < 4 or data[1] == 126:
            raise ParseError("truncated or unsupported long-form size header", offset=base, line=line)
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        pos = 4
        if n <= 62:
            raise ParseError(f"long-form header used for n={n} <= 62", offset=base, line=line)
    if n == 0:
        raise ParseError("graph6 with zero vertices is not a valid LabeledGraph", offset=base, line=line)

    m = num_pairs(n)
    need = (m + 5) // 6
    if len(data) - pos != need:
        raise ParseError(
            f"expected {need} data bytes for n={n}, found {len(data) - pos}",
            offset=base + min(len(data), pos + need), line=line,
        )
    bits: list[int] = []
    for ch in data[pos:]:
        v = ch - 63
        bits.extend((v >> (5 - s)) & 1 for s in range(6))
    if any(bits[m:]):
        raise ParseError("nonzero padding bits", offset=base + len(data) - 1, line=line)
    edges = [0] * m
    for b, k in zip(bits, _column_order(n)):
        edges[k] = b
    return LabeledGraph(n, tuple(edges))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[LabeledGraph]:
    """Parse one graph per non-blank line; errors carry the 1-based line number."""
    for lineno, raw in enumerate(lines, start=1):
        if raw.strip():
            yield parse_graph6(raw, line=lineno)
