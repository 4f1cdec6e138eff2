"""graph6 and edge-list text formats."""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .graph import SimpleGraph


class FormatError(ValueError):
    pass


HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 0:
        raise FormatError("negative order")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise FormatError(f"order {n} too large for graph6")


def emit_graph6(g: SimpleGraph) -> str:
    """graph6 line (no trailing newline) for ``g``.

    Bits run over the upper triangle column by column: (0,1), (0,2), (1,2),
    (0,3), ... and are packed big-endian into 6-bit groups.
    """
    out = [_encode_n(g.n)]
    acc = 0
    nbits = 0
    adj = g.adj
    for j in range(1, g.n):
        col = adj[j]
        for i in range(j):
            acc = (acc << 1) | (col >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(line: str | bytes) -> SimpleGraph:
    if isinstance(line, bytes):
        line = line.decode("ascii")
    s = line.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER) :]
    if not s:
        raise FormatError("empty graph6 line")
    data = []
    for ch in s:
        c = ord(ch)
        if not 63 <= c <= 126:
            raise FormatError(f"byte {c!r} outside graph6 range")
        data.append(c - 63)
    if data[0] < 63:
        n, pos = data[0], 1
    else:
        if len(data) < 4 or data[1] == 63:
            raise FormatError("unsupported or truncated order header")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise FormatError(f"expected {need} data bytes for n={n}, got {len(body)}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    tail = nbits % 6
    if tail and body[-1] & ((1 << (6 - tail)) - 1):
        raise FormatError("nonzero padding bits")
    return SimpleGraph(n, edges)


def parse_edgelist(text: str) -> SimpleGraph:
    """``n m`` header, then ``m`` lines ``u v``; blanks and ``#`` comments skipped."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise FormatError("empty edge list")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise FormatError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise FormatError(f"header says {m} edges, found {len(edges)}")
    return SimpleGraph(n, edges)


def emit_edgelist(g: SimpleGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_graphs(stream: TextIO, fmt: str = "graph6") -> Iterator[SimpleGraph]:
    """Graphs from a text stream: one graph6 per line, or a single edge list."""
    if fmt == "graph6":
        for line in stream:
            if line.strip():
                yield parse_graph6(line)
    elif fmt == "edgelist":
        yield parse_edgelist(stream.read())
    else:
        raise FormatError(f"unknown format {fmt!r}")


def write_graph6(graphs: Iterable[SimpleGraph], stream: TextIO) -> None:
    for g in graphs:
        stream.write(emit_graph6(g) + "\n")
