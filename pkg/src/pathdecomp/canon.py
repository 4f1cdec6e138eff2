"""Canonical labeling by exhaustive permutation minimization.

The canonical string of a graph is the lexicographically least upper-triangle
adjacency string (graph6 column order) over all vertex orderings.  Orderings
are built one position at a time, keeping only those whose prefix is minimal;
vertices with identical neighbourhoods are forced into id order, since
swapping them is an automorphism and cannot change the string.
"""

from __future__ import annotations

import hashlib

from .formats import emit_graph6
from .graph import SimpleGraph

CANON_MAX_N = 9


def _twin_predecessors(g: SimpleGraph) -> list[int]:
    pred = [-1] * g.n
    for w in range(g.n):
        for u in range(w - 1, -1, -1):
            if g.adj[u] & ~(1 << w) == g.adj[w] & ~(1 << u):
                pred[w] = u
                break
    return pred


def canonical_order(g: SimpleGraph) -> tuple[int, ...]:
    n = g.n
    if n > CANON_MAX_N:
        raise ValueError(f"canonical_form is exhaustive and limited to n <= {CANON_MAX_N}")
    adj = g.adj
    pred = _twin_predecessors(g)
    cands: list[tuple[tuple[int, ...], int]] = [((), 0)]
    for _ in range(n):
        best = None
        nxt = []
        for placed, mask in cands:
            for v in range(n):
                if mask >> v & 1:
                    continue
                p = pred[v]
                if p >= 0 and not mask >> p & 1:
                    continue
                col = 0
                av = adj[v]
                for u in placed:
                    col = (col << 1) | (av >> u & 1)
                if best is None or col < best:
                    best = col
                    nxt = [(placed + (v,), mask | 1 << v)]
                elif col == best:
                    nxt.append((placed + (v,), mask | 1 << v))
        cands = nxt
    return cands[0][0] if cands else ()


def canonical_graph(g: SimpleGraph) -> SimpleGraph:
    order = canonical_order(g)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return g.relabel(pos)


def canonical_form(g: SimpleGraph) -> bytes:
    """graph6 bytes of the canonically relabeled graph (n <= 9)."""
    return emit_graph6(canonical_graph(g)).encode("ascii")


def dedup_key(g: SimpleGraph) -> tuple[object, bool]:
    """Isomorphism key and whether it is exact.

    Above the exhaustive limit only ``(n, m, sorted degrees)`` is used, which
    can merge non-isomorphic graphs.
    """
    if g.n <= CANON_MAX_N:
        return canonical_form(g), True
    return (g.n, g.m, tuple(sorted(g.degrees()))), False


def graph_id(g: SimpleGraph) -> str:
    """Stable report id: digest of the canonical form, or of the labeled graph6."""
    if g.n <= CANON_MAX_N:
        payload = b"c:" + canonical_form(g)
    else:
        payload = b"l:" + emit_graph6(g).encode("ascii")
    return hashlib.sha1(payload).hexdigest()[:16]
