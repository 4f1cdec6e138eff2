"""Deterministic graph families: clique-minus-matching, chain and necklace patterns,
random SET graphs, E-subgraph embeddings and small-graph enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .canon import canonical_form
from .family import FamilyGWitness
from .graph import SimpleGraph, complete_graph, is_connected, norm_edge

ENUM_MAX_N = 7


class GenerationError(RuntimeError):
    pass


def clique_minus_matching(k: int) -> SimpleGraph:
    """``K_{2k+1}`` minus the matching (0,1), (2,3), ..., (2k-4, 2k-3)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    g = complete_graph(2 * k + 1)
    return g.remove_edges([(2 * i, 2 * i + 1) for i in range(k - 1)])


@dataclass(frozen=True)
class PatternInstance:
    pattern: SimpleGraph
    witness: FamilyGWitness
    dotted: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]


def _add_stubs(edges: list, n: int, at: list[int], stubs: int) -> int:
    for v in at:
        for _ in range(stubs):
            edges.append((v, n))
            n += 1
    return n


def figure1_family(kind: str, t: int, stubs: int = 3) -> PatternInstance:
    """Triangle patterns whose completions lie in G.

    ``chain``: ``t`` triangles ``(o_i, a_i, b_i)`` linked ``b_i - a_{i+1}``;
    the closing link ``b_t - a_1`` is dotted, and each ``o_i`` carries
    ``stubs`` pendant edges.  ``necklace``: a central triangle with ``t - 1``
    outer triangles (so ``3 <= t <= 4``), outer ``i`` hanging from central
    vertex ``i``; consecutive outer triangles are joined by dotted edges and
    each outer triangle carries ``stubs`` pendant edges at one vertex.
    """
    edges: list[tuple[int, int]] = []
    dotted: list[tuple[int, int]] = []
    tris = []
    if kind == "chain":
        if t < 2:
            raise ValueError("chain needs t >= 2")
        for i in range(t):
            o, a, b = 3 * i, 3 * i + 1, 3 * i + 2
            tris.append((o, a, b))
            edges += [(o, a), (o, b), (a, b)]
        for i in range(t - 1):
            edges.append((tris[i][2], tris[i + 1][1]))
        dotted.append(norm_edge(tris[-1][2], tris[0][1]))
        n = _add_stubs(edges, 3 * t, [tr[0] for tr in tris], stubs)
    elif kind == "necklace":
        if not 3 <= t <= 4:
            raise ValueError("necklace needs 3 <= t <= 4")
        tris.append((0, 1, 2))
        edges += [(0, 1), (0, 2), (1, 2)]
        outer = []
        for i in range(t - 1):
            # p hangs from central vertex i; q and r carry the dotted links
            p, q, r = 3 + 3 * i, 4 + 3 * i, 5 + 3 * i
            outer.append((p, q, r))
            tris.append((p, q, r))
            edges += [(p, q), (p, r), (q, r), (i, p)]
        for i in range(len(outer)):
            nxt = outer[(i + 1) % len(outer)]
            if len(outer) == 2 and i == 1:
                dotted.append(norm_edge(outer[1][1], outer[0][2]))
            else:
                dotted.append(norm_edge(outer[i][1], nxt[2]))
        n = _add_stubs(edges, 3 * t, [tr[2] for tr in outer], stubs)
    else:
        raise ValueError(f"unknown pattern family {kind!r}")
    pattern = SimpleGraph(n, edges)
    witness = FamilyGWitness.identity(pattern, pattern.add_edges(dotted))
    return PatternInstance(pattern, witness, tuple(sorted(set(dotted))), tuple(tris))


def embed_as_even_subgraph(h: SimpleGraph) -> SimpleGraph:
    """Host whose E-subgraph is ``h``: one pendant leaf per odd vertex of ``h``."""
    if not is_connected(h):
        raise ValueError("h must be connected")
    odd = h.odd_vertices()
    extra = [(v, h.n + i) for i, v in enumerate(odd)]
    return h.add_edges(extra, n=h.n + len(odd))


def random_set_graph(n_odd: int, extra_odd_edges: int, seed: int, max_attempts: int = 10) -> SimpleGraph:
    """Random SET graph on the triangle ``{0, 1, 2}``.

    ``n_odd`` further vertices each get two or three triangle neighbours,
    then up to ``extra_odd_edges`` random edges among them.  Parities are
    repaired by pairing up the wrong-parity vertices (see ``_repair``),
    which may add up to two vertices.
    """
    if n_odd < 0:
        raise ValueError("n_odd must be nonnegative")
    for attempt in range(max_attempts):
        rng = random.Random(f"{seed}:{attempt}")
        adj: dict[int, set[int]] = {v: set() for v in range(3 + n_odd)}

        def link(u: int, v: int) -> None:
            adj[u].add(v)
            adj[v].add(u)

        link(0, 1)
        link(0, 2)
        link(1, 2)
        for v in range(3, 3 + n_odd):
            for t in rng.sample(range(3), rng.choice((2, 3))):
                link(v, t)
        pairs = [(u, v) for u in range(3, 3 + n_odd) for v in range(u + 1, 3 + n_odd)]
        for u, v in rng.sample(pairs, min(extra_odd_edges, len(pairs))):
            link(u, v)
        _repair(adj, rng)
        g = SimpleGraph(len(adj), [(u, v) for u in adj for v in adj[u] if u < v])
        if _is_set_shape(g):
            return g
    raise GenerationError(f"parity repair failed for seed {seed} after {max_attempts} attempts")


def _is_set_shape(g: SimpleGraph) -> bool:
    tri = {0, 1, 2}
    for v in range(g.n):
        d = g.degree(v)
        if v in tri:
            if d % 2:
                return False
        elif d % 2 == 0 or len(set(g.neighbors(v)) & tri) < 2:
            return False
    return True


def _repair(adj: dict[int, set[int]], rng: random.Random, rounds: int = 10) -> None:
    """Make triangle vertices even and every other vertex odd.

    Triangle edges are never touched, and an edge between a side vertex and
    the triangle is only removed while that vertex keeps two triangle
    neighbours.  One round pairs off all wrong side vertices, then settles
    what is left over.
    """
    tri = (0, 1, 2)

    def toggle(u: int, v: int) -> None:
        if v in adj[u]:
            adj[u].discard(v)
            adj[v].discard(u)
        else:
            adj[u].add(v)
            adj[v].add(u)

    def new_vertex(nbrs) -> int:
        z = len(adj)
        adj[z] = set()
        for t in nbrs:
            toggle(z, t)
        return z

    def tri_count(v: int) -> int:
        return sum(1 for t in tri if t in adj[v])

    def wrong() -> tuple[list[int], list[int]]:
        side = [v for v in sorted(adj) if v not in tri and len(adj[v]) % 2 == 0]
        bad_tri = [t for t in tri if len(adj[t]) % 2]
        return side, bad_tri

    if (len(adj) - 3) % 2:
        # wrong-vertex count has the parity of the side count; make it even
        new_vertex(tri)
    for _ in range(rounds):
        side, bad_tri = wrong()
        if not side and not bad_tri:
            return
        rng.shuffle(side)
        while len(side) >= 2:
            toggle(side.pop(), side.pop())
        if side:
            u = side[0]
            movable = [t for t in tri if t not in adj[u] or tri_count(u) == 3]
            preferred = [t for t in movable if t in bad_tri]
            toggle(u, (preferred or movable)[0])
            side, bad_tri = wrong()
        if len(bad_tri) == 2 and not side:
            t1, t2 = bad_tri
            t3 = next(x for x in tri if x not in bad_tri)
            pivots = [
                w for w in sorted(adj)
                if w not in tri and t3 in adj[w] and (t1 in adj[w]) != (t2 in adj[w])
            ]
            if pivots:
                w = rng.choice(pivots)
                toggle(w, t1)
                toggle(w, t2)
            else:
                w1 = new_vertex((t1, t3))
                w2 = new_vertex((t2, t3))
                toggle(w1, w2)


def enumerate_connected(n: int) -> Iterator[SimpleGraph]:
    """One representative per isomorphism class of connected graphs on ``n`` vertices.

    Graphs on ``k`` vertices are grown from all graphs on ``k - 1`` vertices
    by adding a vertex with every possible neighbourhood, deduplicating by
    canonical form.  Output is in canonical-form order.
    """
    if n < 1:
        return
    if n > ENUM_MAX_N:
        raise ValueError(f"enumeration limited to n <= {ENUM_MAX_N}")
    level = {canonical_form(SimpleGraph(1)): SimpleGraph(1)}
    for k in range(2, n + 1):
        nxt: dict[bytes, SimpleGraph] = {}
        for g in level.values():
            for mask in range(1 << (k - 1)):
                extra = [(v, k - 1) for v in range(k - 1) if mask >> v & 1]
                h = g.add_edges(extra, n=k)
                key = canonical_form(h)
                if key not in nxt:
                    nxt[key] = h
        level = nxt
    for key in sorted(level):
        g = level[key]
        if is_connected(g):
            yield g
