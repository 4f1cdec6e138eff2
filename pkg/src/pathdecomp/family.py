"""Membership in the family G and bounded search for completions into it.

A graph is in G when (i) every block has maximum degree at most 3 inside
the block, and (ii) every component has maximum degree at most 3 or at most
one block containing a triangle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graph import (
    Edge,
    SimpleGraph,
    bits,
    block_max_degree,
    blocks,
    components,
    has_triangle,
    norm_edge,
)


@dataclass(frozen=True)
class FamilyCheck:
    block_degree_ok: bool
    component_ok: bool
    bad_blocks: tuple[int, ...] = ()
    bad_components: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.block_degree_ok and self.component_ok


def check_family_g(h: SimpleGraph) -> FamilyCheck:
    bd = blocks(h)
    bad_blocks = tuple(
        i for i, es in enumerate(bd.block_edges) if block_max_degree(es) > 3
    )
    tri = [has_triangle(h, b) if len(b) >= 3 else False for b in bd.blocks]
    bad_comps = []
    for ci, comp in enumerate(components(h)):
        if max(h.degree(v) for v in comp) <= 3:
            continue
        cs = set(comp)
        count = sum(1 for i, b in enumerate(bd.blocks) if tri[i] and b <= cs)
        if count > 1:
            bad_comps.append(ci)
    return FamilyCheck(not bad_blocks, not bad_comps, bad_blocks, tuple(bad_comps))


def in_family_g(h: SimpleGraph) -> bool:
    return bool(check_family_g(h))


@dataclass(frozen=True)
class FamilyGWitness:
    supergraph: SimpleGraph
    injection: tuple[int, ...]

    @classmethod
    def identity(cls, h: SimpleGraph, supergraph: SimpleGraph | None = None) -> FamilyGWitness:
        return cls(supergraph if supergraph is not None else h, tuple(range(h.n)))


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    failures: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_family_g_witness(h: SimpleGraph, w: FamilyGWitness) -> WitnessCheck:
    fails = []
    inj = w.injection
    if len(inj) != h.n:
        fails.append(f"injection covers {len(inj)} vertices, subject has {h.n}")
    elif len(set(inj)) != len(inj):
        fails.append("injection is not injective")
    elif any(not 0 <= x < w.supergraph.n for x in inj):
        fails.append("injection leaves the supergraph")
    else:
        for u, v in h.edges:
            if not w.supergraph.has_edge(inj[u], inj[v]):
                fails.append(f"edge ({u}, {v}) has no image")
                break
    if not in_family_g(w.supergraph):
        fails.append("supergraph not in family G")
    return WitnessCheck(not fails, tuple(fails))


@dataclass(frozen=True)
class CompletionResult:
    """Outcome of :func:`complete_to_family_g`.

    ``status`` is ``"found"``, ``"definite-no"`` (a block already has internal
    degree 4 or more, or two triangles meet in a single vertex; no supergraph
    repairs either) or ``"budget-exhausted"``
    (nothing within the edge/vertex budget or the search limit; not a proof).
    """

    status: str
    witness: FamilyGWitness | None = None
    added_edges: tuple[Edge, ...] = ()
    new_vertices: int = 0
    nodes: int = 0
    limit_hit: bool = False

    @property
    def found(self) -> bool:
        return self.status == "found"


def _bowtie_at(h: SimpleGraph) -> int | None:
    """A vertex where two triangles meet and share nothing else.

    In a supergraph the two triangles either share a block, where that vertex
    then has four block neighbours, or sit in different blocks of a component
    with a degree-4 vertex.  Either way the supergraph is not in G.
    """
    for c in range(h.n):
        nb = h.neighbors(c)
        tris = [(a, b) for i, a in enumerate(nb) for b in nb[i + 1:] if h.has_edge(a, b)]
        for i, t1 in enumerate(tris):
            for t2 in tris[i + 1:]:
                if not set(t1) & set(t2):
                    return c
    return None


def _far_side(g: SimpleGraph, block: frozenset[int], cut: int | None) -> int:
    """Vertices reachable from ``block - {cut}`` without passing through ``cut``."""
    start = 0
    for v in block:
        if v != cut:
            start |= 1 << v
    forbid = 1 << cut if cut is not None else 0
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        nxt &= ~forbid
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def _fringe_far_side(g: SimpleGraph) -> int | None:
    """Smallest far side of a triangle block cut off from another one.

    For a violating component, pick a triangle-containing block ``B`` and a
    cut vertex ``c`` of ``B`` such that some other triangle block lies outside
    the far side of ``c``.  Any completion must add an edge with an endpoint
    in that far side.  ``None`` when no component violates clause (ii).
    """
    bd = blocks(g)
    best = None
    for comp in components(g):
        if max(g.degree(v) for v in comp) <= 3:
            continue
        cs = set(comp)
        tri_blocks = [
            b for b in bd.blocks if b <= cs and len(b) >= 3 and has_triangle(g, b)
        ]
        if len(tri_blocks) <= 1:
            continue
        for b in tri_blocks:
            for c in sorted(b & bd.cut_vertices):
                far = _far_side(g, b, c)
                if any(not (t - {c}) & set(bits(far)) for t in tri_blocks if t is not b):
                    key = (far.bit_count(), far)
                    if best is None or key < best:
                        best = key
    return None if best is None else best[1]


def complete_to_family_g(
    h: SimpleGraph,
    max_new_vertices: int = 2,
    max_new_edges: int = 6,
    *,
    node_limit: int = 200_000,
    timeout_ms: int | None = None,
) -> CompletionResult:
    """Search for a supergraph of ``h`` in G within an addition budget.

    Depth-bounded by the number of added edges (iterative deepening, so the
    first witness uses as few edges as possible).  Each step must add an edge
    touching the far side of a fringe triangle block: any completion has to
    put that block on a common cycle with another triangle block, which is
    impossible without such an edge.  Block-internal degrees only grow as
    edges are added, so a block of degree 4 prunes the branch for good.
    Candidate edges are tried among existing vertices first, then to new
    vertices, each group in lexicographic order.
    """
    if max_new_vertices < 0 or max_new_edges < 0:
        raise ValueError("budgets must be nonnegative")
    base = check_family_g(h)
    if base:
        return CompletionResult("found", FamilyGWitness.identity(h))
    if not base.block_degree_ok or _bowtie_at(h) is not None:
        return CompletionResult("definite-no")

    deadline = None if timeout_ms is None else time.monotonic() + timeout_ms / 1000
    nodes = 0
    limit_hit = False
    n0 = h.n

    def dfs(g: SimpleGraph, added: tuple[Edge, ...], used_new: int, depth: int):
        nonlocal nodes, limit_hit
        nodes += 1
        if nodes > node_limit or (deadline is not None and time.monotonic() > deadline):
            limit_hit = True
            return None
        chk = check_family_g(g)
        if not chk.block_degree_ok:
            return None
        if chk.component_ok:
            return g, added, used_new
        if depth == 0:
            return None
        far = _fringe_far_side(g)
        if far is None:
            return None
        cands: list[Edge] = []
        for x in bits(far):
            for y in range(n0):
                if y != x and not g.has_edge(x, y):
                    cands.append(norm_edge(x, y))
        cands = sorted(set(cands))
        fresh = []
        # new vertices already in play, then at most one fresh one
        for z in range(n0, n0 + used_new):
            for x in bits(far):
                if x != z and not g.has_edge(x, z):
                    fresh.append((x, z))
        if used_new < max_new_vertices:
            z = n0 + used_new
            fresh += [(x, z) for x in bits(far)]
        for e in cands + fresh:
            if e in added:
                continue
            extra_vertex = e[1] >= n0 + used_new
            nn = g.n + 1 if extra_vertex else g.n
            g2 = SimpleGraph(nn, g.edges + (e,))
            got = dfs(g2, added + (e,), used_new + (1 if extra_vertex else 0), depth - 1)
            if got is not None:
                return got
            if limit_hit:
                return None
        return None

    for depth in range(1, max_new_edges + 1):
        got = dfs(h, (), 0, depth)
        if got is not None:
            g, added, used_new = got
            return CompletionResult(
                "found",
                FamilyGWitness.identity(h, g),
                added_edges=added,
                new_vertices=used_new,
                nodes=nodes,
            )
        if limit_hit:
            break
    return CompletionResult("budget-exhausted", nodes=nodes, limit_hit=limit_hit)
