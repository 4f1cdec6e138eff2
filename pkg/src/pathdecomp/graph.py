"""Immutable simple graphs and the structural analyses built on them.

Vertices are always ``0..n-1``.  Adjacency is kept as one integer bitset per
vertex so that adjacency tests in the solver's inner loops are a shift and a
mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleGraph:
    """A finite simple graph on vertices ``0..n-1``.

    ``edges`` may be passed in any order or orientation; it is normalized to
    a sorted tuple of ``(u, v)`` pairs with ``u < v``.  Loops are rejected,
    repeated edges collapse.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {self.n}")
        clean = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            clean.add(norm_edge(u, v))
        edges = tuple(sorted(clean))
        adj = [0] * self.n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adj", tuple(adj))

    # -- basic queries -------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def odd_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.degree(v) % 2]

    def even_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.degree(v) % 2 == 0]

    def incident_edges(self, v: int) -> list[Edge]:
        return [norm_edge(v, w) for w in self.neighbors(v)]

    # -- constructors --------------------------------------------------
    def add_edges(self, extra: Iterable[Edge], n: int | None = None) -> SimpleGraph:
        return SimpleGraph(self.n if n is None else n, self.edges + tuple(extra))

    def remove_edges(self, gone: Iterable[Edge]) -> SimpleGraph:
        drop = {norm_edge(*e) for e in gone}
        return SimpleGraph(self.n, tuple(e for e in self.edges if e not in drop))

    def remove_vertex(self, z: int) -> tuple[SimpleGraph, list[int]]:
        return self.induced_subgraph([v for v in range(self.n) if v != z])

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[SimpleGraph, list[int]]:
        """Relabeled induced subgraph plus the back-map ``new -> old``."""
        back = sorted(set(vertices))
        fwd = {old: new for new, old in enumerate(back)}
        edges = [
            (fwd[u], fwd[v]) for u, v in self.edges if u in fwd and v in fwd
        ]
        return SimpleGraph(len(back), edges), back

    def relabel(self, perm: Sequence[int]) -> SimpleGraph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return SimpleGraph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def disjoint_union(self, other: SimpleGraph) -> SimpleGraph:
        k = self.n
        return SimpleGraph(
            k + other.n, self.edges + tuple((u + k, v + k) for u, v in other.edges)
        )

    def __str__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# -- named graphs, mostly for tests and generators -----------------------
def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, combinations(range(n), 2))


def star_graph(leaves: int) -> SimpleGraph:
    return SimpleGraph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def bowtie() -> SimpleGraph:
    return SimpleGraph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


# -- components ------------------------------------------------------------
def components(g: SimpleGraph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by least vertex."""
    seen = 0
    out = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(bits(comp))
    return out


def is_connected(g: SimpleGraph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


# -- blocks ------------------------------------------------------------------
@dataclass(frozen=True)
class BlockDecomposition:
    blocks: list[frozenset[int]]
    block_edges: list[tuple[Edge, ...]]
    cut_vertices: frozenset[int]
    leaf_block_indices: list[int]

    def blocks_containing(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def blocks(g: SimpleGraph) -> BlockDecomposition:
    """Biconnected components by an iterative lowpoint DFS.

    Bridges come out as two-vertex blocks and isolated vertices as one-vertex
    blocks, so every edge lies in exactly one block.
    """
    n = g.n
    disc = [-1] * n
    low = [0] * n
    cuts: set[int] = set()
    found: list[list[Edge]] = []
    singles: list[int] = []
    clock = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        if g.adj[root] == 0:
            singles.append(root)
            disc[root] = clock
            clock += 1
            continue
        disc[root] = low[root] = clock
        clock += 1
        root_children = 0
        edge_stack: list[Edge] = []
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            descended = False
            for w in it:
                if disc[w] == -1:
                    edge_stack.append((v, w))
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, v, iter(g.neighbors(w))))
                    descended = True
                    break
                if w != parent and disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if descended:
                continue
            stack.pop()
            if not stack:
                break
            p = stack[-1][0]
            low[p] = min(low[p], low[v])
            if low[v] >= disc[p]:
                if p == root:
                    root_children += 1
                else:
                    cuts.add(p)
                comp = []
                while True:
                    e = edge_stack.pop()
                    comp.append(norm_edge(*e))
                    if e == (p, v):
                        break
                found.append(comp)
        if root_children >= 2:
            cuts.add(root)

    entries = []
    for comp in found:
        verts = frozenset(x for e in comp for x in e)
        entries.append((min(verts), sorted(verts), verts, tuple(sorted(comp))))
    for v in singles:
        entries.append((v, [v], frozenset([v]), ()))
    entries.sort(key=lambda t: (t[0], t[1]))
    block_sets = [t[2] for t in entries]
    leaves = [i for i, b in enumerate(block_sets) if len(b & cuts) <= 1]
    return BlockDecomposition(
        blocks=block_sets,
        block_edges=[t[3] for t in entries],
        cut_vertices=frozenset(cuts),
        leaf_block_indices=leaves,
    )


def block_max_degree(block_edges: Sequence[Edge]) -> int:
    deg: dict[int, int] = {}
    for u, v in block_edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return max(deg.values(), default=0)


def has_triangle(g: SimpleGraph, vertices: Iterable[int]) -> bool:
    """True if three of ``vertices`` are pairwise adjacent in ``g``."""
    vs = sorted(vertices)
    mask = 0
    for v in vs:
        mask |= 1 << v
    for i, a in enumerate(vs):
        na = g.adj[a] & mask
        for b in vs[i + 1 :]:
            if na >> b & 1 and (na & g.adj[b]) >> (b + 1):
                return True
    return False


# -- even subgraph -----------------------------------------------------------
@dataclass(frozen=True)
class ComponentSummary:
    vertex_count: int
    block_count: int
    triangle_block_count: int
    max_degree: int


@dataclass(frozen=True)
class ESubgraphReport:
    even_vertices: tuple[int, ...]
    ev_graph: SimpleGraph
    back_map: tuple[int, ...]
    max_e_degree: int
    component_summaries: tuple[ComponentSummary, ...]

    def host_edges(self) -> list[Edge]:
        b = self.back_map
        return [norm_edge(b[u], b[v]) for u, v in self.ev_graph.edges]


def component_summaries(g: SimpleGraph) -> list[ComponentSummary]:
    bd = blocks(g)
    out = []
    for comp in components(g):
        cs = set(comp)
        idx = [i for i, b in enumerate(bd.blocks) if b <= cs]
        tri = sum(1 for i in idx if has_triangle(g, bd.blocks[i]))
        out.append(
            ComponentSummary(
                vertex_count=len(comp),
                block_count=len(idx),
                triangle_block_count=tri,
                max_degree=max((g.degree(v) for v in comp), default=0),
            )
        )
    return out


def even_subgraph(g: SimpleGraph) -> ESubgraphReport:
    evens = g.even_vertices()
    ev, back = g.induced_subgraph(evens)
    return ESubgraphReport(
        even_vertices=tuple(evens),
        ev_graph=ev,
        back_map=tuple(back),
        max_e_degree=ev.max_degree(),
        component_summaries=tuple(component_summaries(ev)),
    )


def is_odd_semi_clique(g: SimpleGraph) -> bool:
    hit = g.m > (g.n // 2) * (g.n - 1)
    if hit:
        assert g.n % 2 == 1, "odd semi-clique with even order"
    return hit
