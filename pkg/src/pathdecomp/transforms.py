"""Addible edge sets and the transformations they certify.

A transformation adds a set ``A`` of edges at a pivot ``u`` to a decomposed
graph without changing the number of paths; only the endpoint counts of
``u`` and the far ends of ``A`` move, by exactly one per edge.  Each
transformation is found by an endpoint-constrained exact search and carries a
certificate that can be rechecked independently.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .decomposition import PathDecomposition, emit, passing_neighbors, validate
from .formats import emit_graph6, parse_graph6
from .graph import Edge, SimpleGraph, components, even_subgraph, norm_edge
from .solver import DEFAULT_TIMEOUT_MS, EndpointConstraint, constrained_decompose

TOWARDS = "towards"
OUTWARDS = "outwards"


class ContractBug(AssertionError):
    """A transformation was guaranteed to exist but the search found none."""


@dataclass(frozen=True)
class TransformationCertificate:
    base_graph: SimpleGraph
    added_edges: tuple[Edge, ...]
    pivot: int
    direction: str
    before: PathDecomposition
    after: PathDecomposition

    @property
    def enlarged_graph(self) -> SimpleGraph:
        return self.base_graph.add_edges(self.added_edges)

    def to_json(self) -> dict:
        return {
            "base_graph": emit_graph6(self.base_graph),
            "added_edges": [list(e) for e in self.added_edges],
            "pivot": self.pivot,
            "direction": self.direction,
            "before": self.before.to_json()["paths"],
            "after": self.after.to_json()["paths"],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict | str) -> TransformationCertificate:
        if isinstance(data, str):
            data = json.loads(data)
        base = parse_graph6(data["base_graph"])
        added = tuple(norm_edge(*e) for e in data["added_edges"])
        big = base.add_edges(added)
        return cls(
            base,
            added,
            data["pivot"],
            data["direction"],
            PathDecomposition.from_json(base, {"paths": data["before"]}),
            PathDecomposition.from_json(big, {"paths": data["after"]}),
        )


def _far_ends(edges: Iterable[Edge], u: int) -> list[int]:
    out = []
    for a, b in edges:
        if u not in (a, b):
            raise ValueError(f"edge {(a, b)} is not incident to pivot {u}")
        out.append(b if a == u else a)
    return out


def _targets(before: PathDecomposition, edges: tuple[Edge, ...], u: int, direction: str) -> dict[int, int]:
    sign = 1 if direction == TOWARDS else -1
    t = {v: before.D(v) for v in range(before.host.n)}
    t[u] += sign * len(edges)
    for x in _far_ends(edges, u):
        t[x] -= sign
    return t


def verify_transformation(c: TransformationCertificate) -> list[str]:
    """Failed checks of ``c``; empty means the certificate is sound."""
    out = []
    if c.direction not in (TOWARDS, OUTWARDS):
        return [f"unknown direction {c.direction!r}"]
    try:
        _far_ends(c.added_edges, c.pivot)
    except ValueError as exc:
        return [str(exc)]
    if len(set(c.added_edges)) != len(c.added_edges):
        out.append("added edges repeat")
    if any(c.base_graph.has_edge(*e) for e in c.added_edges):
        out.append("an added edge is already in the base graph")
    out += [f"before: {v}" for v in validate(c.base_graph, c.before)]
    big = c.enlarged_graph
    out += [f"after: {v}" for v in validate(big, c.after)]
    if out:
        return out
    if len(c.after) != len(c.before):
        out.append(f"clause (i): {len(c.after)} paths after, {len(c.before)} before")
    want = _targets(c.before, c.added_edges, c.pivot, c.direction)
    moved = {c.pivot, *_far_ends(c.added_edges, c.pivot)}
    for v in range(big.n):
        got = c.after.D(v)
        if got != want[v]:
            clause = "(ii)" if v in moved else "(iii)"
            out.append(f"clause {clause}: D({v}) = {got}, expected {want[v]}")
    return out


def apply_addible(
    g_prime: SimpleGraph,
    d_prime: PathDecomposition,
    a: Iterable[Edge],
    u: int,
    direction: str = TOWARDS,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
) -> TransformationCertificate | None:
    """Certificate that ``a`` is addible at ``u`` w.r.t. ``d_prime``, or ``None``.

    ``None`` is definitive.  Search timeouts propagate as ``SearchTimeout``.
    """
    if direction not in (TOWARDS, OUTWARDS):
        raise ValueError(f"unknown direction {direction!r}")
    edges = tuple(sorted({norm_edge(*e) for e in a}))
    _far_ends(edges, u)
    if any(g_prime.has_edge(*e) for e in edges):
        raise ValueError("added edges must be absent from the base graph")
    bad = validate(g_prime, d_prime)
    if bad:
        raise ValueError(f"d_prime does not decompose g_prime: {bad[0]}")
    if not edges:
        return TransformationCertificate(g_prime, (), u, direction, d_prime, d_prime)
    targets = _targets(d_prime, edges, u, direction)
    if min(targets.values()) < 0:
        return None
    big = g_prime.add_edges(edges)
    after = constrained_decompose(big, EndpointConstraint(targets, len(d_prime)), timeout_ms)
    if after is None:
        return None
    return TransformationCertificate(g_prime, edges, u, direction, d_prime, after)


def fan2_precondition(g: SimpleGraph, uv: Edge, d_prime: PathDecomposition) -> bool:
    u, v = uv
    g_prime = g.remove_edges([uv])
    return d_prime.D(v) > len(passing_neighbors(g_prime, d_prime, u))


def addible_single_fan2(
    g: SimpleGraph,
    uv: Edge,
    d_prime: PathDecomposition,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
) -> TransformationCertificate | None:
    """Add ``uv`` towards ``u`` (the first vertex of ``uv``).

    Returns ``None`` when the guaranteeing condition, ``D'(v)`` larger than
    the number of passing neighbours of ``u``, does not hold.  That is not a
    claim that ``uv`` cannot be added.
    """
    u, v = uv
    if not g.has_edge(u, v):
        raise ValueError(f"{uv} is not an edge of g")
    g_prime = g.remove_edges([uv])
    if not fan2_precondition(g, uv, d_prime):
        return None
    cert = apply_addible(g_prime, d_prime, [uv], u, TOWARDS, timeout_ms)
    if cert is None:
        raise ContractBug(f"single edge {uv} not addible towards {u} despite the endpoint condition")
    return cert


def addible_half_fan4(
    g: SimpleGraph,
    u: int,
    h_edges: Iterable[Edge],
    x: Edge,
    d_prime: PathDecomposition,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
) -> tuple[tuple[Edge, ...], TransformationCertificate]:
    """Largest addible ``A`` with ``x`` in ``A``, among subsets of ``h_edges``.

    Subsets are tried by decreasing size, lexicographically within a size.
    When every neighbour of ``u`` in ``g`` ends a path of ``d_prime``, some
    ``A`` of size at least ``ceil(h/2)`` exists; failing to find one raises
    :class:`ContractBug`.
    """
    hs = sorted({norm_edge(*e) for e in h_edges})
    x = norm_edge(*x)
    if x not in hs:
        raise ValueError("x must be one of h_edges")
    g_prime = g.remove_edges(hs)
    others = [e for e in hs if e != x]
    need = (len(hs) + 1) // 2
    for size in range(len(hs), 0, -1):
        for rest in itertools.combinations(others, size - 1):
            a = tuple(sorted((x, *rest)))
            cert = apply_addible(g_prime, d_prime, a, u, TOWARDS, timeout_ms)
            if cert is not None:
                return a, cert
        if size == need and all(d_prime.D(v) >= 1 for v in g.neighbors(u)):
            raise ContractBug(f"no addible set of size {need} at {u} containing {x}")
    raise ContractBug(f"no addible set at {u} containing {x}")


def is_induced_matching(g: SimpleGraph, m: Iterable[Edge]) -> bool:
    edges = {norm_edge(*e) for e in m}
    verts = [v for e in edges for v in e]
    if len(set(verts)) != len(verts):
        return False
    vs = sorted(set(verts))
    return all(
        (norm_edge(a, b) in edges) == g.has_edge(a, b)
        for a, b in itertools.combinations(vs, 2)
    )


def lift_induced_matching(
    g: SimpleGraph,
    m: Iterable[tuple[int, int]],
    d_prime: PathDecomposition,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
) -> PathDecomposition:
    """Re-add an induced matching ``{u_i v_i}`` one edge at a time, each towards ``u_i``.

    ``m`` lists ordered pairs ``(u_i, v_i)``.  Each ``u_i`` must have no
    passing neighbour in ``d_prime`` and each ``v_i`` must end a path.
    """
    pairs = [tuple(e) for e in m]
    if not pairs:
        return d_prime
    if not is_induced_matching(g, pairs):
        raise ValueError("edges do not form an induced matching")
    cur_g = g.remove_edges(pairs)
    if validate(cur_g, d_prime):
        raise ValueError("d_prime does not decompose g minus the matching")
    for u, v in pairs:
        if passing_neighbors(cur_g, d_prime, u):
            raise ValueError(f"vertex {u} has a passing neighbour")
        if d_prime.D(v) < 1:
            raise ValueError(f"vertex {v} ends no path")
    cur = d_prime
    for u, v in pairs:
        nxt_g = cur_g.add_edges([(u, v)])
        cert = addible_single_fan2(nxt_g, (u, v), cur, timeout_ms)
        if cert is None:
            raise ContractBug(f"lift of {(u, v)} lost its endpoint condition")
        cur, cur_g = cert.after, nxt_g
    return emit(cur)


def extra_edges_bound(b: int, a1: int, a2: int, d2_u: int) -> bool:
    """Whether ``d2_u > b - a1 - a2``; needs ``a1 >= ceil(b/2)``."""
    if a1 < (b + 1) // 2:
        raise ValueError("a1 must be at least half of b, rounded up")
    return d2_u > b - a1 - a2


def compose(c1: TransformationCertificate, c2: TransformationCertificate) -> TransformationCertificate:
    """Glue two certificates at the same pivot into one covering both edge sets."""
    if c1.pivot != c2.pivot or c1.direction != c2.direction:
        raise ValueError("certificates differ in pivot or direction")
    if c2.before != c1.after:
        raise ValueError("second certificate does not start where the first ends")
    edges = tuple(sorted(c1.added_edges + c2.added_edges))
    return TransformationCertificate(c1.base_graph, edges, c1.pivot, c1.direction, c1.before, c2.after)


@dataclass(frozen=True)
class FanSubgraphReport:
    is_fan: bool
    star_center: int | None
    star_leaves: tuple[int, ...]
    single_edge_components: tuple[Edge, ...]
    clause_results: tuple[bool, bool, bool]
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_fan


def _edge_components(edges: list[Edge]) -> list[list[Edge]]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict[int, list[Edge]] = {}
    for e in edges:
        groups.setdefault(find(e[0]), []).append(e)
    return sorted((sorted(c) for c in groups.values()), key=lambda c: c[0])


def _ev_all_triangles(g: SimpleGraph) -> bool:
    ev = even_subgraph(g).ev_graph
    comps = components(ev)
    return bool(comps) and all(len(c) == 3 for c in comps) and ev.m == 3 * len(comps)


def _check_star(g: SimpleGraph, g_rest: SimpleGraph, comp: list[Edge]) -> tuple[int | None, tuple[int, ...], tuple[bool, bool, bool], str]:
    counts: dict[int, int] = {}
    for a, b in comp:
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    centers = [v for v, c in counts.items() if c == len(comp)]
    if len(comp) < 2 or not centers:
        return None, (), (False, False, False), "first component is not a star with two or more leaves"
    u = centers[0]
    leaves = sorted(v for v in counts if v != u)
    odd_leaves = [v for v in leaves if g.degree(v) % 2]
    c1 = len(odd_leaves) <= 1
    # an odd leaf, if any, is the one allowed to be v_1
    ordered = tuple(odd_leaves + [v for v in leaves if v not in odd_leaves]) if c1 else tuple(leaves)
    # evenness measured after removing F, as in the construction this is used for
    c2 = all(g_rest.degree(w) % 2 for w in g_rest.neighbors(u))
    c3 = True
    if odd_leaves:
        c3 = g.degree(u) % 2 == 1 and _ev_all_triangles(g)
    reason = ""
    if not c1:
        reason = "star has more than one odd leaf"
    elif not c2:
        reason = f"center {u} keeps an even neighbour outside the subgraph"
    elif not c3:
        reason = "odd leaf without odd center and triangle E-subgraph"
    return u, ordered, (c1, c2, c3), reason


def recognize_fan_subgraph(g: SimpleGraph, f_edges: Iterable[Edge]) -> FanSubgraphReport:
    """Decide whether ``f_edges`` forms a Fan subgraph of ``g``.

    Components that are single edges between even vertices of ``g`` are the
    easy ones.  If exactly one component is of another kind it must be the
    star; with two or more such components the answer is no.
    """
    edges = sorted({norm_edge(*e) for e in f_edges})
    if not edges:
        raise ValueError("f_edges must be nonempty")
    for e in edges:
        if not g.has_edge(*e):
            raise ValueError(f"{e} is not an edge of g")
    comps = _edge_components(edges)

    def simple(c: list[Edge]) -> bool:
        return len(c) == 1 and g.degree(c[0][0]) % 2 == 0 and g.degree(c[0][1]) % 2 == 0

    singles = tuple(c[0] for c in comps if simple(c))
    hard = [c for c in comps if not simple(c)]
    if not hard:
        return FanSubgraphReport(True, None, (), singles, (True, True, True))
    if len(hard) > 1:
        return FanSubgraphReport(
            False, None, (), singles, (False, False, False), "more than one component is not an even single edge"
        )
    g_rest = g.remove_edges(edges)
    u, leaves, clauses, reason = _check_star(g, g_rest, hard[0])
    return FanSubgraphReport(all(clauses), u, leaves, singles, clauses, reason)
