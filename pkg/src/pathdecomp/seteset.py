"""SET and ESET graphs: recognition, special decompositions, absorption.

A SET graph has exactly three even vertices, forming a triangle, and every
odd vertex has at least two of them as neighbours.  An ESET graph is a SET
graph (every vertex is a connection vertex) or a SET graph plus one new
vertex ``z`` joined to one odd and one even vertex (``z`` is then the
connection vertex).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .decomposition import PathDecomposition, PathSeq, emit, path_edges
from .graph import SimpleGraph, components
from .solver import DEFAULT_TIMEOUT_MS, SearchTimeout, pn_exact
from .transforms import addible_half_fan4


@dataclass(frozen=True)
class SetClassification:
    is_set: bool
    triangle_vertices: tuple[int, int, int] | None
    odd_vertices: tuple[int, ...]
    even_neighbor_counts: dict[int, int]

    def __bool__(self) -> bool:
        return self.is_set


def classify_set(g: SimpleGraph) -> SetClassification:
    even = g.even_vertices()
    odd = tuple(g.odd_vertices())
    tri = None
    if len(even) == 3:
        a, b, c = even
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c):
            tri = (a, b, c)
    even_set = set(even)
    counts = {v: sum(1 for w in g.neighbors(v) if w in even_set) for v in odd}
    is_set = tri is not None and all(c >= 2 for c in counts.values())
    if is_set:
        assert g.n % 2 == 1
    return SetClassification(is_set, tri, odd, counts)


class EsetKind(str, enum.Enum):
    TYPE_SET = "TypeSet"
    TYPE_AUGMENTED = "TypeAugmented"
    NOT_ESET = "NotEset"


@dataclass(frozen=True)
class EsetClassification:
    """For the augmented type, ``z`` is the smallest vertex whose removal
    leaves a SET graph of the right shape, ``base_set_graph`` is ``K - z``
    and ``base_back`` maps its vertices to those of ``K``.  A graph can be
    augmented in more than one way; each such ``z`` is a connection vertex."""

    kind: EsetKind
    connection_vertices: tuple[int, ...]
    base_set_graph: SimpleGraph | None = None
    base_back: tuple[int, ...] = ()
    z: int | None = None
    all_z: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.kind != EsetKind.NOT_ESET


def _augmented_by(g: SimpleGraph, z: int) -> tuple[SimpleGraph, list[int]] | None:
    if g.degree(z) != 2:
        return None
    base, back = g.remove_vertex(z)
    if not classify_set(base):
        return None
    fwd = {old: new for new, old in enumerate(back)}
    a, b = (fwd[w] for w in g.neighbors(z))
    if base.degree(a) % 2 == base.degree(b) % 2:
        return None
    return base, back


def classify_eset(g: SimpleGraph) -> EsetClassification:
    if classify_set(g):
        return EsetClassification(EsetKind.TYPE_SET, tuple(range(g.n)))
    hits = [z for z in range(g.n) if _augmented_by(g, z) is not None]
    if not hits:
        return EsetClassification(EsetKind.NOT_ESET, ())
    # every qualifying z is a connection vertex; the smallest fixes K - z
    z = hits[0]
    base, back = _augmented_by(g, z)
    return EsetClassification(EsetKind.TYPE_AUGMENTED, tuple(hits), base, tuple(back), z, tuple(hits))


def eset_decompose(
    k: SimpleGraph, u: int, timeout_ms: int | None = DEFAULT_TIMEOUT_MS
) -> PathDecomposition:
    """Decomposition of an ESET graph with ``D(u) >= 2`` and at most ``ceil(n/2)`` paths."""
    cls = classify_eset(k)
    if not cls:
        raise ValueError("graph is not ESET")
    if u not in cls.connection_vertices:
        raise ValueError(f"vertex {u} is not a connection vertex")
    if cls.kind == EsetKind.TYPE_SET:
        return emit(_decompose_set(k, u, timeout_ms))
    return emit(_decompose_augmented(k, u, timeout_ms))


def _decompose_set(k: SimpleGraph, u: int, timeout_ms: int | None) -> PathDecomposition:
    even = set(k.even_vertices())
    s = sorted(e for e in k.incident_edges(u) if (e[0] if e[1] == u else e[1]) in even)
    k_rest = k.remove_edges(s)
    res = pn_exact(k_rest, timeout_ms=timeout_ms)
    # a minimum is not needed, only floor(n/2) paths
    if res.timed_out and res.pn > k.n // 2:
        raise SearchTimeout(res.nodes_explored, res.best_lower_bound)
    base = res.witness
    if not s:
        return base
    a, cert = addible_half_fan4(k, u, s, s[0], base, timeout_ms)
    paths = list(cert.after.paths)
    for e in s:
        if e not in a:
            paths.append(e)
    return PathDecomposition(k, tuple(paths))


def _decompose_augmented(k: SimpleGraph, z: int, timeout_ms: int | None) -> PathDecomposition:
    base, back = _augmented_by(k, z)
    fwd = {old: new for new, old in enumerate(back)}
    x, y = (fwd[w] for w in k.neighbors(z))
    if base.degree(x) % 2 == 0:
        x, y = y, x
    d_minus = _decompose_set(base, y, timeout_ms)
    px = d_minus.paths_ending_at(x)[0]
    py = next(i for i in d_minus.paths_ending_at(y) if i != px)
    paths = []
    for i, p in enumerate(d_minus.paths):
        q = [back[v] for v in p]
        if i == px:
            q = q if p[-1] == x else q[::-1]
            q.append(z)
        elif i == py:
            q = q if p[-1] == y else q[::-1]
            q.append(z)
        paths.append(tuple(q))
    return PathDecomposition(k, tuple(paths))


def augment(k_minus: SimpleGraph, odd: int, even: int) -> SimpleGraph:
    """Add a vertex joined to ``odd`` and ``even`` of a SET graph."""
    if not classify_set(k_minus):
        raise ValueError("base graph is not SET")
    if k_minus.degree(odd) % 2 == 0 or k_minus.degree(even) % 2:
        raise ValueError("need one odd and one even vertex")
    z = k_minus.n
    return k_minus.add_edges([(odd, z), (even, z)], n=z + 1)


def absorb_path(
    k: SimpleGraph, u: int, p: PathSeq, timeout_ms: int | None = DEFAULT_TIMEOUT_MS
) -> PathDecomposition:
    """Decompose ``k`` plus a path ``p`` meeting it only at ``u``.

    Vertices of ``p`` other than ``u`` must be numbered ``k.n`` or above.
    The result has at most ``ceil(k.n/2)`` paths: ``p`` is cut at ``u`` and
    each half is glued onto a path of the ESET decomposition ending at ``u``.
    """
    p = tuple(p)
    if u not in p:
        raise ValueError("path does not pass through u")
    if any(v != u and v < k.n for v in p):
        raise ValueError("path meets k outside u")
    if len(set(p)) != len(p):
        raise ValueError("p repeats a vertex")
    n = max([k.n, *[v + 1 for v in p]])
    host = k.add_edges(path_edges(p), n=n)
    dk = eset_decompose(k, u, timeout_ms)
    i = p.index(u)
    halves = [h for h in (p[i::-1], p[i:]) if len(h) > 1]
    q_idx = dk.paths_ending_at(u)[:2]
    paths = []
    for j, q in enumerate(dk.paths):
        if j in q_idx and halves:
            h = halves.pop(0)
            q = q if q[-1] == u else q[::-1]
            paths.append(tuple(q) + h[1:])
        else:
            paths.append(tuple(q))
    return emit(PathDecomposition(host, tuple(paths)))


@dataclass(frozen=True)
class HangingEset:
    vertices: frozenset[int]
    attachment: int
    classification: EsetClassification


def find_hanging_eset(g: SimpleGraph, max_branches: int = 12) -> list[HangingEset]:
    """Every vertex set inducing an ESET that meets the rest of ``g`` only at a
    connection vertex.

    Such a set is the attachment vertex plus some of the components of
    ``g - u``, so only cut vertices are tried and only unions of their
    branches.  Cut vertices with more than ``max_branches`` branches are
    skipped.
    """
    out = []
    for u in range(g.n):
        if g.degree(u) < 2:
            continue
        rest, back = g.remove_vertex(u)
        branches = [
            frozenset(back[v] for v in c)
            for c in components(rest)
            if any(g.has_edge(u, back[v]) for v in c)
        ]
        if len(branches) < 2 or len(branches) > max_branches:
            continue
        for r in range(1, len(branches)):
            for pick in itertools.combinations(branches, r):
                verts = frozenset({u}.union(*pick))
                sub, sback = g.induced_subgraph(sorted(verts))
                cls = classify_eset(sub)
                if cls and sback.index(u) in cls.connection_vertices:
                    out.append(HangingEset(verts, u, cls))
    out.sort(key=lambda h: (h.attachment, sorted(h.vertices)))
    return out


def absorb_hanging(
    g: SimpleGraph,
    k: frozenset[int] | set[int],
    u: int,
    rest_decomposition: PathDecomposition,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
) -> PathDecomposition:
    """Merge a decomposition of ``g`` minus the hanging ESET ``k`` with ``k`` itself.

    ``rest_decomposition`` is over ``g`` with the edges inside ``k`` removed.
    At most ``ceil(|k|/2) + len(rest_decomposition) - 1`` paths result when
    some rest path passes through ``u``; otherwise the ESET decomposition is
    simply added.
    """
    kv = sorted(k)
    if u not in k:
        raise ValueError("attachment vertex not in k")
    sub, back = g.induced_subgraph(kv)
    fwd = {old: new for new, old in enumerate(back)}
    through = rest_decomposition.paths_through(u)
    if not through:
        dk = eset_decompose(sub, fwd[u], timeout_ms)
        paths = [tuple(back[v] for v in q) for q in dk.paths] + list(rest_decomposition.paths)
        return emit(PathDecomposition(g, tuple(paths)))
    pi = through[0]
    p = rest_decomposition.paths[pi]
    if any(v in k and v != u for v in p):
        raise ValueError("rest path enters k")
    local = dict(fwd)
    outside = [v for v in p if v not in k]
    for j, v in enumerate(outside):
        local[v] = sub.n + j
    inv = {new: old for old, new in local.items()}
    dh = absorb_path(sub, fwd[u], tuple(local[v] for v in p), timeout_ms)
    paths = [tuple(inv[v] for v in q) for q in dh.paths]
    paths += [q for j, q in enumerate(rest_decomposition.paths) if j != pi]
    return emit(PathDecomposition(g, tuple(paths)))
