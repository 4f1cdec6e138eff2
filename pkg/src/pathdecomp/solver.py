"""Exact path numbers by branch and bound, and endpoint-constrained search.

Search model
------------
Every edge has two *ends*, one at each endpoint.  At a vertex ``v`` each end
is either joined to another end at ``v`` (the two edges are consecutive on
one path, which passes through ``v``) or left as a path end.  Once every end
is decided the edges fall into paths, and the number of paths is half the
number of path ends.  ``D(v)`` is simply the number of path ends at ``v``.

Vertices are processed one at a time.  At the current vertex the lowest
undecided end is branched on: extend it through ``v`` with each later
undecided end (the two partial paths must meet only at ``v``), else stop the
path there.  The bound counts path ends already placed plus one for every
vertex whose undecided ends are odd in number.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

from .decomposition import PathDecomposition, emit
from .graph import SimpleGraph, components

DEFAULT_TIMEOUT_MS = 10_000


class SearchTimeout(Exception):
    """Raised when a search runs past its deadline or node budget."""

    def __init__(self, nodes: int, lower_bound: int | None = None):
        super().__init__(f"search stopped after {nodes} nodes")
        self.nodes = nodes
        self.lower_bound = lower_bound


@dataclass(frozen=True)
class EndpointConstraint:
    """Exact ``D(u)`` targets for some vertices and an exact path count."""

    targets: Mapping[int, int]
    total: int


@dataclass(frozen=True)
class SolveResult:
    """Outcome of :func:`pn_exact`.

    When ``timed_out`` is set, ``pn`` is only an upper bound (the size of
    ``witness``) and ``best_lower_bound`` the strongest proven lower bound.
    """

    pn: int
    witness: PathDecomposition
    nodes_explored: int
    timed_out: bool
    best_lower_bound: int


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def pn_lower_bound(g: SimpleGraph) -> int:
    if g.m == 0:
        return 0
    lb = _ceil_div(len(g.odd_vertices()), 2)
    if g.n >= 2:
        lb = max(lb, _ceil_div(g.m, g.n - 1))
    # a path uses at most two edges at any vertex
    lb = max(lb, _ceil_div(g.max_degree(), 2))
    if g.m > (g.n // 2) * (g.n - 1):
        lb = max(lb, _ceil_div(g.n, 2))
    return lb


class _Search:
    UNDECIDED = -2
    END = -1

    def __init__(
        self,
        g: SimpleGraph,
        targets: Sequence[int | None] | None,
        min_ends: int,
        max_ends: int,
        deadline: float | None,
        node_limit: int | None,
        shuffle: random.Random | None = None,
    ):
        self.g = g
        self.shuffle = shuffle
        n = g.n
        self.edges = list(g.edges)
        m = len(self.edges)
        self.vert = [0] * (2 * m)
        inc: list[list[int]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(self.edges):
            self.vert[2 * i] = a
            self.vert[2 * i + 1] = b
            inc[a].append(2 * i)
            inc[b].append(2 * i + 1)
        if shuffle is not None:
            for lst in inc:
                shuffle.shuffle(lst)
        self.inc = inc
        self.order = self._vertex_order()
        self.partner = [self.UNDECIDED] * (2 * m)
        self.cid = list(range(m))
        self.members = [[i] for i in range(m)]
        self.cmask = [(1 << a) | (1 << b) for a, b in self.edges]
        # the two outermost slots of each chain
        self.term = [[2 * i, 2 * i + 1] for i in range(m)]
        self.ends = [0] * n
        self.undecided = [len(inc[v]) for v in range(n)]
        self.targets = list(targets) if targets is not None else [None] * n
        # path ends still forced at each free vertex
        self.forced = [self.undecided[v] & 1 for v in range(n)]
        self.trail: list[tuple[int, int]] = []
        # with at most max_ends/2 paths, each visiting w once, w ends at
        # most max_ends - d(w) of them
        self.cap = [max_ends - len(inc[v]) for v in range(n)]
        self.min_ends = min_ends
        self.max_ends = max_ends
        self.deadline = deadline
        self.node_limit = node_limit
        self.nodes = 0
        lo = hi = 0
        for v in range(n):
            t = self.targets[v]
            if t is None:
                lo += self.forced[v]
                hi += self.undecided[v]
            else:
                lo += t
                hi += t
        self.lo = lo
        self.hi = hi

    def _vertex_order(self) -> list[int]:
        # breadth-first from the highest-degree vertex, so partial paths
        # close up early and conflicts surface near the root
        g = self.g
        seen = [False] * g.n
        order = []
        tie = list(range(g.n))
        if self.shuffle is not None:
            self.shuffle.shuffle(tie)
        by_deg = sorted(range(g.n), key=lambda v: (-g.degree(v), tie[v]))
        for s in by_deg:
            if seen[s]:
                continue
            seen[s] = True
            queue = [s]
            while queue:
                v = queue.pop(0)
                order.append(v)
                for w in sorted(g.neighbors(v), key=lambda w: (-g.degree(w), tie[w])):
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
        return order

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes & 1023 == 0:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise SearchTimeout(self.nodes)
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise SearchTimeout(self.nodes)

    def _stranded(self, w: int) -> tuple[int, int]:
        """(undecided slots, slots with no possible partner) at ``w``.

        Two undecided slots at ``w`` can be joined only if they lie on
        different chains that meet nowhere but ``w``.
        """
        partner = self.partner
        open_slots = [x for x in self.inc[w] if partner[x] == self.UNDECIDED]
        cid, cmask = self.cid, self.cmask
        wbit = 1 << w
        stranded = 0
        for a in open_slots:
            ca = cid[a >> 1]
            ma = cmask[ca]
            for b in open_slots:
                cb = cid[b >> 1]
                if cb != ca and ma & cmask[cb] == wbit:
                    break
            else:
                stranded += 1
        return len(open_slots), stranded

    def _refresh(self, ws) -> bool:
        """Recompute forced ends at ``ws``; False if the bounds are now violated.

        Changes are logged on ``trail``; callers undo with :meth:`_rewind`.
        """
        ok = True
        for w in ws:
            r, k = self._stranded(w)
            t = self.targets[w]
            if t is not None:
                if k > t - self.ends[w]:
                    ok = False
                continue
            new = k + ((r - k) & 1)
            if self.ends[w] + new > self.cap[w]:
                ok = False
            old = self.forced[w]
            if new != old:
                self.trail.append((w, old))
                self.forced[w] = new
                self.lo += new - old
        return ok and self.lo <= self.max_ends and self.hi >= self.min_ends

    def _rewind(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            w, old = trail.pop()
            self.lo += old - self.forced[w]
            self.forced[w] = old

    def run(self) -> list[list[int]] | None:
        if self.lo > self.max_ends or self.hi < self.min_ends:
            return None
        for v, t in enumerate(self.targets):
            if t is not None and (t < 0 or t > self.undecided[v] or (t - self.undecided[v]) % 2):
                return None
            if (t if t is not None else self.forced[v]) > self.cap[v]:
                return None
        if self._go(0):
            return self._paths()
        return None

    def _go(self, pos: int) -> bool:
        self._tick()
        order = self.order
        while pos < len(order) and self.undecided[order[pos]] == 0:
            pos += 1
        if pos == len(order):
            total = sum(self.ends)
            return self.min_ends <= total <= self.max_ends
        v = order[pos]
        slots = self.inc[v]
        partner = self.partner
        s = next(x for x in slots if partner[x] == self.UNDECIDED)
        target = self.targets[v]
        r = self.undecided[v]
        mark = len(self.trail)

        # extend through v
        if (target is None or self.ends[v] + r - 2 >= target) and r >= 2:
            ce = self.cid[s >> 1]
            vbit = 1 << v
            for s2 in slots:
                if s2 == s or partner[s2] != self.UNDECIDED:
                    continue
                cf = self.cid[s2 >> 1]
                if ce == cf or self.cmask[ce] & self.cmask[cf] != vbit:
                    continue
                big, small = (ce, cf) if len(self.members[ce]) >= len(self.members[cf]) else (cf, ce)
                moved = self.members[small]
                old_mask = self.cmask[big]
                old_term = self.term[big]
                te, tf = self.term[ce], self.term[cf]
                far_e = te[0] if te[1] == s else te[1]
                far_f = tf[0] if tf[1] == s2 else tf[1]
                for x in moved:
                    self.cid[x] = big
                self.members[big].extend(moved)
                self.cmask[big] |= self.cmask[small]
                self.term[big] = [far_e, far_f]
                partner[s] = s2
                partner[s2] = s
                self.undecided[v] = r - 2
                if target is None:
                    self.hi -= 2
                if self._refresh({v, self.vert[far_e], self.vert[far_f]}) and self._go(pos):
                    return True
                self._rewind(mark)
                if target is None:
                    self.hi += 2
                self.undecided[v] = r
                partner[s] = partner[s2] = self.UNDECIDED
                self.term[big] = old_term
                self.cmask[big] = old_mask
                del self.members[big][len(self.members[big]) - len(moved) :]
                for x in moved:
                    self.cid[x] = small

        # stop a path at v
        if target is not None and self.ends[v] + 1 > target:
            return False
        if self.ends[v] + 1 > self.cap[v]:
            return False
        partner[s] = self.END
        self.ends[v] += 1
        self.undecided[v] = r - 1
        if target is None:
            # the end itself moves from forced to placed
            self.lo += 1
        if self._refresh((v,)) and self._go(pos):
            return True
        self._rewind(mark)
        if target is None:
            self.lo -= 1
        self.ends[v] -= 1
        self.undecided[v] = r
        partner[s] = self.UNDECIDED
        return False

    def _paths(self) -> list[list[int]]:
        vert = self.vert
        partner = self.partner
        used = [False] * len(self.edges)
        paths = []
        for s in range(len(partner)):
            if partner[s] != self.END or used[s >> 1]:
                continue
            path = [vert[s]]
            cur = s
            while True:
                used[cur >> 1] = True
                other = cur ^ 1
                path.append(vert[other])
                nxt = partner[other]
                if nxt == self.END:
                    break
                cur = nxt
            paths.append(path)
        return paths


RESTART_BASE_NODES = 2000


def _search_with_restarts(
    g: SimpleGraph,
    targets: Sequence[int | None] | None,
    min_ends: int,
    max_ends: int,
    deadline: float | None,
    node_limit: int | None,
) -> tuple[list[list[int]] | None, int]:
    """Run the search under a doubling node allowance, reshuffling the
    branching order between attempts (seeded, so runs are reproducible).

    An attempt that finishes is conclusive either way; only running out of
    allowance moves on to the next attempt.  Heavy-tailed searches for
    decompositions that exist often finish quickly under another order.
    """
    nodes = 0
    attempt = 0
    while True:
        allowance = RESTART_BASE_NODES << attempt
        capped = True
        if node_limit is not None and nodes + allowance >= node_limit:
            allowance = node_limit - nodes
            capped = False
        rng = random.Random(attempt) if attempt else None
        search = _Search(g, targets, min_ends, max_ends, deadline, allowance, rng)
        try:
            found = search.run()
        except SearchTimeout as exc:
            nodes += exc.nodes
            timed_out_by_clock = deadline is not None and time.monotonic() > deadline
            if timed_out_by_clock or not capped:
                raise SearchTimeout(nodes) from None
            attempt += 1
            continue
        return found, nodes + search.nodes


def _orient(paths: list[list[int]]) -> list[tuple[int, ...]]:
    out = []
    for p in paths:
        t = tuple(p)
        out.append(t if t[0] <= t[-1] else t[::-1])
    out.sort()
    return out


def greedy_decomposition(g: SimpleGraph) -> list[tuple[int, ...]]:
    """A quick valid decomposition, used as the initial upper bound.

    Paths start at an odd-residual-degree vertex when there is one and grow
    greedily towards the unvisited neighbour of smallest residual degree.
    """
    res = [set(g.neighbors(v)) for v in range(g.n)]
    left = g.m
    paths = []
    while left:
        odd = [v for v in range(g.n) if len(res[v]) % 2]
        start = odd[0] if odd else next(v for v in range(g.n) if res[v])
        path = [start]
        on = {start}
        cur = start
        for _ in range(2):
            while True:
                nxt = [w for w in res[cur] if w not in on]
                if not nxt:
                    break
                w = min(nxt, key=lambda x: (len(res[x]) % 2 == 0, len(res[x]), x))
                res[cur].discard(w)
                res[w].discard(cur)
                left -= 1
                path.append(w)
                on.add(w)
                cur = w
            # try to grow the other end too
            path.reverse()
            cur = path[-1]
        paths.append(tuple(path))
    return _orient([list(p) for p in paths])


def _deadline(timeout_ms: int | None) -> float | None:
    return None if timeout_ms is None else time.monotonic() + timeout_ms / 1000


def _solve_connected(
    g: SimpleGraph, deadline: float | None, node_limit: int | None
) -> tuple[int, list[tuple[int, ...]], int, bool, int]:
    """(pn, paths, nodes, timed_out, lower_bound) for a graph with edges.

    Descends from the greedy decomposition: each round asks for one path
    fewer than the best so far.  Only the last round has to prove that no
    smaller decomposition exists, and a timeout still leaves the best
    decomposition found.
    """
    lb = pn_lower_bound(g)
    best = greedy_decomposition(g)
    nodes = 0
    while len(best) > lb:
        k = len(best) - 1
        try:
            found, used = _search_with_restarts(g, None, 0, 2 * k, deadline, node_limit)
        except SearchTimeout as exc:
            return len(best), best, nodes + exc.nodes, True, lb
        nodes += used
        if found is None:
            return len(best), best, nodes, False, len(best)
        best = _orient(found)
    return len(best), best, nodes, False, len(best)


def pn_exact(
    g: SimpleGraph,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
    node_limit: int | None = None,
) -> SolveResult:
    """Minimum path decomposition, solved component by component."""
    deadline = _deadline(timeout_ms)
    paths: list[tuple[int, ...]] = []
    nodes = 0
    timed_out = False
    pn = lb = 0
    for comp in components(g):
        if len(comp) < 2:
            continue
        sub, back = g.induced_subgraph(comp)
        if timed_out:
            c_paths = greedy_decomposition(sub)
            c_pn, c_lb = len(c_paths), pn_lower_bound(sub)
        else:
            c_pn, c_paths, c_nodes, c_to, c_lb = _solve_connected(sub, deadline, node_limit)
            nodes += c_nodes
            timed_out = timed_out or c_to
        pn += c_pn
        lb += c_lb
        paths += [tuple(back[v] for v in p) for p in c_paths]
    witness = emit(PathDecomposition(g, tuple(_orient([list(p) for p in paths]))))
    return SolveResult(pn, witness, nodes, timed_out, lb)


def constrained_decompose(
    g: SimpleGraph,
    c: EndpointConstraint,
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS,
    node_limit: int | None = None,
) -> PathDecomposition | None:
    """Decomposition with exactly ``c.total`` paths meeting every target.

    ``None`` is definitive: no such decomposition exists.  Raises
    :class:`SearchTimeout` if the search does not finish in time.
    """
    targets: list[int | None] = [None] * g.n
    for v, t in c.targets.items():
        if not 0 <= v < g.n:
            raise KeyError(f"unknown vertex {v}")
        targets[v] = t
    if c.total < 0:
        return None
    if g.m == 0:
        ok = c.total == 0 and all(t in (None, 0) for t in targets)
        return emit(PathDecomposition(g, ())) if ok else None
    found, _ = _search_with_restarts(g, targets, 2 * c.total, 2 * c.total, _deadline(timeout_ms), node_limit)
    if found is None:
        return None
    return emit(PathDecomposition(g, tuple(_orient(found))))
