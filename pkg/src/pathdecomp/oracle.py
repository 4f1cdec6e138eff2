"""Brute-force path number, kept independent of the branch-and-bound solver.

Edges are assigned path labels in index order.  Labels follow restricted
growth (edge ``i`` may open label ``j`` only if labels ``0..j-1`` are in
use), which removes label permutations and nothing else.  A label class is
rejected as soon as it stops being a linear forest, and at the end each class
must be a single path.
"""

from __future__ import annotations

from .graph import SimpleGraph

BRUTE_MAX_EDGES = 15


def _fits(n: int, edges: list[tuple[int, int]], k: int) -> bool:
    m = len(edges)
    deg = [[0] * n for _ in range(k)]
    # other end of the label-path that v ends; v itself when isolated
    end = [list(range(n)) for _ in range(k)]
    nedges = [0] * k
    nverts = [0] * k

    def place(i: int, used: int) -> bool:
        if i == m:
            return all(nedges[j] == nverts[j] - 1 for j in range(used))
        a, b = edges[i]
        for lab in range(min(used + 1, k)):
            da, db = deg[lab][a], deg[lab][b]
            if da >= 2 or db >= 2:
                continue
            en = end[lab]
            if en[a] == b:
                continue  # would close a cycle
            ea, eb = en[a], en[b]
            saved = (en[a], en[b], en[ea], en[eb])
            en[ea] = eb
            en[eb] = ea
            deg[lab][a] = da + 1
            deg[lab][b] = db + 1
            nedges[lab] += 1
            nverts[lab] += (da == 0) + (db == 0)
            if place(i + 1, max(used, lab + 1)):
                return True
            nverts[lab] -= (da == 0) + (db == 0)
            nedges[lab] -= 1
            deg[lab][a] = da
            deg[lab][b] = db
            en[eb], en[ea], en[b], en[a] = saved[3], saved[2], saved[1], saved[0]
        return False

    return place(0, 0)


def brute_force_pn(g: SimpleGraph, max_edges: int = BRUTE_MAX_EDGES) -> int:
    if g.m > max_edges:
        raise ValueError(f"brute force limited to {max_edges} edges, got {g.m}")
    edges = list(g.edges)
    for k in range(0, g.m + 1):
        if k == 0:
            if not edges:
                return 0
            continue
        if _fits(g.n, edges, k):
            return k
    raise AssertionError("every graph decomposes into single edges")
