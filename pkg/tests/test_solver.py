from __future__ import annotations

import pytest
from hypothesis import given, settings

from pathdecomp import solver
from pathdecomp.decomposition import is_valid, parity_ok
from pathdecomp.generators import clique_minus_matching, enumerate_connected
from pathdecomp.graph import SimpleGraph, complete_graph, path_graph, star_graph
from pathdecomp.oracle import BRUTE_MAX_EDGES, brute_force_pn
from pathdecomp.solver import (
    EndpointConstraint,
    SearchTimeout,
    constrained_decompose,
    pn_exact,
    pn_lower_bound,
)
from strategies import graphs

K5_MINUS_E = complete_graph(5).remove_edges([(0, 1)])


def test_lower_bound_examples():
    assert pn_lower_bound(complete_graph(5)) == 3
    assert pn_lower_bound(star_graph(3)) == 2
    assert pn_lower_bound(path_graph(5)) == 1
    assert pn_lower_bound(SimpleGraph(4)) == 0


@pytest.mark.parametrize(
    "g, pn",
    [(complete_graph(3), 2), (path_graph(5), 1), (K5_MINUS_E, 3), (star_graph(3), 2),
     (SimpleGraph(3), 0), (complete_graph(8), 4), (complete_graph(10), 5)],
)
def test_pn_examples(g, pn):
    res = pn_exact(g, timeout_ms=None)
    assert res.pn == pn and not res.timed_out
    assert len(res.witness) == pn and is_valid(g, res.witness)
    assert res.best_lower_bound == pn


def test_oracle_examples():
    assert brute_force_pn(path_graph(2)) == 1
    assert brute_force_pn(star_graph(3)) == 2
    assert brute_force_pn(complete_graph(3)) == 2
    with pytest.raises(ValueError):
        brute_force_pn(complete_graph(7))
    assert BRUTE_MAX_EDGES >= 12


def test_oracle_equality_on_all_graphs_up_to_five_vertices():
    for n in range(1, 6):
        for g in enumerate_connected(n):
            assert pn_exact(g, timeout_ms=None).pn == brute_force_pn(g), g


@given(graphs(max_n=7))
@settings(max_examples=120, deadline=None)
def test_oracle_equality_random(g):
    if g.m <= 11:
        assert pn_exact(g, timeout_ms=None).pn == brute_force_pn(g)


def test_oracle_equality_with_forced_restarts(monkeypatch):
    # tiny allowances make almost every search go through shuffled restarts
    monkeypatch.setattr(solver, "RESTART_BASE_NODES", 3)
    for g in enumerate_connected(5):
        assert pn_exact(g, timeout_ms=None).pn == brute_force_pn(g)
    assert pn_exact(complete_graph(6), timeout_ms=None).pn == 3


@given(graphs(max_n=8))
@settings(max_examples=80, deadline=None)
def test_bounds_and_witness(g):
    res = pn_exact(g, timeout_ms=None)
    assert pn_lower_bound(g) <= res.pn
    assert is_valid(g, res.witness) and parity_ok(g, res.witness)


@given(graphs(max_n=5), graphs(max_n=5))
@settings(max_examples=60, deadline=None)
def test_additive_over_components(a, b):
    both = pn_exact(a.disjoint_union(b), timeout_ms=None).pn
    assert both == pn_exact(a, timeout_ms=None).pn + pn_exact(b, timeout_ms=None).pn


def test_witness_is_deterministic():
    g = clique_minus_matching(3)
    assert pn_exact(g).witness.paths == pn_exact(g).witness.paths


def test_node_limit_timeout_keeps_a_witness():
    g = complete_graph(11)
    res = pn_exact(g, timeout_ms=None, node_limit=50)
    assert res.timed_out
    assert is_valid(g, res.witness)
    assert res.best_lower_bound <= 6 <= res.pn


def test_constrained_examples():
    p3 = path_graph(3)
    d = constrained_decompose(p3, EndpointConstraint({0: 1, 2: 1, 1: 0}, 1))
    assert d.paths == ((0, 1, 2),)
    assert constrained_decompose(complete_graph(3), EndpointConstraint({}, 1)) is None
    paw = SimpleGraph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    d = constrained_decompose(paw, EndpointConstraint({3: 1}, 2))
    assert d is not None and len(d) == 2 and d.D(3) == 1 and is_valid(paw, d)


def test_constrained_meets_targets_or_proves_none():
    g = K5_MINUS_E
    for u in range(5):
        for t in range(4):
            d = constrained_decompose(g, EndpointConstraint({u: t}, 3))
            if d is not None:
                assert d.D(u) == t and len(d) == 3
            else:
                # each path ends at u at most twice, never beyond the degree
                assert t % 2 != g.degree(u) % 2 or t > g.degree(u) or t == 0


def test_constrained_timeout_is_distinct_from_none():
    with pytest.raises(SearchTimeout):
        constrained_decompose(complete_graph(11), EndpointConstraint({}, 5), node_limit=10)


def test_constrained_edgeless():
    g = SimpleGraph(2)
    assert constrained_decompose(g, EndpointConstraint({}, 0)).paths == ()
    assert constrained_decompose(g, EndpointConstraint({0: 1}, 0)) is None
