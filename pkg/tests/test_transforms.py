from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathdecomp.decomposition import from_paths, is_valid, parity_ok
from pathdecomp.graph import SimpleGraph, bowtie, cycle_graph, path_graph
from pathdecomp.solver import pn_exact
from pathdecomp.transforms import (
    OUTWARDS,
    TOWARDS,
    ContractBug,
    TransformationCertificate,
    addible_half_fan4,
    addible_single_fan2,
    apply_addible,
    compose,
    extra_edges_bound,
    fan2_precondition,
    is_induced_matching,
    lift_induced_matching,
    recognize_fan_subgraph,
    verify_transformation,
)

A, B, C = 0, 1, 2


def _cert(base, added, pivot, direction, before, after):
    big = base.add_edges(added)
    return TransformationCertificate(
        base, tuple(added), pivot, direction, from_paths(base, before), from_paths(big, after)
    )


# -- verification ------------------------------------------------------------


def test_single_path_extension_verifies():
    base = SimpleGraph(3, [(A, B)])
    c = _cert(base, [(B, C)], C, TOWARDS, [[A, B]], [[A, B, C]])
    assert verify_transformation(c) == []


def test_extra_path_fails_clause_one():
    base = SimpleGraph(3, [(A, B)])
    c = _cert(base, [(B, C)], C, TOWARDS, [[A, B]], [[A, B], [B, C]])
    probs = verify_transformation(c)
    assert probs and probs[0].startswith("clause (i)")


def test_triangle_closure_cannot_keep_one_path():
    c = _cert(path_graph(3), [(A, C)], A, TOWARDS, [[A, B, C]], [[A, B, C], [C, A]])
    assert any(p.startswith("clause (i)") for p in verify_transformation(c))


def test_wrong_endpoint_shift_names_the_vertex():
    base = SimpleGraph(3, [(A, B)])
    c = _cert(base, [(B, C)], C, OUTWARDS, [[A, B]], [[A, B, C]])
    probs = verify_transformation(c)
    assert any("clause (ii): D(2)" in p for p in probs)


def test_unrelated_vertex_change_is_clause_three():
    base = SimpleGraph(5, [(0, 1), (1, 2), (3, 4)])
    before = [[0, 1, 2], [3, 4]]
    # adding 2-3 towards 3 would keep the count only by merging paths
    c = _cert(base, [(2, 3)], 3, TOWARDS, before, [[0, 1, 2, 3, 4]])
    probs = verify_transformation(c)
    assert any(p.startswith("clause (i)") for p in probs)


def test_invalid_after_is_reported():
    base = SimpleGraph(3, [(A, B)])
    c = _cert(base, [(B, C)], C, TOWARDS, [[A, B]], [[A, B]])
    assert any(p.startswith("after:") for p in verify_transformation(c))


def test_certificate_json_round_trip():
    base = SimpleGraph(3, [(A, B)])
    c = _cert(base, [(B, C)], C, TOWARDS, [[A, B]], [[A, B, C]])
    again = TransformationCertificate.from_json(c.dumps())
    assert again.to_json() == c.to_json()
    assert verify_transformation(again) == []


# -- apply_addible -----------------------------------------------------------


def test_apply_addible_closing_a_triangle_is_not_found():
    d = from_paths(path_graph(3), [[A, B, C]])
    assert apply_addible(path_graph(3), d, [(A, C)], A) is None


def test_apply_addible_empty_set_is_identity():
    d = from_paths(path_graph(3), [[A, B, C]])
    c = apply_addible(path_graph(3), d, [], A)
    assert c.after == c.before and verify_transformation(c) == []


def test_apply_addible_rejects_bad_input():
    g = path_graph(3)
    d = from_paths(g, [[A, B, C]])
    with pytest.raises(ValueError):
        apply_addible(g, d, [(A, B)], A)  # already present
    with pytest.raises(ValueError):
        apply_addible(g.add_edges([], n=4), from_paths(g.add_edges([], n=4), [[0, 1, 2]]), [(2, 3)], 0)
    with pytest.raises(ValueError):
        apply_addible(g, d, [(A, C)], A, direction="sideways")


# -- fan2 --------------------------------------------------------------------


def test_fan2_extends_into_isolated_vertex():
    g = path_graph(3)
    d = from_paths(g.remove_edges([(B, C)]), [[A, B]])
    c = addible_single_fan2(g, (C, B), d)
    assert c.after.paths == ((0, 1, 2),)
    assert verify_transformation(c) == []


def test_fan2_not_applicable_on_triangle():
    g = cycle_graph(3)
    d = from_paths(g.remove_edges([(A, C)]), [[A, B, C]])
    assert not fan2_precondition(g, (A, C), d)
    assert addible_single_fan2(g, (A, C), d) is None


def test_fan2_star_example():
    # path a-c-b, remove c-b, add it back towards b
    a, c_, b = 0, 1, 2
    g = SimpleGraph(3, [(a, c_), (c_, b)])
    d = from_paths(g.remove_edges([(c_, b)]), [[a, c_]])
    cert = addible_single_fan2(g, (b, c_), d)
    assert cert.after.paths == ((0, 1, 2),)


@st.composite
def fan2_instances(draw):
    n = draw(st.integers(3, 7))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if draw(st.booleans())]
    if not edges:
        edges = [(0, 1)]
    g = SimpleGraph(n, edges)
    u, v = draw(st.sampled_from(g.edges))
    if draw(st.booleans()):
        u, v = v, u
    return g, (u, v)


@given(fan2_instances())
@settings(max_examples=120, deadline=None)
def test_fan2_never_fails_when_precondition_holds(inst):
    g, uv = inst
    d = pn_exact(g.remove_edges([uv]), timeout_ms=None).witness
    cert = addible_single_fan2(g, uv, d)
    if fan2_precondition(g, uv, d):
        assert cert is not None and verify_transformation(cert) == []
    else:
        assert cert is None


# -- fan4 --------------------------------------------------------------------


def _spider():
    g = SimpleGraph(7, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)])
    h = [(0, 1), (0, 2), (0, 3)]
    d = from_paths(g.remove_edges(h), [[4, 1], [5, 2], [6, 3]])
    return g, h, d


def test_fan4_spider_adds_every_edge():
    g, h, d = _spider()
    a, cert = addible_half_fan4(g, 0, h, (0, 1), d)
    assert (0, 1) in a and len(a) >= 2
    assert a == ((0, 1), (0, 2), (0, 3))
    assert cert.after.paths == ((0, 1, 4), (0, 2, 5), (0, 3, 6))
    assert verify_transformation(cert) == []


def test_fan4_single_edge_reduces_to_one_addition():
    g, _, _ = _spider()
    h = [(0, 1)]
    d = pn_exact(g.remove_edges(h), timeout_ms=None).witness
    a, cert = addible_half_fan4(g, 0, h, (0, 1), d)
    assert a == ((0, 1),) and verify_transformation(cert) == []


def test_fan4_path_golden():
    # y1-x1-u-x2-y2 with both centre edges removed: both come back at once
    y1, x1, u, x2, y2 = range(5)
    g = path_graph(5)
    h = [(x1, u), (u, x2)]
    d = from_paths(g.remove_edges(h), [[y1, x1], [y2, x2]])
    a, cert = addible_half_fan4(g, u, h, (x1, u), d)
    assert a == ((1, 2), (2, 3))
    assert cert.to_json() == {
        "base_graph": "D_C",
        "added_edges": [[1, 2], [2, 3]],
        "pivot": 2,
        "direction": "towards",
        "before": [[0, 1], [3, 4]],
        "after": [[0, 1, 2], [2, 3, 4]],
    }


def test_fan4_requires_x_in_h():
    g, h, d = _spider()
    with pytest.raises(ValueError):
        addible_half_fan4(g, 0, h, (1, 4), d)


def test_fan4_raises_contract_bug_when_hypothesis_holds_but_nothing_fits(monkeypatch):
    import pathdecomp.transforms as tr

    g, h, d = _spider()
    monkeypatch.setattr(tr, "apply_addible", lambda *a, **k: None)
    with pytest.raises(ContractBug):
        tr.addible_half_fan4(g, 0, h, (0, 1), d)


# -- induced matchings -------------------------------------------------------


def test_induced_matching_detection():
    g = path_graph(4)
    assert is_induced_matching(g, [(0, 1)])
    assert not is_induced_matching(g, [(0, 1), (2, 3)])  # 1-2 joins them
    assert not is_induced_matching(g, [(0, 1), (1, 2)])
    assert is_induced_matching(path_graph(5), [(0, 1), (3, 4)])


def test_lift_empty_matching_is_identity():
    g = path_graph(3)
    d = from_paths(g, [[0, 1, 2]])
    assert lift_induced_matching(g, [], d) is d


def test_lift_single_pair():
    g = path_graph(3)  # u-v-w
    d = from_paths(g.remove_edges([(0, 1)]), [[1, 2]])
    out = lift_induced_matching(g, [(0, 1)], d)
    assert out.paths == ((0, 1, 2),)


def test_lift_two_disjoint_pairs():
    g = path_graph(3).disjoint_union(path_graph(3))
    pairs = [(0, 1), (3, 4)]
    d = from_paths(g.remove_edges(pairs), [[1, 2], [4, 5]])
    out = lift_induced_matching(g, pairs, d)
    assert is_valid(g, out) and len(out) == 2
    for u, v in pairs:
        assert out.D(u) == d.D(u) + 1
        assert out.D(v) == d.D(v) - 1
    assert out.D(2) == d.D(2) and out.D(5) == d.D(5)


def test_lift_rejects_broken_hypotheses():
    g = path_graph(4)
    with pytest.raises(ValueError, match="induced"):
        lift_induced_matching(g, [(0, 1), (2, 3)], from_paths(g.remove_edges([(0, 1), (2, 3)]), [[1, 2]]))
    g = path_graph(3)
    d = from_paths(g.remove_edges([(1, 2)]), [[0, 1]])
    with pytest.raises(ValueError, match="ends no path"):
        lift_induced_matching(g, [(1, 2)], d)
    # in 1-2-3 the single path passes through 2, a neighbour of 1
    g = path_graph(4)
    d = from_paths(g.remove_edges([(0, 1)]), [[1, 2, 3]])
    with pytest.raises(ValueError, match="passing"):
        lift_induced_matching(g, [(1, 0)], d)


def test_lift_random_instances_meet_every_clause():
    from pathdecomp.harness import check_contract, contract_instance, contract_seeds

    seeds = contract_seeds("matching", 40)
    assert len(seeds) == 40
    for s in seeds:
        assert check_contract(contract_instance("matching", s)) == []


# -- extra edges and composition -----------------------------------------------


def test_extra_edges_examples():
    assert extra_edges_bound(4, 2, 1, 2)
    assert extra_edges_bound(3, 2, 0, 2)
    assert not extra_edges_bound(4, 2, 2, 0)
    with pytest.raises(ValueError):
        extra_edges_bound(5, 2, 0, 9)


@given(st.integers(0, 40), st.data())
def test_extra_edges_is_the_plain_inequality(b, data):
    a1 = data.draw(st.integers((b + 1) // 2, max(b, (b + 1) // 2)))
    a2 = data.draw(st.integers(0, max(0, b - a1)))
    d2 = data.draw(st.integers(0, 50))
    assert extra_edges_bound(b, a1, a2, d2) == (d2 > b - a1 - a2)


def _chain(seed: int):
    """Two certificates at one pivot, the second starting where the first ends.

    Tries every pivot, edge pair and direction of a random graph and keeps
    the first chain that exists.
    """
    rng = random.Random(seed)
    n = rng.randint(4, 7)
    g = SimpleGraph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.55])
    for u in rng.sample(range(n), n):
        inc = g.incident_edges(u)
        for e1 in inc:
            for e2 in inc:
                if e1 == e2:
                    continue
                base = g.remove_edges([e1, e2])
                d0 = pn_exact(base, timeout_ms=None).witness
                for direction in (TOWARDS, OUTWARDS):
                    c1 = apply_addible(base, d0, [e1], u, direction)
                    if c1 is None:
                        continue
                    c2 = apply_addible(base.add_edges([e1]), c1.after, [e2], u, direction)
                    if c2 is not None:
                        return c1, c2
    return None


def test_composed_certificates_verify():
    built = 0
    for seed in range(120):
        pair = _chain(seed)
        if pair is None:
            continue
        c1, c2 = pair
        assert verify_transformation(c1) == [] and verify_transformation(c2) == []
        glued = compose(c1, c2)
        assert verify_transformation(glued) == []
        assert parity_ok(glued.enlarged_graph, glued.after)
        built += 1
    assert built >= 40


def test_compose_rejects_mismatched_chain():
    base = SimpleGraph(3, [(A, B)])
    c = _cert(base, [(B, C)], C, TOWARDS, [[A, B]], [[A, B, C]])
    with pytest.raises(ValueError):
        compose(c, c)


# -- Fan subgraphs -------------------------------------------------------------


def test_single_even_edge_of_c4_is_fan():
    rep = recognize_fan_subgraph(cycle_graph(4), [(0, 1)])
    assert rep.is_fan and rep.star_center is None and rep.single_edge_components == ((0, 1),)


def test_full_vertex_configuration_is_fan():
    # triangle x,y,z; u sees x, y and an odd v with no even neighbour;
    # w1 and w2 keep the triangle even and everything else odd
    x, y, z, u, v, w1, w2 = range(7)
    g = SimpleGraph(7, [(x, y), (x, z), (y, z), (u, x), (u, y), (u, v),
                        (w1, x), (w1, y), (w1, z), (w2, z)])
    rep = recognize_fan_subgraph(g, [(u, v), (u, x), (y, z)])
    assert rep.is_fan
    assert rep.clause_results == (True, True, True)
    assert rep.star_center == u and rep.star_leaves == (v, x)
    assert rep.single_edge_components == ((y, z),)


def test_star_with_even_neighbour_left_fails_clause_two():
    rep = recognize_fan_subgraph(bowtie(), [(0, 1), (0, 3)])
    assert not rep.is_fan
    assert rep.clause_results == (True, False, True)


def test_two_odd_leaves_fail_clause_one():
    g = SimpleGraph(3, [(0, 1), (0, 2)])
    rep = recognize_fan_subgraph(g, [(0, 1), (0, 2)])
    assert not rep.is_fan and not rep.clause_results[0]


def test_odd_leaf_needs_odd_centre():
    # centre 0 even, leaf 1 odd
    g = SimpleGraph(4, [(0, 1), (0, 2), (2, 3), (3, 0)])
    rep = recognize_fan_subgraph(g, [(0, 1), (0, 2)])
    assert not rep.clause_results[2]


def test_two_stars_are_not_fan():
    g = path_graph(3).disjoint_union(path_graph(3))
    rep = recognize_fan_subgraph(g, [(0, 1), (1, 2), (3, 4), (4, 5)])
    assert not rep.is_fan


def test_recognizer_rejects_empty_and_foreign_edges():
    with pytest.raises(ValueError):
        recognize_fan_subgraph(cycle_graph(4), [])
    with pytest.raises(ValueError):
        recognize_fan_subgraph(cycle_graph(4), [(0, 2)])
