from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings

from pathdecomp.family import (
    FamilyGWitness,
    check_family_g,
    complete_to_family_g,
    in_family_g,
    verify_family_g_witness,
)
from pathdecomp.generators import figure1_family
from pathdecomp.graph import (
    SimpleGraph,
    blocks,
    bowtie,
    complete_graph,
    components,
    cycle_graph,
    even_subgraph,
    is_connected,
    is_odd_semi_clique,
    path_graph,
    star_graph,
)
from strategies import graphs


def to_nx(g: SimpleGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


# -- SimpleGraph -------------------------------------------------------------


def test_edges_normalized_and_deduplicated():
    g = SimpleGraph(3, [(1, 0), (0, 1), (2, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.degrees() == [1, 2, 1]


def test_rejects_loops_and_out_of_range():
    with pytest.raises(ValueError):
        SimpleGraph(2, [(1, 1)])
    with pytest.raises(ValueError):
        SimpleGraph(2, [(0, 2)])
    with pytest.raises(ValueError):
        SimpleGraph(-1)


@given(graphs())
def test_handshake(g):
    assert sum(g.degrees()) == 2 * g.m
    assert len(g.even_vertices()) + len(g.odd_vertices()) == g.n


# -- even subgraph -----------------------------------------------------------


def test_even_subgraph_of_c4_is_c4():
    rep = even_subgraph(cycle_graph(4))
    assert rep.even_vertices == (0, 1, 2, 3)
    assert rep.ev_graph == cycle_graph(4)
    assert rep.max_e_degree == 2


def test_even_subgraph_of_claw_is_empty():
    rep = even_subgraph(star_graph(3))
    assert rep.even_vertices == ()
    assert rep.ev_graph.n == 0


def test_even_subgraph_of_k5_minus_edge_is_triangle():
    g = complete_graph(5).remove_edges([(0, 1)])
    rep = even_subgraph(g)
    assert rep.even_vertices == (2, 3, 4)
    assert rep.ev_graph == complete_graph(3)


@given(graphs())
def test_even_subgraph_matches_definition(g):
    rep = even_subgraph(g)
    assert set(rep.even_vertices) == {v for v in range(g.n) if g.degree(v) % 2 == 0}
    want = {e for e in g.edges if e[0] in rep.even_vertices and e[1] in rep.even_vertices}
    assert set(rep.host_edges()) == want


# -- blocks and components ---------------------------------------------------


def test_blocks_of_c5():
    bd = blocks(cycle_graph(5))
    assert len(bd.blocks) == 1 and not bd.cut_vertices and bd.leaf_block_indices == [0]


def test_blocks_of_p4():
    bd = blocks(path_graph(4))
    assert len(bd.blocks) == 3
    assert bd.cut_vertices == {1, 2}
    assert len(bd.leaf_block_indices) == 2


def test_blocks_of_bowtie():
    bd = blocks(bowtie())
    assert len(bd.blocks) == 2
    assert len(bd.cut_vertices) == 1
    assert len(bd.leaf_block_indices) == 2


def test_components_examples():
    assert len(components(SimpleGraph(4, [(0, 1), (2, 3)]))) == 2
    assert len(components(cycle_graph(5))) == 1
    assert sorted(components(SimpleGraph(3))) == [[0], [1], [2]]


@given(graphs())
@settings(max_examples=200)
def test_blocks_match_networkx(g):
    bd = blocks(g)
    h = to_nx(g)
    assert bd.cut_vertices == set(nx.articulation_points(h))
    # every edge lies in exactly one block
    for e in g.edges:
        assert sum(1 for es in bd.block_edges if e in es) == 1
    want = {frozenset(c) for c in nx.biconnected_components(h)}
    assert {b for b in bd.blocks if len(b) > 1} == want
    for i in bd.leaf_block_indices:
        assert len(bd.blocks[i] & bd.cut_vertices) <= 1


@given(graphs(min_n=1, connected=True))
def test_connected_graph_with_cut_vertex_has_two_leaf_blocks(g):
    bd = blocks(g)
    if bd.cut_vertices:
        assert len(bd.leaf_block_indices) >= 2


@given(graphs())
def test_components_match_networkx(g):
    assert sorted(map(sorted, components(g))) == sorted(map(sorted, nx.connected_components(to_nx(g))))
    if g.n:
        assert is_connected(g) == nx.is_connected(to_nx(g))


# -- odd semi-cliques --------------------------------------------------------


def test_odd_semi_clique_examples():
    assert is_odd_semi_clique(complete_graph(3))
    assert is_odd_semi_clique(complete_graph(5))
    assert is_odd_semi_clique(complete_graph(5).remove_edges([(0, 1)]))
    assert not is_odd_semi_clique(path_graph(3))


@given(graphs(min_n=1))
def test_odd_semi_clique_has_odd_order(g):
    if is_odd_semi_clique(g):
        assert g.n % 2 == 1


# -- family G ----------------------------------------------------------------


def test_family_g_examples():
    assert in_family_g(complete_graph(4))
    bt = check_family_g(bowtie())
    assert bt.block_degree_ok and not bt.component_ok
    chain = figure1_family("chain", 4)
    assert in_family_g(chain.witness.supergraph)


def test_witness_verification_examples():
    tri = complete_graph(3)
    assert verify_family_g_witness(tri, FamilyGWitness.identity(tri))
    chain = figure1_family("chain", 4)
    assert verify_family_g_witness(chain.pattern, chain.witness)
    res = verify_family_g_witness(bowtie(), FamilyGWitness.identity(bowtie()))
    assert not res and "supergraph not in family G" in res.failures


def test_witness_verification_names_the_failure():
    tri = complete_graph(3)
    bad = FamilyGWitness(tri, (0, 0, 1))
    assert "not injective" in verify_family_g_witness(tri, bad).failures[0]
    missing = FamilyGWitness(path_graph(3), (0, 1, 2))
    assert "no image" in verify_family_g_witness(tri, missing).failures[0]


def test_completion_of_graph_already_in_family():
    res = complete_to_family_g(cycle_graph(5))
    assert res.found and res.added_edges == ()


def test_completion_of_necklace_restores_dotted_edges():
    inst = figure1_family("necklace", 4)
    res = complete_to_family_g(inst.pattern, 0, 3)
    assert res.found
    assert verify_family_g_witness(inst.pattern, res.witness)
    assert len(res.added_edges) <= len(inst.dotted)


def test_completion_definite_no_for_degree_four_block():
    # K_{1,4} plus a 4-cycle on the leaves: one block, centre of degree 4
    g2 = SimpleGraph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)])
    assert complete_to_family_g(g2).status == "definite-no"


def _tiny_candidates(h: SimpleGraph):
    n = h.n
    for extra_v in (0, 1):
        m = n + extra_v
        pairs = [(u, v) for u in range(m) for v in range(u + 1, m) if not (v < n and h.has_edge(u, v))]
        yield h.add_edges([], n=m)
        for i, e in enumerate(pairs):
            yield h.add_edges([e], n=m)
            for f in pairs[i + 1:]:
                yield h.add_edges([e, f], n=m)


@given(graphs(min_n=1, max_n=6, connected=True))
@settings(max_examples=60, deadline=None)
def test_definite_no_is_never_refuted_at_tiny_scale(h):
    res = complete_to_family_g(h, 1, 2)
    if res.status == "definite-no":
        assert not any(in_family_g(c) for c in _tiny_candidates(h))
    if res.found:
        assert verify_family_g_witness(h, res.witness)


def test_bowtie_obstruction():
    assert complete_to_family_g(bowtie()).status == "definite-no"
    g = bowtie().add_edges([(0, 5)], n=6)
    assert not in_family_g(g)
    assert in_family_g(bowtie().remove_edges([(0, 1)]))
