import pytest

from strataspin.graphs import (
    StableGraph,
    automorphism_order,
    canonical_key,
    enumerate_gamma_structures,
    enumerate_one_edge_graphs,
    enumerate_stable_graphs,
    graphs_isomorphic,
    one_edge_degenerations,
    to_json_dict,
    trivial_graph,
    validate_stable_graph,
)


def banana(legs1=(1,), legs2=(2,)):
    return StableGraph((0, 0), (legs1, legs2), ((0, 1), (0, 1)))


def test_validate_ok():
    g = StableGraph((1,), ((1, 2, 3),), ())
    assert validate_stable_graph(g, g=1, n=3) == []


def test_validate_unstable():
    g = StableGraph((0, 0), ((1, 2, 3), (4,)), ((0, 1),))
    assert any("unstable" in p for p in validate_stable_graph(g, g=0, n=4))


def test_validate_self_loop_genus():
    g = StableGraph((1,), ((1,),), ((0, 0),))
    assert validate_stable_graph(g, g=2, n=1) == []


def test_automorphism_banana():
    # two vertices joined by two edges, legs distinguish the vertices
    assert automorphism_order(banana()) == 2


def test_automorphism_one_edge_compact():
    g = StableGraph((1, 0), ((1,), (2, 3)), ((0, 1),))
    assert automorphism_order(g) == 1


def test_automorphism_self_loop():
    g = StableGraph((0,), ((1, 2, 3),), ((0, 0),))
    assert automorphism_order(g) == 2


def test_automorphism_two_loops():
    # two self-loops at one vertex: swap the loops (2) x flip each (2*2)
    g = StableGraph((0,), ((1,),), ((0, 0), (0, 0)))
    assert automorphism_order(g) == 8


def test_canonical_relabeling_invariance():
    g1 = banana((1,), (2,))
    g2 = StableGraph((0, 0), ((2,), (1,)), ((1, 0), (0, 1)))
    assert canonical_key(g1) == canonical_key(g2)
    assert graphs_isomorphic(g1, g2)


def test_canonical_distinguishes_legs():
    g1 = StableGraph((1, 0), ((1,), (2, 3)), ((0, 1),))
    g2 = StableGraph((1, 0), ((2,), (1, 3)), ((0, 1),))
    assert canonical_key(g1) != canonical_key(g2)


def test_enumerate_one_edge_1_3():
    out = enumerate_one_edge_graphs(1, 3)
    assert len(out) == 5
    loops = [g for g in out if g.num_vertices == 1]
    assert len(loops) == 1


def test_enumerate_one_edge_1_2():
    assert len(enumerate_one_edge_graphs(1, 2)) == 2


def test_enumerate_one_edge_0_4():
    out = enumerate_one_edge_graphs(0, 4)
    assert len(out) == 3
    assert all(g.num_vertices == 2 for g in out)


def test_enumerate_stable_0_3():
    assert len(enumerate_stable_graphs(0, 3, 5)) == 1


def test_enumerate_stable_1_1():
    out = enumerate_stable_graphs(1, 1, 1)
    assert len(out) == 2


def test_enumerate_stable_2_0():
    out = enumerate_stable_graphs(2, 0, 1)
    assert len(out) == 3


def test_total_genus_bookkeeping():
    for g in enumerate_stable_graphs(2, 0, 2):
        assert sum(g.genera) + g.h1() == 2


def test_degenerations_of_smooth_1_2():
    degs = one_edge_degenerations(trivial_graph(1, 2))
    # self-loop on genus 0, and the compact split (1,{})|(0,{1,2})
    assert len(degs) == 2


def test_gamma_structures_identity():
    g = StableGraph((1, 0), ((1,), (2, 3)), ((0, 1),))
    assert len(enumerate_gamma_structures(g, g)) == 1


def test_gamma_structures_count_graph_a():
    # Appendix-style graph: two vertices joined by two edges, one extra leg
    # on each; the self-loop graph on (1, 3) has four structures on it
    delta = StableGraph((0, 0), ((3,), (1, 2)), ((0, 1), (0, 1)))
    gamma0 = StableGraph((0,), ((1, 2, 3),), ((0, 0),))
    assert len(enumerate_gamma_structures(delta, gamma0)) == 4


def test_gamma_structures_loop_on_itself():
    gamma0 = StableGraph((0,), ((1, 2),), ((0, 0),))
    assert len(enumerate_gamma_structures(gamma0, gamma0)) == 2


def test_one_edge_graphs_subset_of_bounded_enumeration():
    one_edge = {canonical_key(g) for g in enumerate_one_edge_graphs(1, 3)}
    bounded = {canonical_key(g) for g in enumerate_stable_graphs(1, 3, 1)}
    assert one_edge <= bounded
    assert len(bounded) == len(one_edge) + 1  # plus the smooth graph


def test_json_shape():
    d = to_json_dict(banana())
    assert d["vertices"] == [0, 0]
    assert d["edges"][0] == [[0, 0], [1, 1]]
