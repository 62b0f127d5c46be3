import itertools

import pytest

from strataspin.graphs import StableGraph
from strataspin.levels import EnhancedLevelGraph, enumerate_two_level_graphs, stratum
from strataspin.spin import (
    arf_census,
    arf_parity,
    base_parity,
    build_adapted_spanning_tree,
    classify_spin,
    default_turning,
    delta_adapted_basis,
    genus0_paired_pole_census,
    horizontal_join_spin_sign,
    planarity_audit,
    prong_group_order,
    rotate_prong_matching,
    zero_prong_matching,
)


def vertical(genera, legs, edges, kappas, levels):
    return EnhancedLevelGraph(StableGraph(genera, legs, edges), levels, kappas)


def test_tree_of_a_tree():
    g = StableGraph((1, 0), ((1,), (2, 3)), ((0, 1),))
    t = build_adapted_spanning_tree(g)
    assert t.tree == frozenset({0})
    assert t.cycles == {}


def test_tree_of_banana():
    g = StableGraph((0, 0), ((1,), (2,)), ((0, 1), (0, 1)))
    t = build_adapted_spanning_tree(g)
    assert len(t.cycles) == 1
    assert planarity_audit(g, t)


def test_k5_example_tree():
    # the six-vertex, fifteen-edge configuration whose naive star tree
    # produces a K5 segment pattern at the center; the iteration must fix it
    # vertices: 0=d, 1=a, 2=b, 3=c, 4=v*, 5=e
    edges = [
        (0, 1), (0, 2), (0, 3), (0, 4), (0, 5),  # the star tree T0
        (1, 2), (2, 4), (4, 5), (5, 3), (3, 1),
        (2, 5), (2, 3), (1, 4), (1, 5), (4, 3),
    ]
    genera = (2, 2, 2, 2, 2, 2)  # genera irrelevant for the tree
    legs = ((1,), (2,), (3,), (4,), (5,), (6,))
    g = StableGraph(genera, legs, tuple(edges))
    t = build_adapted_spanning_tree(g)
    assert len(t.tree) == 5
    assert len(t.cycles) == 10
    assert planarity_audit(g, t)
    # every fundamental cycle crosses each seam at most once
    for q, cyc in t.cycles.items():
        assert len(set(cyc)) == len(cyc)


def test_basis_even_edge_preference():
    # banana with kappas (2, 1): the even edge must be the crossed one
    elg = vertical((0, 0), ((1, 2, 3), (4,)), ((0, 1), (0, 1)), (2, 1), (0, -1))
    basis = delta_adapted_basis(elg)
    crossing = [q for q, cyc in basis.graph_cycles.items() if 0 in cyc]
    assert crossing == [0]


def test_basis_single_vertex():
    elg = vertical((2,), ((1,),), (), (), (0,))
    basis = delta_adapted_basis(elg)
    assert basis.graph_cycles == {} and basis.vertex_pairs == 2


def test_flat_torus_parity():
    # one non-crossing pair with both turning numbers zero: parity odd
    elg = vertical((1,), ((1,),), (), (), (0,))
    basis = delta_adapted_basis(elg)
    assignment = default_turning(elg, (1,))
    assert arf_parity(basis, assignment, zero_prong_matching(elg)) == 1


def test_rotation_identities():
    elg = vertical((0, 0), ((1, 2, 3), (4,)), ((0, 1), (0, 1)), (3, 1), (0, -1))
    pm = zero_prong_matching(elg)
    assert rotate_prong_matching(elg, pm, 0, 0) == pm
    assert rotate_prong_matching(elg, pm, 0, 3) == pm  # full cycle
    basis = delta_adapted_basis(elg)
    assignment = default_turning(elg, (0, 0))
    # rotating by l at a seam shifts ind of each crossing cycle by l; the
    # Arf shift only registers when the paired vanishing cycle is even
    for l in range(3):
        rotated = rotate_prong_matching(elg, pm, 0, l)
        shift = sum(
            l * (basis.vanishing[q] + 1)
            for q, cyc in basis.graph_cycles.items()
            if 0 in cyc
        )
        expected = (arf_parity(basis, assignment, pm) + shift) % 2
        assert arf_parity(basis, assignment, rotated) == expected


def test_rotation_flips_parity_at_even_edge():
    elg = vertical((0, 0), ((1, 2, 3), (4,)), ((0, 1), (0, 1)), (2, 2), (0, -1))
    basis = delta_adapted_basis(elg)
    assignment = default_turning(elg, (0, 0))
    pm = zero_prong_matching(elg)
    # the even edge excluded from the tree is crossed once: a unit rotation
    # there flips the parity
    crossed_even = [q for q, cyc in basis.graph_cycles.items() if basis.vanishing[q] == 0]
    (q,) = crossed_even
    flipped = rotate_prong_matching(elg, pm, q, 1)
    assert arf_parity(basis, assignment, flipped) == 1 - arf_parity(basis, assignment, pm)


def test_classify_even_edge():
    elg = vertical((0, 0), ((1, 2, 3), (4,)), ((0, 1), (0, 1)), (2, 2), (0, -1))
    assert classify_spin(elg, (0, 0)).kind == "half"


def test_classify_all_odd():
    elg = vertical((0, 1), ((1, 2, 3), (4,)), ((0, 1),), (3,), (0, -1))
    out = classify_spin(elg, (0, 1))
    assert out.kind == "constant" and out.parity == 1


@pytest.mark.parametrize("orders,g", [((4, -2, -2), 1), ((2,), 2), ((0, 0), 1)])
def test_census_matches_classification(orders, g):
    strat = stratum(orders, g=g)
    for elg in enumerate_two_level_graphs(strat):
        if prong_group_order(elg) > 10**4:
            continue
        nv = elg.base.num_vertices
        for parities in itertools.product((0, 1), repeat=nv):
            even, odd = arf_census(elg, parities)
            cls = classify_spin(elg, parities)
            if cls.kind == "half":
                assert even == odd == prong_group_order(elg) // 2
            else:
                total = prong_group_order(elg)
                if cls.parity == 0:
                    assert (even, odd) == (total, 0)
                else:
                    assert (even, odd) == (0, total)


def test_census_invariant_under_base_turning():
    # the half/half conclusion cannot depend on the free base turning data
    strat = stratum((4, -2, -2), g=1)
    for elg in enumerate_two_level_graphs(strat):
        if all(k % 2 == 1 for k in elg.kappa):
            continue
        basis = delta_adapted_basis(elg)
        for bits in itertools.product((0, 1), repeat=len(basis.graph_cycles)):
            base = dict(zip(basis.graph_cycles, bits))
            even, odd = arf_census(elg, (0,) * elg.base.num_vertices, base)
            assert even == odd


def test_base_parity():
    assert base_parity((0, -1, -1)) == "odd"
    assert base_parity((2, -2, -2)) == "even"
    assert base_parity((4, -2, -2, -2)) == "even"
    assert base_parity((2, -2)) is None  # wrong degree for genus 0
    assert base_parity((1, -1, -1, -1)) is None


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_paired_pole_census(k):
    even, odd = genus0_paired_pole_census(k)
    assert even - odd == 1
    assert even + odd == 2 * k - 1


def test_horizontal_sign():
    assert horizontal_join_spin_sign() == -1
