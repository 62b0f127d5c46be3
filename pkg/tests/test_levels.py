from fractions import Fraction

import pytest

from strataspin.levels import (
    EnhancedLevelGraph,
    GeneralisedStratum,
    Signature,
    enhancement_from_orders,
    enumerate_horizontal_one_edge,
    enumerate_two_level_graphs,
    extract_horizontal_stratum,
    extract_level_stratum,
    prong_matching_class_count,
    simple_star_graphs,
    stratum,
)


def two_level_signature_audit(elg, strat):
    """Per-vertex order sums must equal k(2g(v) - 2)."""
    k = strat.k
    from strataspin.levels import marking_origin

    for v in range(elg.base.num_vertices):
        total = 0
        for m in elg.base.legs[v]:
            c, i = marking_origin(strat, m)
            total += strat.sigs[c].orders[i]
        for (e, s) in elg.base.half_edges_at(v):
            total += elg.node_order(e, s, k)
        assert total == k * (2 * elg.base.genera[v] - 2)


def test_enhancement_from_orders():
    assert enhancement_from_orders(2, -4) == 3
    assert enhancement_from_orders(-1, -1) == "horizontal"
    assert enhancement_from_orders(0, -2) == 1
    assert enhancement_from_orders(2, -2) is None


def test_appendix_a_enumeration():
    # mu = (4,-2,-2), g = 1: graphs (A)-(D) and (F)-(J), nine in all
    strat = stratum((4, -2, -2), g=1)
    graphs = enumerate_two_level_graphs(strat)
    assert len(graphs) == 9
    for elg in graphs:
        two_level_signature_audit(elg, strat)
    # compact type (one edge, two vertices): F, G, H, I plus the three-vertex J
    one_edge = [e for e in graphs if e.base.num_edges == 1]
    assert len(one_edge) == 4
    three_vertex = [e for e in graphs if e.base.num_vertices == 3]
    assert len(three_vertex) == 1  # (J)
    kappa_multisets = sorted(tuple(sorted(e.kappa)) for e in graphs)
    # (A),(B): kappas (1,1); (C): (1,3); (D): (2,2); (F),(G),(H): (3,);
    # (I): (1,); (J): (1,3)
    assert kappa_multisets == sorted(
        [(1, 1), (1, 1), (1, 3), (2, 2), (3,), (3,), (3,), (1,), (1, 3)]
    )


def test_horizontal_enumeration_appendix():
    strat = stratum((4, -2, -2), g=1)
    out = enumerate_horizontal_one_edge(strat)
    assert len(out) == 1  # graph (E): the self-node graph
    assert out[0].base.num_vertices == 1 and out[0].horizontal


def test_horizontal_compact_type():
    strat = stratum((2, 2, -1, -1), g=2)
    out = enumerate_horizontal_one_edge(strat)
    compact = [e for e in out if e.base.num_vertices == 2]
    # the (2,-1)|(2,-1) split of Example exa:hor
    assert any(e.base.genera == (1, 1) for e in compact)


def test_horizontal_minimal_signature():
    # minimal signatures never admit compact-type horizontal graphs
    for orders, g in [((6,), 4), ((2,), 2)]:
        strat = stratum(orders, g=g)
        out = enumerate_horizontal_one_edge(strat)
        assert len(out) == 1 and out[0].base.num_vertices == 1


def test_prong_matching_counts():
    strat = stratum((4, -2, -2), g=1)
    graphs = enumerate_two_level_graphs(strat)
    counts = {}
    for e in graphs:
        counts.setdefault(tuple(sorted(e.kappa)), prong_matching_class_count(e))
    assert counts[(1, 3)] == 1  # graph (C): 3*1/lcm(3,1)
    assert counts[(2, 2)] == 2  # graph (D): 2*2/lcm(2,2)
    assert counts[(3,)] == 1


def test_prong_count_rejects_horizontal():
    strat = stratum((4, -2, -2), g=1)
    (hor,) = enumerate_horizontal_one_edge(strat)
    with pytest.raises(ValueError):
        prong_matching_class_count(hor)


def _graph_with_kappas(graphs, kappas):
    return [e for e in graphs if tuple(sorted(e.kappa)) == kappas]


def test_extract_graph_f_bottom():
    strat = stratum((4, -2, -2), g=1)
    graphs = enumerate_two_level_graphs(strat)
    fs = [
        e
        for e in _graph_with_kappas(graphs, (3,))
        if e.base.genera[e.bottom_vertices()[0]] == 1
    ]
    (f,) = fs
    ext = extract_level_stratum(f, "bottom", strat)
    assert ext.stratum.sigs[0].orders in ((4, -4), (-4, 4))
    assert ext.stratum.residues == ()


def test_extract_graph_i_bottom_grc():
    strat = stratum((4, -2, -2), g=1)
    graphs = enumerate_two_level_graphs(strat)
    i_graphs = [
        e
        for e in _graph_with_kappas(graphs, (1,))
        if e.base.genera[e.top_vertices()[0]] == 1
    ]
    (gi,) = i_graphs
    ext = extract_level_stratum(gi, "bottom", strat)
    assert sorted(ext.stratum.sigs[0].orders) == [-2, -2, -2, 4]
    # the genus-1 top has no marked pole, so its edge's residue is forced
    assert len(ext.stratum.residues) == 1
    (part,) = ext.stratum.residues
    assert len(part) == 1


def test_extract_graph_j_top_two_components():
    strat = stratum((4, -2, -2), g=1)
    graphs = enumerate_two_level_graphs(strat)
    (gj,) = [e for e in graphs if e.base.num_vertices == 3]
    ext = extract_level_stratum(gj, "top", strat)
    assert len(ext.stratum.sigs) == 2


def test_enumeration_2_m2():
    # LG_1(2,-2): the compact graph with empty bottom stratum survives the
    # enumeration (its contribution dies later), plus the banana
    strat = stratum((2, -2), g=1)
    graphs = enumerate_two_level_graphs(strat)
    assert len(graphs) == 2
    for elg in graphs:
        two_level_signature_audit(elg, strat)


def test_enumeration_4_m4():
    strat = stratum((4, -4), g=1)
    graphs = enumerate_two_level_graphs(strat)
    kappas = sorted(tuple(sorted(e.kappa)) for e in graphs)
    assert (1, 3) in kappas and (2, 2) in kappas
    for elg in graphs:
        two_level_signature_audit(elg, strat)


def test_enumeration_prunes_unstable():
    # genus-2 minimal: the bottom vertex would have two special points only
    strat = stratum((2,), g=2)
    graphs = enumerate_two_level_graphs(strat)
    for elg in graphs:
        for v in range(elg.base.num_vertices):
            assert 2 * elg.base.genera[v] - 2 + elg.base.degree(v) > 0
        two_level_signature_audit(elg, strat)
    assert graphs


def test_extract_dimension_bookkeeping():
    # order sums reconstruct k(2g-2) with the node bookkeeping
    strat = stratum((4, -2, -2), g=1)
    for elg in enumerate_two_level_graphs(strat):
        top = extract_level_stratum(elg, "top", strat)
        bot = extract_level_stratum(elg, "bottom", strat)
        total = sum(sum(s.orders) for s in top.stratum.sigs) + sum(
            sum(s.orders) for s in bot.stratum.sigs
        )
        # each edge contributes (kappa-1) + (-kappa-1) = -2 on top of k(2g-2)
        assert total == 1 * (2 * 1 - 2) - 2 * elg.base.num_edges


def test_star_graphs_2_m2():
    sig = Signature((2, -2), g=1)
    stars = simple_star_graphs(sig)
    assert len(stars) == 1
    (s,) = stars
    assert len(s.bottom_vertices()) == 1
    assert s.kappa == (1,)
    assert simple_star_graphs(sig, odd_only=True) == stars


def test_star_graphs_4_m4():
    sig = Signature((4, -4), g=1)
    stars = simple_star_graphs(sig)
    assert all(len(s.bottom_vertices()) == 1 for s in stars)
    assert any(s.kappa == (1,) for s in stars)


def test_star_graphs_reject_holomorphic():
    with pytest.raises(ValueError):
        simple_star_graphs(Signature((0,), g=1))


def test_star_graphs_odd_filter_consistency():
    sig = Signature((4, -4), g=1)
    all_stars = {s.canonical() for s in simple_star_graphs(sig)}
    odd = {s.canonical() for s in simple_star_graphs(sig, odd_only=True)}
    assert odd <= all_stars
    for s in simple_star_graphs(sig):
        if all(k % 2 == 1 for k in s.kappa):
            assert s.canonical() in odd


def test_horizontal_extract_pairs_residues():
    strat = stratum((2, -2), g=1)
    (hor,) = enumerate_horizontal_one_edge(strat)
    ext = extract_horizontal_stratum(hor, strat)
    assert sorted(ext.stratum.sigs[0].orders) == [-2, -1, -1, 2]
    (part,) = ext.stratum.residues
    assert len(part) == 2


def test_paired_pole_stratum_nonempty():
    s = stratum((2, -2, -1, -1), g=0, residues=[{3, 4}])
    assert not s.is_empty()
    assert s.projectivized_dim() == 0


def test_forced_simple_pole_empty():
    # a single simple pole has zero residue by the residue theorem: empty
    s = stratum((1, -1), g=1)
    assert s.is_empty()


def test_dim_examples():
    assert stratum((4, -2, -2), g=1).projectivized_dim() == 2
    assert stratum((0,), g=1).projectivized_dim() == 1  # holomorphic bump
    assert stratum((4, -2, -2, -2), g=0, residues=[{4}]).projectivized_dim() == 0
