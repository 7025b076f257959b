"""Symmetry census, Nielsen moves and blow-ups for small primes."""

import pytest

from spinelab import catalog
from spinelab.equivariant import (
    ZpGraph,
    classify_reduced,
    dedup_equivariant,
    enumerate_zp_graphs,
    equivariant_collapse,
    equivariant_expansions,
    equivariant_isomorphic,
    invariant_forests,
    is_reduced,
    nielsen_closure,
    nielsen_moves,
    reduce_zp,
)
from spinelab.graphs import enumerate_forests, is_forest, rank
from spinelab.symmetry import edge_permutation, perm_order


def wedge(p, which="diag"):
    g, left, right = catalog.wedge_rotations(p)
    from spinelab.symmetry import compose

    actions = {"diag": compose(left, right), "left": left, "right": right}
    return ZpGraph(g, actions[which], p)


def test_action_order_is_validated():
    g, a = catalog.rose_rotation(3, 4)
    assert perm_order(a) == 3
    with pytest.raises(ValueError):
        ZpGraph(g, a, 5)


def test_is_reduced_examples():
    assert is_reduced(ZpGraph(*catalog.rose_rotation(5, 8), 5))
    assert is_reduced(ZpGraph(*catalog.theta_rotation(5, 2, 2), 5))
    assert not is_reduced(wedge(5, "left"))
    assert is_reduced(wedge(5, "diag"))


def test_is_reduced_cross_checked_with_forest_filter():
    """Reducedness agrees with filtering all forests for invariance."""
    for zg in (wedge(3, "diag"), wedge(3, "left"), ZpGraph(*catalog.bipartite_block_rotation(3), 3)):
        ep = edge_permutation(zg.graph, zg.action)
        brute = [
            f
            for f in enumerate_forests(zg.graph)
            if f and frozenset(ep[e] for e in f) == f
        ]
        assert sorted(map(sorted, brute)) == sorted(map(sorted, invariant_forests(zg)))
        assert is_reduced(zg) == (not brute)


def test_reduce_left_wedge_gives_theta():
    reduced = reduce_zp(wedge(5, "left"))
    want = ZpGraph(*catalog.theta_rotation(5, 0, 4), 5)
    assert equivariant_isomorphic(reduced, want)


@pytest.mark.parametrize("p,count", [(5, 5), (7, 6)])
def test_classify_reduced_counts(p, count):
    assert len(classify_reduced(p)) == count


def test_classify_reduced_5_matches_catalog():
    classes = classify_reduced(5)
    expected = [ZpGraph(*catalog.rose_rotation(5, 8), 5)]
    for s in (0, 1, 2):
        expected.append(ZpGraph(*catalog.theta_rotation(5, s, 4 - s), 5))
    expected.append(wedge(5, "diag"))
    for want in expected:
        assert sum(1 for c in classes if equivariant_isomorphic(want, c)) == 1


def test_classify_reduced_3_contains_expected():
    classes = classify_reduced(3)
    expected = [
        ZpGraph(*catalog.rose_rotation(3, 4), 3),
        ZpGraph(*catalog.theta_rotation(3, 0, 2), 3),
        ZpGraph(*catalog.theta_rotation(3, 1, 1), 3),
        wedge(3, "diag"),
    ]
    for want in expected:
        assert any(equivariant_isomorphic(want, c) for c in classes)
    # strictly larger: fixed-point-free classes exist at p = 3
    fpf = [c for c in classes if c.fixed_vertex_count() == 0]
    assert fpf
    assert len(classes) > len(expected)


def test_enumerate_zp_graphs_examples():
    zs = enumerate_zp_graphs(5, 8, 10)
    rose = ZpGraph(*catalog.rose_rotation(5, 8), 5)
    assert any(equivariant_isomorphic(z, rose) for z in zs)
    assert any(equivariant_isomorphic(z, wedge(5, "diag")) for z in zs)
    assert all(z.fixed_vertex_count() > 0 for z in zs)
    assert all(rank(z.graph) == 8 for z in zs)


def test_dedup_collapses_conjugate_powers():
    g, a = catalog.theta_rotation(3, 0, 2)
    from spinelab.symmetry import power

    squared = ZpGraph(g, power(a, 2), 3)
    assert equivariant_isomorphic(ZpGraph(g, a, 3), squared)
    assert len(dedup_equivariant([ZpGraph(g, a, 3), squared])) == 1


def test_nielsen_moves_preserve_rank_and_vertices():
    zg = ZpGraph(*catalog.theta_rotation(3, 1, 1), 3)
    for move in nielsen_moves(zg):
        assert rank(move.result.graph) == rank(zg.graph)
        assert move.result.graph.vertex_count == zg.graph.vertex_count


def test_nielsen_rose_results_isomorphic():
    zg = ZpGraph(*catalog.rose_rotation(5, 8), 5)
    moves = nielsen_moves(zg)
    assert moves
    assert all(equivariant_isomorphic(reduce_zp(m.result), zg) for m in moves)


def test_nielsen_theta_results_isomorphic():
    zg = ZpGraph(*catalog.theta_rotation(5, 0, 4), 5)
    for move in nielsen_moves(zg):
        assert equivariant_isomorphic(reduce_zp(move.result), zg)


def test_nielsen_closures_p3():
    for start in (ZpGraph(*catalog.rose_rotation(3, 4), 3), wedge(3, "diag")):
        closure = nielsen_closure(start)
        assert len(closure) == 1


def test_collapse_transports_action():
    zg = ZpGraph(*catalog.bipartite_block_rotation(3), 3)
    star = next(f for f in invariant_forests(zg) if len(f) == 3)
    collapsed = equivariant_collapse(zg, star)
    assert equivariant_isomorphic(collapsed, wedge(3, "diag"))


def test_expansion_round_trip_p3():
    target = wedge(3, "diag")
    pairs = equivariant_expansions(target, 9)
    assert len(pairs) == 1
    candidate, forest = pairs[0]
    assert is_forest(candidate.graph, forest)
    bip = ZpGraph(*catalog.bipartite_block_rotation(3), 3)
    assert equivariant_isomorphic(candidate, bip)
    assert equivariant_isomorphic(equivariant_collapse(candidate, forest), target)


def test_expansion_budget_zero():
    assert equivariant_expansions(wedge(3, "diag"), 0) == []


def test_no_expansion_of_bipartite_p3():
    bip = ZpGraph(*catalog.bipartite_block_rotation(3), 3)
    assert equivariant_expansions(bip, 12) == []


def test_json_round_trip():
    zg = wedge(3, "diag")
    back = ZpGraph.from_json(zg.to_json())
    assert back.graph == zg.graph and back.action == zg.action and back.p == 3
