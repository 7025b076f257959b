"""Census and quotient-complex structure against independent oracles."""

import itertools

import pytest

from spinelab import catalog
from spinelab.fixtures import load_expected_tables
from spinelab.graphs import HalfEdgeGraph, is_admissible, rank
from spinelab.spine import (
    NameAmbiguityError,
    cell_rows,
    component_homology,
    enumerate_admissible,
    match_names,
    singular_graphs,
    verify_expected_tables,
)
from spinelab.symmetry import canonical_form


def oracle_admissible_classes(target_rank, max_vertices, max_edges):
    """Brute force over all attachment maps, deduplicated by canonical form."""
    classes = {}
    for e in range(1, max_edges + 1):
        sigma = []
        for i in range(e):
            sigma += [2 * i + 1, 2 * i]
        for v in range(1, max_vertices + 1):
            for targets in itertools.product(range(v), repeat=2 * e):
                if len(set(targets)) != v:
                    continue
                g = HalfEdgeGraph(v, tuple(sigma), targets)
                if rank(g) == target_rank and is_admissible(g):
                    classes[canonical_form(g)] = g
    return classes


def test_rank2_census_matches_oracle():
    oracle = oracle_admissible_classes(2, max_vertices=2, max_edges=3)
    got = enumerate_admissible(2)
    assert len(got) == len(oracle) == 2
    assert {canonical_form(g) for g in got} == set(oracle)
    forms = {canonical_form(g) for g in got}
    assert canonical_form(catalog.rose(2)) in forms
    assert canonical_form(catalog.multi_edge(3)) in forms


def test_rank4_census_size_regression():
    # regression value recorded from the enumerator; the 17 singular
    # classes inside it are checked row by row elsewhere
    assert len(enumerate_admissible(4)) == 43


def test_census_17_singular_classes(rank4_classes):
    assert len(rank4_classes) == 17
    orders = sorted(c.aut_order for c in rank4_classes)
    assert orders == sorted(
        [384, 240, 48, 48, 48, 72, 24, 24, 12, 48, 48, 24, 24, 12, 72, 48, 12]
    )


def test_census_contains_all_named_graphs(rank4_classes):
    forms = {canonical_form(c.graph): c.name for c in rank4_classes}
    for name, make in catalog.RANK4_SINGULAR.items():
        assert forms[canonical_form(make())] == name


def test_no_eight_edge_singular_graph(rank4_classes):
    assert all(c.graph.edge_count != 8 for c in rank4_classes)


def test_rank5_prime5_is_empty_for_rank2():
    assert not singular_graphs(5, 2)


def test_match_names_examples(rank4_classes):
    by_name = {c.name: c for c in rank4_classes}
    rose = by_name["R4"]
    assert (rose.graph.vertex_count, rose.graph.edge_count, rose.aut_order) == (1, 4, 384)
    p1 = by_name["P1"]
    assert (p1.graph.vertex_count, p1.graph.edge_count, p1.aut_order) == (6, 9, 12)
    t1 = by_name["T1"]
    assert (t1.graph.vertex_count, t1.graph.edge_count, t1.graph.total_loops()) == (3, 6, 0)


def test_match_names_flags_unknown():
    with pytest.raises(NameAmbiguityError):
        match_names(singular_graphs(5, 2) + singular_graphs(3, 2))


def test_cell_counts(rank4_complex):
    assert [len(rank4_complex.cells_of_dim(d)) for d in range(4)] == [17, 24, 13, 3]
    assert not rank4_complex.cells_of_dim(4)
    assert all(c.dim <= 2 * 4 - 3 for c in rank4_complex.cells)


def test_one_cells_match_expected_rows(rank4_complex):
    expected = load_expected_tables()
    want = sorted((tuple(r["cell"]), r["isotropy_order"]) for r in expected["one_cells"])
    assert sorted(cell_rows(rank4_complex, 1)) == want


def test_all_tables(rank4_complex):
    assert verify_expected_tables(rank4_complex, load_expected_tables()) == []


def test_three_cell_isotropies(rank4_complex):
    assert [c.isotropy_order for c in rank4_complex.cells_of_dim(3)] == [6, 6, 6]


def test_duplicated_edge_pair(rank4_complex):
    dup = [
        c
        for c in rank4_complex.cells_of_dim(1)
        if set(rank4_complex.cell_vertex_names(c)) == {"Theta2:Theta1", "Theta2^{0,2}"}
    ]
    assert len(dup) == 2
    assert sorted(c.isotropy_order for c in dup) == [6, 24]
    assert dup[0].chain != dup[1].chain


def test_one_cell_endpoints_are_collapses(rank4_complex):
    cx = rank4_complex
    from spinelab.graphs import collapse

    for cell in cx.cells_of_dim(1):
        top = cx.classes[cell.graph_index].graph
        quotient = collapse(top, cell.chain[0])
        names = cx.cell_vertex_names(cell)
        target = next(
            c for c in cx.classes if canonical_form(c.graph) == canonical_form(quotient)
        )
        assert names[0] == target.name


def test_components(rank4_complex):
    assert rank4_complex.component_count == 3
    assert sorted(rank4_complex.component_vertex_counts()) == [1, 7, 9]


def test_rose_component_is_acyclic(rank4_complex):
    comp = rank4_complex.component_containing("R4")
    assert component_homology(rank4_complex, comp, 3) == [0, 0, 0, 0]


def test_isotropy_subgroup_membership(rank4_complex):
    cx = rank4_complex
    for cell in cx.cells:
        group = set(cx.classes[cell.graph_index].aut.elements)
        assert all(a in group for a in cell.isotropy)
        assert cell.isotropy_order % 3 == 0


def test_face_of_face_identity(rank4_complex):
    """Omitting vertices i < j in either order lands in the same cell."""
    cx = rank4_complex
    cells = {c.index: c for c in cx.cells}
    for cell in cx.cells:
        if cell.dim < 2:
            continue
        k = cell.dim
        for j in range(k + 1):
            for i in range(j):
                first = cells[cell.faces[j]]
                via_j = first.faces[i]
                second = cells[cell.faces[i]]
                via_i = second.faces[j - 1]
                assert via_j == via_i
