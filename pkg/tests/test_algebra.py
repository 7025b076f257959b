"""Graded algebras, morphisms, equalizers and invariants."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinelab.algebra import (
    AlgebraMorphism,
    Element,
    GradedAlgebra,
    ProductAlgebra,
    ProductMorphism,
    cohomology_of_metacyclic,
    dimensions,
    equalizer,
    identity_morphism,
    invariants,
    parse_element,
    swap_action,
    tensor,
    verify_free_module,
)
from spinelab.fixtures import load_algebra, load_algebras, load_morphism


@pytest.fixture(scope="module")
def setup():
    algebras = load_algebras()
    alpha = load_morphism("alpha", algebras)
    beta = load_morphism("beta", algebras)
    source = ProductAlgebra([alpha.source, beta.source])
    f = ProductMorphism(source, 0, alpha)
    g = ProductMorphism(source, 1, beta)
    return algebras, alpha, beta, source, f, g


def test_generator_validation():
    with pytest.raises(ValueError):
        GradedAlgebra(3, [("a", 3, "poly")])  # poly must be even
    with pytest.raises(ValueError):
        GradedAlgebra(3, [("a", 4, "ext")])  # ext must be odd
    with pytest.raises(ValueError):
        GradedAlgebra(4, [("a", 2, "poly")])  # p must be an odd prime


def test_dimensions_examples():
    sigma3 = load_algebra("sigma3")
    assert dimensions(sigma3, 8).dims == (1, 0, 0, 1, 1, 0, 0, 1, 1)
    wreath = load_algebra("wreath")
    # degree 10 admits only the product of the two exterior generators
    assert dimensions(wreath, 10)[10] == 1
    ground = GradedAlgebra(3, [])
    assert dimensions(ground, 5).dims == (1, 0, 0, 0, 0, 0)


def test_dimensions_match_poincare_series():
    for name in ("sigma3", "wreath", "stab_k33", "double_sigma3"):
        alg = load_algebra(name)
        assert dimensions(alg, 30).dims == alg.poincare_series().coefficients(30)


@settings(max_examples=60, deadline=None)
@given(
    exps_a=st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 1), st.integers(0, 2)),
    exps_b=st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 1), st.integers(0, 2)),
)
def test_koszul_commutativity(exps_a, exps_b):
    alg = GradedAlgebra(
        5, [("c", 2, "poly"), ("u", 3, "ext"), ("v", 5, "ext"), ("d", 4, "poly")]
    )
    a = Element(alg, {exps_a: 1})
    b = Element(alg, {exps_b: 1})
    da = alg.monomial_degree(exps_a)
    db = alg.monomial_degree(exps_b)
    sign = -1 if (da % 2 and db % 2) else 1
    assert a * b == sign * (b * a)


def test_restriction_map_values(setup):
    _, alpha, beta, _, _, _ = setup
    edge = alpha.target
    assert alpha.apply(alpha.source.generator_element("x8")) == parse_element(edge, "z4^2")
    assert beta.apply(beta.source.generator_element("v7")).is_zero()
    assert alpha.apply(alpha.source.generator_element("u7")) == parse_element(edge, "z4*w3")


def test_identity_morphism_and_inhomogeneous_error(setup):
    algebras, *_ = setup
    sigma3 = algebras["sigma3"]
    ident = identity_morphism(sigma3)
    homog = parse_element(sigma3, "2*a4^2")
    assert ident.apply(homog) == homog
    x = parse_element(sigma3, "a4 + 2*a4^2")
    with pytest.raises(ValueError):
        ident.apply(x)
    with pytest.raises(ValueError):
        x.degree()
    with pytest.raises(ValueError):
        x.vector(4)


def test_matrix_in_degree_is_multiplicative(setup):
    _, alpha, _, _, _, _ = setup
    x = parse_element(alpha.source, "x4*u3")
    assert alpha.apply(x) == alpha.apply(
        alpha.source.generator_element("x4")
    ) * alpha.apply(alpha.source.generator_element("u3"))
    mat = alpha.matrix_in_degree(7)
    col = x.vector(7)
    image = alpha.apply(x).vector(7)
    got = [sum(mat[r][c] * col[c] for c in range(len(col))) % 3 for r in range(len(mat))]
    assert got == image


def test_equalizer_dims_and_membership(setup):
    _, _, _, source, f, g = setup
    eq = equalizer(f, g, 12)
    assert eq.dims.dims[:9] == (1, 0, 0, 1, 1, 0, 0, 3, 3)
    hk, hw = source.components
    r4 = source.pair(parse_element(hk, "x4"), parse_element(hw, "2*y4"))
    assert eq.contains(f, g, r4)
    assert eq.dims[4] == 1
    # the degree-4 basis vector spans the same line as (x4, 2y4)
    vec = eq.bases[4][0]
    assert vec == r4 or vec == 2 * r4


def test_equalizer_of_equal_maps_is_everything(setup):
    _, _, _, source, f, _ = setup
    eq = equalizer(f, f, 10)
    assert eq.dims.dims == dimensions(source, 10).dims


def test_equalizer_closed_under_multiplication(setup):
    _, _, _, _, f, g = setup
    eq = equalizer(f, g, 16)
    for d1 in (3, 4, 7):
        for d2 in (3, 4, 8):
            for a in eq.bases[d1]:
                for b in eq.bases[d2]:
                    product = a * b
                    if not product.is_zero():
                        assert eq.contains(f, g, product)


def test_equalizer_rejects_mismatched_sources(setup):
    algebras, alpha, beta, source, f, g = setup
    other = ProductMorphism(ProductAlgebra([beta.source, alpha.source]), 0, beta)
    with pytest.raises(ValueError):
        equalizer(f, other, 5)


def test_invariants_trivial_group():
    big = load_algebra("double_sigma3")
    inv = invariants(big, [], 12)
    assert inv.dims.dims == dimensions(big, 12).dims


def test_invariants_wreath(setup):
    big = load_algebra("double_sigma3")
    wreath = load_algebra("wreath")
    swap = swap_action(big, [("c41", "c42"), ("d31", "d32")])
    inv = invariants(big, [swap], 24)
    assert inv.dims.dims == dimensions(wreath, 24).dims
    assert inv.dims[8] == 2


def test_invariant_projector_is_idempotent():
    from spinelab import linalg

    big = load_algebra("double_sigma3")
    swap = swap_action(big, [("c41", "c42"), ("d31", "d32")])
    p = 3
    for d in (4, 7, 8, 11):
        size = len(big.basis(d))
        ident_mat = identity_morphism(big).matrix_in_degree(d)
        swap_mat = swap.matrix_in_degree(d)
        ninv = pow(2, p - 2, p)
        proj = [
            [(ninv * (ident_mat[i][j] + swap_mat[i][j])) % p for j in range(size)]
            for i in range(size)
        ]
        assert linalg.mat_mul(proj, proj, p) == proj
        inv = invariants(big, [swap], d)
        assert inv.dims[d] == linalg.rank(proj, p)
        assert inv.dims[d] <= size


def test_equalizer_dims_bounded_by_source(setup):
    _, _, _, source, f, g = setup
    eq = equalizer(f, g, 16)
    for d in range(17):
        assert eq.dims[d] <= dimensions(source, 16)[d]


def test_aut_group_json_shape():
    from spinelab.symmetry import automorphism_group

    group = automorphism_group(load_fixture_graph())
    data = group.to_json()
    assert data["order"] == len(data["generators"]) == group.order
    first = data["generators"][0]
    assert set(first) == {"vperm", "hperm"}


def load_fixture_graph():
    from spinelab.catalog import multi_edge

    return multi_edge(3)


def test_invariants_reject_modular_group_order():
    alg = GradedAlgebra(3, [("c1", 2, "poly"), ("c2", 2, "poly"), ("c3", 2, "poly")])
    cycle = AlgebraMorphism(
        alg,
        alg,
        {
            "c1": alg.generator_element("c2"),
            "c2": alg.generator_element("c3"),
            "c3": alg.generator_element("c1"),
        },
    )
    with pytest.raises(ValueError):
        invariants(alg, [cycle], 6)


@pytest.mark.parametrize(
    "p,m,degrees", [(3, 2, (3, 4)), (5, 4, (7, 8)), (3, 1, (1, 2))]
)
def test_metacyclic_degrees(p, m, degrees):
    alg = cohomology_of_metacyclic(p, m)
    assert tuple(sorted(g.degree for g in alg.generators)) == degrees


def test_metacyclic_rejects_bad_m():
    with pytest.raises(ValueError):
        cohomology_of_metacyclic(5, 3)


def test_free_module_trivial_case():
    # subring = the whole ambient algebra, module generated by 1
    sigma3 = load_algebra("sigma3")
    ident = identity_morphism(sigma3)
    eq = equalizer(ident, ident, 12)
    gens = [sigma3.generator_element("a4"), sigma3.generator_element("b3")]
    assert verify_free_module(eq, ident, ident, gens, [Element.one(sigma3)], 12)


def test_check_relations(setup):
    from spinelab.algebra import check_relations

    _, _, _, source, _, _ = setup
    hk, hw = source.components
    r4 = source.pair(parse_element(hk, "x4"), parse_element(hw, "2*y4"))
    s3 = source.pair(parse_element(hk, "u3"), parse_element(hw, "2*v3"))
    t7 = source.embed(1, parse_element(hw, "v7"))
    t7_tilde = source.pair(parse_element(hk, "u7"), parse_element(hw, "y4*v3"))
    results = check_relations(
        [
            (t7_tilde * t7, r4 * s3 * t7),
            (t7 * Element.one(source), t7),
            (t7 * t7, r4 * s3),  # deliberately false
        ]
    )
    assert results == [True, True, False]


def test_parse_element_grammar():
    sigma3 = load_algebra("sigma3")
    assert parse_element(sigma3, "2*a4^2 + a4*b3") == 2 * parse_element(
        sigma3, "a4"
    ) ** 2 + parse_element(sigma3, "a4") * parse_element(sigma3, "b3")
    assert parse_element(sigma3, "0").is_zero()
    with pytest.raises(ValueError):
        parse_element(sigma3, "a4 +* b3")


def test_tensor_names():
    sigma3 = load_algebra("sigma3")
    square = tensor(3, sigma3, sigma3, suffixes=["_1", "_2"])
    names = [g.name for g in square.generators]
    assert names == ["a4_1", "b3_1", "a4_2", "b3_2"]
    assert dimensions(square, 8)[8] == 3  # a4_1^2, a4_1 a4_2, a4_2^2
