"""Isotropy pages over the quotient complex and cohomology assembly.

Each cell of the quotient carries the cohomology of its stabilizer as a
graded coefficient; faces induce restriction maps.  For the components
handled here the coefficient rule is configuration data: cells whose
stabilizer has Sylow-p part of order p share a fixed graded model with
identity faces, while the two big vertex groups and the edge joining them
carry explicit algebras and the two restriction morphisms.  Components
with a uniform rule are resolved by a direct page computation; the
component owning the special edge is resolved by checking that everything
outside that edge is an acyclic identity region and then computing the
equalizer of the two restrictions (the amalgam answer for a segment
fundamental domain).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from spinelab import linalg
from spinelab.algebra import (
    AlgebraMorphism,
    Element,
    GradedAlgebra,
    cohomology_of_metacyclic,
    dimensions,
    invariants,
    parse_element,
    swap_action,
    tensor,
)
from spinelab.fixtures import load_algebras, load_coefficient_rule, load_morphism
from spinelab.series import GradedDims
from spinelab.spine import QuotientComplex


class CoefficientRuleError(RuntimeError):
    pass


class ConcentrationError(RuntimeError):
    """Higher page entries survive where the computation assumes none."""


@dataclass
class CoefficientRule:
    """Assignment of graded dims to cells and maps to faces.

    ``cell_dims[i]`` is the dims vector of cell i; ``face_map(cell, k)``
    returns None for an identity face or a per-degree matrix list for the
    special restriction faces.
    """

    bound: int
    cell_dims: dict
    special_faces: dict  # (cell index, omission position) -> list of matrices

    def dims_of(self, cell_index: int):
        return self.cell_dims[cell_index]

    def face_matrices(self, cell_index: int, position: int):
        return self.special_faces.get((cell_index, position))


def sylow_rule(cx: QuotientComplex, bound: int, with_special_edge: bool = True) -> CoefficientRule:
    """The shipped coefficient rule for the p = 3 rank-4 complex.

    Stabilizers with Sylow-3 order 3 all carry the same model with
    identity faces; the two order-9 vertices and the edge between them
    carry the two explicit restriction morphisms.
    """
    cfg = load_coefficient_rule()
    algebras = load_algebras()
    base = algebras[cfg["by_sylow_order"]["3"]]
    big = algebras[cfg["by_sylow_order"]["9"]]
    base_dims = dimensions(base, bound).dims
    big_dims = dimensions(big, bound).dims

    def sylow(order: int) -> int:
        out = 1
        while order % cx.p == 0:
            order //= cx.p
            out *= cx.p
        return out

    cell_dims = {}
    for cell in cx.cells:
        s = sylow(cell.isotropy_order)
        if s == cx.p:
            cell_dims[cell.index] = base_dims
        elif s == cx.p**2:
            cell_dims[cell.index] = big_dims
        else:
            raise CoefficientRuleError(
                f"no coefficient model for Sylow order {s} on cell {cell.index}"
            )

    special = {}
    if with_special_edge:
        edge_cfg = cfg["critical_edge"]
        endpoints = set(edge_cfg["endpoints"])
        vertex_algebra = {
            name: algebras[key] for name, key in edge_cfg["vertex_algebras"].items()
        }
        face_morphism = {
            name: load_morphism(key, algebras)
            for name, key in edge_cfg["face_morphisms"].items()
        }
        edge_algebra = algebras[edge_cfg["edge_algebra"]]
        for cell in cx.cells:
            if cell.dim != 1:
                continue
            names = cx.cell_vertex_names(cell)  # [collapsed, top]
            if set(names) != endpoints:
                continue
            cell_dims[cell.index] = dimensions(edge_algebra, bound).dims
            for position, name in ((0, names[1]), (1, names[0])):
                # omitting vertex 0 leaves the top endpoint, omitting 1
                # leaves the collapsed one
                cell_dims_v = dimensions(vertex_algebra[name], bound).dims
                morphism = face_morphism[name]
                special[(cell.index, position)] = [
                    morphism.matrix_in_degree(d) for d in range(bound + 1)
                ]
                vertex_cell = cx.cells[cell.faces[position]]
                cell_dims[vertex_cell.index] = cell_dims_v
    return CoefficientRule(bound, cell_dims, special)


def constant_rule(cx: QuotientComplex, bound: int, model: GradedAlgebra) -> CoefficientRule:
    dims = dimensions(model, bound).dims
    return CoefficientRule(bound, {c.index: dims for c in cx.cells}, {})


@dataclass
class E1Page:
    """Cochain complex of graded vector spaces over the cell structure."""

    p: int
    bound: int
    cells_by_dim: dict  # s -> ordered cell indices
    dims: dict  # cell index -> dims vector
    differentials: dict  # (s, q) -> matrix C^s(q) -> C^{s+1}(q)


def build_e1(
    cx: QuotientComplex,
    rule: CoefficientRule,
    component: Optional[int] = None,
    cell_indices: Optional[list] = None,
) -> E1Page:
    """Assemble the page of a component, a cell subset, or everything.

    The coboundary into a cell of dimension s+1 is the alternating sum of
    its face maps; identity faces require equal dims on both sides.  A
    cell subset must be closed under faces.
    """
    if cell_indices is not None:
        chosen = set(cell_indices)
        for ci in chosen:
            for f in cx.cells[ci].faces:
                if f not in chosen:
                    raise CoefficientRuleError("cell subset is not closed under faces")
        selected = [c for c in cx.cells if c.index in chosen]
    else:
        selected = [
            c
            for c in cx.cells
            if component is None or cx.component_of[c.index] == component
        ]
    for cell in selected:
        if cell.index not in rule.cell_dims:
            raise CoefficientRuleError(f"cell {cell.index} is not covered by the rule")
    cells_by_dim: dict = {}
    for cell in selected:
        cells_by_dim.setdefault(cell.dim, []).append(cell.index)
    for s in cells_by_dim:
        cells_by_dim[s].sort()

    p, bound = cx.p, rule.bound
    offsets = {}
    for s, ids in cells_by_dim.items():
        offsets[s] = {}
        for q in range(bound + 1):
            acc = 0
            for ci in ids:
                offsets[s][(ci, q)] = acc
                acc += rule.dims_of(ci)[q]

    def block_dim(s, q):
        return sum(rule.dims_of(ci)[q] for ci in cells_by_dim.get(s, []))

    differentials = {}
    for s in sorted(cells_by_dim):
        if s + 1 not in cells_by_dim:
            continue
        for q in range(bound + 1):
            rows = block_dim(s + 1, q)
            cols = block_dim(s, q)
            mat = [[0] * cols for _ in range(rows)]
            for ci in cells_by_dim[s + 1]:
                cell = cx.cells[ci]
                row0 = offsets[s + 1][(ci, q)]
                target_dim = rule.dims_of(ci)[q]
                for position, face in enumerate(cell.faces):
                    sign = (-1) ** position
                    col0 = offsets[s][(face, q)]
                    source_dim = rule.dims_of(face)[q]
                    block = rule.face_matrices(ci, position)
                    if block is None:
                        if source_dim != target_dim:
                            raise CoefficientRuleError(
                                f"identity face of cell {ci} has mismatched dims "
                                f"({source_dim} vs {target_dim}) in degree {q}"
                            )
                        for k in range(target_dim):
                            mat[row0 + k][col0 + k] = (mat[row0 + k][col0 + k] + sign) % p
                    else:
                        bq = block[q]
                        for r in range(target_dim):
                            for c in range(source_dim):
                                mat[row0 + r][col0 + c] = (
                                    mat[row0 + r][col0 + c] + sign * bq[r][c]
                                ) % p
            differentials[(s, q)] = mat
    return E1Page(p, bound, cells_by_dim, {c.index: rule.dims_of(c.index) for c in selected}, differentials)


def check_d_squared(page: E1Page) -> bool:
    for (s, q), mat in page.differentials.items():
        nxt = page.differentials.get((s + 1, q))
        if nxt and mat and nxt[0] and mat[0]:
            if not linalg.is_zero_matrix(linalg.mat_mul(nxt, mat, page.p), page.p):
                return False
    return True


def page_cohomology(page: E1Page) -> dict:
    """dims of H^s per degree q, from the s-direction complexes."""
    out = {}
    max_s = max(page.cells_by_dim)
    for q in range(page.bound + 1):
        sizes = {
            s: sum(page.dims[ci][q] for ci in page.cells_by_dim.get(s, []))
            for s in range(max_s + 1)
        }
        for s in range(max_s + 1):
            incoming = page.differentials.get((s - 1, q))
            outgoing = page.differentials.get((s, q))
            rank_in = linalg.rank(incoming, page.p) if incoming and incoming[0] else 0
            rank_out = linalg.rank(outgoing, page.p) if outgoing and outgoing[0] else 0
            out[(s, q)] = sizes[s] - rank_out - rank_in
    return out


def equivariant_cohomology_from_page(page: E1Page) -> GradedDims:
    """Total dims when the page collapses onto the zeroth column.

    Anything surviving in a higher column would feed later differentials,
    so the computation refuses to continue in that case.
    """
    coh = page_cohomology(page)
    for (s, q), d in coh.items():
        if s > 0 and d:
            raise ConcentrationError(f"page survives at column {s}, degree {q}")
    return GradedDims(page.bound, tuple(coh[(0, q)] for q in range(page.bound + 1)))


# ---------------------------------------------------------------------------
# amalgam over a segment


def amalgam_cohomology(h1, h2, h12, f1, f2, bound: int, p: int) -> GradedDims:
    """Equalizer dims of two degree-wise maps into a common target.

    At least one of the maps must be surjective in every degree (else the
    connecting maps of the pair would interfere); the result in degree d is
    dim ker [f1, -f2] on h1(d) + h2(d).
    """
    for d in range(bound + 1):
        m1, m2 = f1[d], f2[d]
        target = h12[d]
        r1 = linalg.rank(m1, p) if m1 and m1[0] else 0
        r2 = linalg.rank(m2, p) if m2 and m2[0] else 0
        if r1 != target and r2 != target:
            raise ValueError(f"neither map is surjective in degree {d}")
    dims = []
    for d in range(bound + 1):
        cols1, cols2 = h1[d], h2[d]
        rows = h12[d]
        mat = [[0] * (cols1 + cols2) for _ in range(rows)]
        for r in range(rows):
            for c in range(cols1):
                mat[r][c] = f1[d][r][c] % p
            for c in range(cols2):
                mat[r][cols1 + c] = (-f2[d][r][c]) % p
        rank = linalg.rank(mat, p) if mat and mat[0] else 0
        dims.append(cols1 + cols2 - rank)
    return GradedDims(bound, tuple(dims))


# ---------------------------------------------------------------------------
# component-level assembly


def component_cohomology(cx: QuotientComplex, component: int, bound: int) -> GradedDims:
    """Equivariant cohomology dims of one component of the quotient.

    Components without the special edge use the uniform rule and the page
    computation directly.  The component carrying the special edge is
    first checked to retract onto it: removing the open edge must leave
    acyclic identity-coefficient pieces, one per endpoint; the answer is
    then the equalizer of the two restriction morphisms.
    """
    cfg = load_coefficient_rule()
    endpoints = set(cfg["critical_edge"]["endpoints"])
    names_in_component = {
        cx.classes[c.graph_index].name
        for c in cx.cells
        if c.dim == 0 and cx.component_of[c.index] == component
    }
    if not endpoints <= names_in_component:
        rule = sylow_rule(cx, bound, with_special_edge=False)
        page = build_e1(cx, rule, component)
        return equivariant_cohomology_from_page(page)
    _check_retraction(cx, component)
    algebras = load_algebras()
    alpha = load_morphism(cfg["critical_edge"]["face_morphisms"]["K33"], algebras)
    beta = load_morphism(cfg["critical_edge"]["face_morphisms"]["Theta2vTheta2"], algebras)
    h1 = dimensions(alpha.source, bound).dims
    h2 = dimensions(beta.source, bound).dims
    h12 = dimensions(alpha.target, bound).dims
    f1 = [alpha.matrix_in_degree(d) for d in range(bound + 1)]
    f2 = [beta.matrix_in_degree(d) for d in range(bound + 1)]
    return amalgam_cohomology(h1, h2, h12, f1, f2, bound, cx.p)


def special_edge_cells(cx: QuotientComplex) -> list:
    """The special 1-cell and its two endpoint vertices, as cell indices."""
    cfg = load_coefficient_rule()
    endpoints = set(cfg["critical_edge"]["endpoints"])
    for cell in cx.cells:
        if cell.dim == 1 and set(cx.cell_vertex_names(cell)) == endpoints:
            return sorted([cell.index, *cell.faces])
    raise CoefficientRuleError("no special edge in the complex")


def _check_retraction(cx: QuotientComplex, component: int):
    """The special edge must carry the component up to acyclic padding.

    Removing the open edge has to disconnect the component into pieces
    with trivial reduced homology, one per endpoint, and every other cell
    must have a Sylow-p stabilizer of order exactly p (the identity
    region).  These are the mechanical facts behind collapsing the
    component onto the edge.
    """
    from spinelab.graphs import DisjointSet

    cfg = load_coefficient_rule()
    endpoints = set(cfg["critical_edge"]["endpoints"])
    cells = [c for c in cx.cells if cx.component_of[c.index] == component]
    special = [
        c
        for c in cells
        if c.dim == 1 and set(cx.cell_vertex_names(c)) == endpoints
    ]
    if len(special) != 1:
        raise ConcentrationError("expected exactly one special edge in the component")
    edge = special[0]
    for c in cells:
        if c.index == edge.index:
            continue
        if set(cx.cell_vertex_names(c)) >= endpoints and c.dim >= 1:
            raise ConcentrationError("a higher cell touches both special endpoints")
    rest = [c for c in cells if c.index != edge.index]
    for c in rest:
        if c.dim >= 1:
            s = c.isotropy_order
            while s % cx.p == 0:
                s //= cx.p
            if c.isotropy_order // s != cx.p:
                raise ConcentrationError("identity region contains a big stabilizer")
    index_set = {c.index for c in rest}
    order = sorted(index_set)
    pos = {ci: k for k, ci in enumerate(order)}
    ds = DisjointSet(len(order))
    for c in rest:
        for f in c.faces:
            ds.union(pos[c.index], pos[f])
    pieces: dict = {}
    for c in rest:
        pieces.setdefault(ds.find(pos[c.index]), []).append(c.index)
    if len(pieces) != 2:
        raise ConcentrationError(
            f"removing the special edge left {len(pieces)} pieces, expected 2"
        )
    for piece in pieces.values():
        if _piece_has_homology(cx, piece):
            raise ConcentrationError("a piece outside the special edge is not acyclic")


def _piece_has_homology(cx: QuotientComplex, ids: list) -> bool:
    by_dim: dict = {}
    for i in ids:
        by_dim.setdefault(cx.cells[i].dim, []).append(i)
    max_dim = max(by_dim)
    pos = {i: k for d in by_dim for k, i in enumerate(sorted(by_dim[d]))}
    p = cx.p
    boundaries = {0: [[1 for _ in sorted(by_dim[0])]]}
    for d in range(1, max_dim + 1):
        rows = len(by_dim.get(d - 1, []))
        mat = [[0] * len(by_dim[d]) for _ in range(rows)]
        for col, i in enumerate(sorted(by_dim[d])):
            for omit, f in enumerate(cx.cells[i].faces):
                mat[pos[f]][col] = (mat[pos[f]][col] + (-1) ** omit) % p
        boundaries[d] = mat
    for d in range(0, max_dim + 1):
        cols = len(by_dim.get(d, []))
        mat = boundaries[d]
        rank_d = linalg.rank(mat, p) if mat and mat[0] else 0
        nxt = boundaries.get(d + 1)
        rank_next = linalg.rank(nxt, p) if nxt and nxt[0] else 0
        if cols - rank_d - rank_next:
            return True
    return False


def corollary_dims(cx: QuotientComplex, bound: int) -> dict:
    """Per-component and total equivariant cohomology dims."""
    out = {}
    for key in ("rose", "theta11", "k33"):
        anchor = {"rose": "R4", "theta11": "Theta2^{1,1}", "k33": "K33"}[key]
        comp = cx.component_containing(anchor)
        out[key] = component_cohomology(cx, comp, bound)
    total = out["rose"].add(out["theta11"]).add(out["k33"])
    out["total"] = total
    return out


# ---------------------------------------------------------------------------
# the recursion pipeline with pluggable input


@dataclass
class RecursionReport:
    p: int
    bound: int
    eq_dims: GradedDims
    invariant_dims: GradedDims
    kernel_tensor_dims: GradedDims
    identity_holds: bool


def theorem_pipeline(
    p: int, aut_input: GradedAlgebra, restriction_images: dict, bound: int
) -> RecursionReport:
    """Equalizer bookkeeping for the rank-two normalizer component.

    M is the metacyclic cohomology at m = p-1; the pluggable input stands
    for the cohomology of the relevant automorphism group with a stated
    restriction onto M, required to be surjective in every degree.  The
    pipeline computes the equalizer of (id x restriction) from M (x) input
    and the inclusion of the swap invariants of M (x) M, and verifies

        dim Eq(d) = dim invariants(d) + dim (M (x) ker restriction)(d).
    """
    M = cohomology_of_metacyclic(p, p - 1)
    restriction = AlgebraMorphism(
        aut_input,
        M,
        {g.name: parse_element(M, restriction_images[g.name]) for g in aut_input.generators},
    )
    for d in range(bound + 1):
        if not restriction.is_surjective_in_degree(d):
            raise ValueError(f"restriction is not surjective in degree {d}")

    MM = tensor(p, M, M, suffixes=["_1", "_2"])
    pairs = [(g.name + "_1", g.name + "_2") for g in M.generators]
    inv = invariants(MM, [swap_action(MM, pairs)], bound)

    big = tensor(p, M, aut_input, suffixes=["_1", ""])
    f1_images = {}
    for g in M.generators:
        f1_images[g.name + "_1"] = MM.generator_element(g.name + "_1")
    for g in aut_input.generators:
        img = restriction.images[g.name]
        f1_images[g.name] = Element(
            MM,
            {
                _shift_monomial(MM, M, m): c
                for m, c in img.coeffs.items()
            },
        )
    f1 = AlgebraMorphism(big, MM, f1_images)

    # pairs (u, w) with w in the invariant subspace and f1(u) = w: the
    # kernel of [f1 | -inclusion] on (M x input)(d) + invariants(d)
    eq_dims = []
    for d in range(bound + 1):
        mat = [row[:] for row in f1.matrix_in_degree(d)]
        inv_vectors = [elt.vector(d) for elt in inv.bases[d]]
        cols = len(big.basis(d))
        rows = len(MM.basis(d))
        full = [
            [mat[r][c] % p for c in range(cols)]
            + [(-v[r]) % p for v in inv_vectors]
            for r in range(rows)
        ]
        rank = linalg.rank(full, p) if full and full[0] else 0
        eq_dims.append(cols + len(inv_vectors) - rank)
    eq_dims = GradedDims(bound, tuple(eq_dims))

    M_dims = dimensions(M, bound)
    aut_dims = dimensions(aut_input, bound)
    kernel = [aut_dims[d] - M_dims[d] for d in range(bound + 1)]
    tensor_kernel = []
    for d in range(bound + 1):
        tensor_kernel.append(sum(M_dims[i] * kernel[d - i] for i in range(d + 1)))
    kernel_dims = GradedDims(bound, tuple(tensor_kernel))

    holds = all(
        eq_dims[d] == inv.dims[d] + kernel_dims[d] for d in range(bound + 1)
    )
    return RecursionReport(p, bound, eq_dims, inv.dims, kernel_dims, holds)


def _shift_monomial(MM: GradedAlgebra, M: GradedAlgebra, mono):
    """Recast a monomial of M as a monomial of MM in the second copy."""
    k = len(M.generators)
    out = [0] * len(MM.generators)
    for i, e in enumerate(mono):
        out[k + i] = e
    return tuple(out)