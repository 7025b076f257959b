"""Census of admissible graphs and the cell structure of their collapse poset.

Vertices of the complex built here are isomorphism classes of admissible
graphs of a fixed rank whose symmetry group contains an element of prime
order p.  A k-cell is an orbit of a strictly nested chain of nonempty
forests on a top graph, kept when the subgroup preserving every forest of
the chain setwise still contains an element of order p.  Faces drop one
forest from the chain, or re-root the chain at the smallest collapse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from spinelab import catalog, linalg
from spinelab.graphs import (
    HalfEdgeGraph,
    collapse_with_maps,
    enumerate_forests,
    is_admissible,
    rank,
)
from spinelab.symmetry import (
    AutGroup,
    automorphism_group,
    automorphism_order,
    canonical_form,
    canonical_graph,
    dart_isomorphisms,
    graph_signature,
    realize_multiplicity,
    sylow_p_order,
)


class ResourceCapExceeded(RuntimeError):
    """Enumeration hit the configured cap; the message reports progress."""


class NameAmbiguityError(RuntimeError):
    """A census class could not be matched to a unique catalog name."""


# ---------------------------------------------------------------------------
# admissible census


def _degree_sequences(v: int, total: int):
    """Non-increasing sequences of length v, entries >= 3, summing to total."""

    def rec(prefix, remaining, cap):
        slots = v - len(prefix)
        if slots == 0:
            if remaining == 0:
                yield tuple(prefix)
            return
        for d in range(min(cap, remaining - 3 * (slots - 1)), 2, -1):
            yield from rec(prefix + [d], remaining - d, d)

    yield from rec([], total, total)


def _multiplicity_assignments(degrees):
    """All (loops, upper multiplicities) with the prescribed valencies."""
    v = len(degrees)

    def rec(i, used, rows):
        if i == v:
            yield rows
            return
        rem = degrees[i] - used[i]
        if rem < 0:
            return
        for loops in range(rem // 2 + 1):
            budget = rem - 2 * loops
            for split in _compositions(budget, [degrees[j] - used[j] for j in range(i + 1, v)]):
                new_used = list(used)
                for k, m in enumerate(split):
                    new_used[i + 1 + k] += m
                yield from rec(i + 1, new_used, rows + [(loops, split)])

    yield from rec(0, [0] * v, [])


def _compositions(total, caps):
    if not caps:
        if total == 0:
            yield ()
        return
    for first in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - first, caps[1:]):
            yield (first,) + rest


def enumerate_admissible(n: int, class_cap: int = 100_000) -> list:
    """All isomorphism classes of admissible graphs of rank n.

    Generation runs over the feasible vertex/edge strata (an admissible
    rank-n graph has between n and 3n-3 edges), deduplicating by canonical
    form; the returned representatives are canonical graphs sorted by
    (edges, vertices, form).
    """
    if n < 2:
        raise ValueError("rank must be >= 2")
    seen = {}
    for e in range(n, 3 * n - 2):
        v = e - n + 1
        for degrees in _degree_sequences(v, 2 * e):
            for rows in _multiplicity_assignments(list(degrees)):
                loops = [r[0] for r in rows]
                lower = [[0] * i for i in range(v)]
                for i, (_, split) in enumerate(rows):
                    for k, m in enumerate(split):
                        lower[i + 1 + k][i] = m
                g = realize_multiplicity(loops, lower)
                if not is_admissible(g):
                    continue
                form = canonical_form(g)
                if form not in seen:
                    seen[form] = canonical_graph(g)
                    if len(seen) > class_cap:
                        raise ResourceCapExceeded(
                            f"more than {class_cap} classes at rank {n}; "
                            f"stopped inside the {e}-edge stratum"
                        )
    out = sorted(
        seen.items(), key=lambda kv: (kv[1].edge_count, kv[1].vertex_count, kv[0].data)
    )
    return [g for _, g in out]


@dataclass(frozen=True)
class GraphClass:
    graph: HalfEdgeGraph
    aut: AutGroup
    name: Optional[str] = None

    @property
    def aut_order(self) -> int:
        return self.aut.order


def singular_graphs(p: int, n: int) -> list:
    """Admissible rank-n classes with a symmetry of order p, as GraphClass.

    Existence of an order-p element is equivalent to p dividing the group
    order (Cauchy), so the filter runs on orders before materializing any
    group elements.
    """
    out = []
    for g in enumerate_admissible(n):
        if automorphism_order(g) % p == 0:
            out.append(GraphClass(g, automorphism_group(g)))
    return out


def match_names(classes: list) -> list:
    """Attach the rank-4 report label to each singular class.

    Matching goes through the signature (vertices, edges, loops, degree
    multiset, group order) and is then confirmed against the catalog
    construction by canonical form; any tie or failed confirmation is a
    hard error rather than a guess.
    """
    table = {}
    for name, make in catalog.RANK4_SINGULAR.items():
        g = make()
        sig = graph_signature(g) + (automorphism_order(g),)
        if sig in table:
            raise NameAmbiguityError(f"catalog signature collision on {name}")
        table[sig] = (name, canonical_form(g))

    named = []
    for cls in classes:
        sig = graph_signature(cls.graph) + (cls.aut_order,)
        if sig not in table:
            raise NameAmbiguityError(f"no catalog name with signature {sig}")
        name, form = table[sig]
        if canonical_form(cls.graph) != form:
            raise NameAmbiguityError(
                f"signature of {name} matched but the graphs are not isomorphic"
            )
        named.append(GraphClass(cls.graph, cls.aut, name))
    if len({c.name for c in named}) != len(named):
        raise NameAmbiguityError("two census classes received the same name")
    return named


# ---------------------------------------------------------------------------
# cells of the quotient of the singular locus


@dataclass(frozen=True)
class QuotientCell:
    index: int
    dim: int
    graph_index: int
    chain: tuple  # strictly decreasing forests on the top graph
    isotropy_order: int
    isotropy: tuple  # the stabilizing subgroup, as GraphAutomorphism list
    faces: tuple  # cell indices, ordered by omitted-vertex position


@dataclass
class QuotientComplex:
    p: int
    rank: int
    classes: list  # GraphClass, census order
    cells: list  # QuotientCell, sorted by (dim, graph_index, chain)
    component_of: list  # cell index -> component id
    component_count: int

    def cells_of_dim(self, d: int) -> list:
        return [c for c in self.cells if c.dim == d]

    def cell_vertex_names(self, cell: QuotientCell) -> list:
        """Names of the cell's vertices, most-collapsed first, top last."""
        names = []
        for forest in cell.chain:
            res = collapse_with_maps(self.classes[cell.graph_index].graph, forest)
            names.append(self._class_name_of(res.graph))
        names.append(self.classes[cell.graph_index].name)
        return names

    def _class_name_of(self, g: HalfEdgeGraph) -> str:
        form = canonical_form(g)
        for cls in self.classes:
            if canonical_form(cls.graph) == form:
                return cls.name
        raise KeyError("graph is not a census class")

    def component_vertex_counts(self) -> list:
        counts = [0] * self.component_count
        for cell in self.cells:
            if cell.dim == 0:
                counts[self.component_of[cell.index]] += 1
        return counts

    def component_containing(self, name: str) -> int:
        for cell in self.cells:
            if cell.dim == 0 and self.classes[cell.graph_index].name == name:
                return self.component_of[cell.index]
        raise KeyError(name)


def _chain_key(chain) -> tuple:
    return tuple(tuple(sorted(f)) for f in chain)


def _chain_orbit_rep(chain, edge_perms) -> tuple:
    """Key-minimal translate of the chain under the listed edge actions."""
    best = None
    for ep in edge_perms:
        moved = tuple(frozenset(ep[e] for e in f) for f in chain)
        key = _chain_key(moved)
        if best is None or key < best[0]:
            best = (key, moved)
    return best[1]


def _chain_stabilizer(chain, aut: AutGroup, edge_perms) -> list:
    stab = []
    sets = [set(f) for f in chain]
    for a, ep in zip(aut.elements, edge_perms):
        if all({ep[e] for e in f} == s for f, s in zip(chain, sets)):
            stab.append(a)
    return stab


def _cells_for_class(p: int, cls: GraphClass):
    """Orbit representatives of singular forest chains on one top graph.

    Chains are grown by appending strictly smaller nonempty forests; the
    stabilizer of an extension sits inside the stabilizer of its prefix,
    so only singular representatives need extending.
    """
    out: dict = {0: {}}
    if cls.aut_order % p != 0:
        return out
    eperms = cls.aut.edge_perms()
    out[0][()] = ((), tuple(cls.aut.elements))

    frontier = {}
    for f in enumerate_forests(cls.graph):
        if not f:
            continue
        rep = _chain_orbit_rep((f,), eperms)
        rkey = _chain_key(rep)
        if rkey in frontier:
            continue
        stab = _chain_stabilizer(rep, cls.aut, eperms)
        if len(stab) % p == 0:
            frontier[rkey] = (rep, tuple(stab))
    level = 1
    while frontier:
        out[level] = dict(sorted(frontier.items()))
        nxt = {}
        for _, (chain, _) in sorted(frontier.items()):
            for sub in _proper_nonempty_subsets(chain[-1]):
                rep = _chain_orbit_rep(chain + (sub,), eperms)
                rkey = _chain_key(rep)
                if rkey in nxt:
                    continue
                stab = _chain_stabilizer(rep, cls.aut, eperms)
                if len(stab) % p == 0:
                    nxt[rkey] = (rep, tuple(stab))
        frontier = nxt
        level += 1
    return out


def _proper_nonempty_subsets(forest):
    items = sorted(forest)
    n = len(items)
    for mask in range(1, (1 << n) - 1):
        yield frozenset(items[i] for i in range(n) if mask >> i & 1)


def enumerate_cells(p: int, n: int, dim: int, classes: Optional[list] = None) -> list:
    """The dim-cells of the quotient complex, without face data."""
    complex_ = quotient_complex(p, n, classes)
    return complex_.cells_of_dim(dim)


def quotient_complex(p: int, n: int, classes: Optional[list] = None) -> QuotientComplex:
    """Assemble cells of every dimension, their faces and components."""
    if classes is None:
        classes = singular_graphs(p, n)
        if n == 4:
            classes = match_names(classes)
    per_class = [_cells_for_class(p, cls) for cls in classes]

    cells = []
    lookup = {}
    max_dim = 2 * n - 3
    top_level = max(max(levels) for levels in per_class) if per_class else 0
    if top_level > max_dim:
        raise RuntimeError("cell above the dimension bound of the complex")
    for dim in range(0, top_level + 1):
        for gi, levels in enumerate(per_class):
            for key, (chain, stab) in levels.get(dim, {}).items():
                index = len(cells)
                lookup[(gi, key)] = index
                cells.append(
                    QuotientCell(index, dim, gi, chain, len(stab), tuple(stab), ())
                )

    forms = [canonical_form(cls.graph) for cls in classes]
    form_index = {f.data: i for i, f in enumerate(forms)}
    eperms_cache = [cls.aut.edge_perms() for cls in classes]

    def locate(gi: int, chain) -> int:
        rep = _chain_orbit_rep(chain, eperms_cache[gi])
        return lookup[(gi, _chain_key(rep))]

    finished = []
    for cell in cells:
        if cell.dim == 0:
            finished.append(cell)
            continue
        faces = []
        k = cell.dim
        for omit in range(k + 1):
            if omit < k:
                sub = cell.chain[:omit] + cell.chain[omit + 1 :]
                faces.append(locate(cell.graph_index, sub))
            else:
                faces.append(_rerooted_face(classes, form_index, eperms_cache, lookup, cell))
        finished.append(
            QuotientCell(
                cell.index,
                cell.dim,
                cell.graph_index,
                cell.chain,
                cell.isotropy_order,
                cell.isotropy,
                tuple(faces),
            )
        )

    component_of, count = _components(finished)
    return QuotientComplex(p, n, list(classes), finished, component_of, count)


def _rerooted_face(classes, form_index, eperms_cache, lookup, cell: QuotientCell) -> int:
    """Face omitting the top vertex: collapse by the smallest forest.

    The remaining forests are pushed through the collapse, the collapsed
    graph is identified with its census representative, and the chain is
    transported along one isomorphism before orbit normalization.
    """
    top = classes[cell.graph_index].graph
    smallest = cell.chain[-1]
    res = collapse_with_maps(top, smallest)
    new_chain = [
        frozenset(res.edge_map[e] for e in f if res.edge_map[e] is not None)
        for f in cell.chain[:-1]
    ]
    gi = form_index[canonical_form(res.graph).data]
    rep_graph = classes[gi].graph
    iso = next(dart_isomorphisms(res.graph, rep_graph))
    eperm = tuple(
        rep_graph.dart_edge[iso.hperm[h1]] for h1, _ in res.graph.edges
    )
    moved = tuple(frozenset(eperm[e] for e in f) for f in new_chain)
    rep = _chain_orbit_rep(moved, eperms_cache[gi])
    return lookup[(gi, _chain_key(rep))]


def _components(cells: list):
    from spinelab.graphs import DisjointSet

    ds = DisjointSet(len(cells))
    for cell in cells:
        for f in cell.faces:
            ds.union(cell.index, f)
    roots = sorted({ds.find(i) for i in range(len(cells))})
    root_id = {r: i for i, r in enumerate(roots)}
    return [root_id[ds.find(i)] for i in range(len(cells))], len(roots)


# ---------------------------------------------------------------------------
# homology of a quotient component over F_p


def component_homology(complex_: QuotientComplex, component: int, p: int) -> list:
    """Reduced homology dimensions of one component of the quotient.

    The component is a CW complex whose boundary maps are the alternating
    sums of face cells, so the reduced homology is plain linear algebra
    over F_p.  Index d of the result is the dimension of reduced H_d.
    """
    ids = [c.index for c in complex_.cells if complex_.component_of[c.index] == component]
    by_dim: dict = {}
    for i in ids:
        by_dim.setdefault(complex_.cells[i].dim, []).append(i)
    max_dim = max(by_dim)
    pos = {i: k for d in by_dim for k, i in enumerate(sorted(by_dim[d]))}

    boundaries = {}
    # augmentation in dimension 0
    boundaries[0] = [[1 for _ in sorted(by_dim[0])]]
    for d in range(1, max_dim + 1):
        rows = len(by_dim.get(d - 1, []))
        mat = [[0] * len(by_dim[d]) for _ in range(rows)]
        for col, i in enumerate(sorted(by_dim[d])):
            for omit, f in enumerate(complex_.cells[i].faces):
                mat[pos[f]][col] = (mat[pos[f]][col] + (-1) ** omit) % p
        boundaries[d] = mat

    dims = []
    for d in range(0, max_dim + 1):
        mat = boundaries[d]
        cols = len(by_dim.get(d, []))
        rank_d = linalg.rank(mat, p) if mat and mat[0] else 0
        kernel = cols - rank_d
        nxt = boundaries.get(d + 1)
        rank_next = linalg.rank(nxt, p) if nxt and nxt[0] else 0
        dims.append(kernel - rank_next)
    return dims


# ---------------------------------------------------------------------------
# corpus persistence and table verification


def corpus_json(complex_: QuotientComplex) -> dict:
    return {
        "p": complex_.p,
        "rank": complex_.rank,
        "graphs": [
            {
                "name": cls.name,
                "graph": cls.graph.to_json(),
                "aut_order": cls.aut_order,
                "sylow_p_order": sylow_p_order(cls.aut, complex_.p),
            }
            for cls in complex_.classes
        ],
        "cells": [
            {
                "dim": cell.dim,
                "top_name": complex_.classes[cell.graph_index].name,
                "forests": [sorted(f) for f in cell.chain],
                "isotropy_order": cell.isotropy_order,
                "faces": list(cell.faces),
            }
            for cell in complex_.cells
        ],
    }


def cell_rows(complex_: QuotientComplex, dim: int) -> list:
    """(vertex names top-first, isotropy order) per cell, report style."""
    rows = []
    for cell in complex_.cells_of_dim(dim):
        names = complex_.cell_vertex_names(cell)
        rows.append((tuple(reversed(names)), cell.isotropy_order))
    return sorted(rows)


def verify_expected_tables(complex_: QuotientComplex, expected: dict) -> list:
    """Compare a computed complex against the expected-census fixture.

    Returns a list of discrepancy strings; empty means every table row is
    reproduced exactly.
    """
    problems = []
    got_graphs = sorted(
        (cls.name, cls.graph.vertex_count, cls.graph.edge_count, cls.aut_order)
        for cls in complex_.classes
    )
    want_graphs = sorted(
        (r["name"], r["vertices"], r["edges"], r["aut_order"])
        for r in expected["graphs"]
    )
    if got_graphs != want_graphs:
        problems.append(f"graph census mismatch: {got_graphs} != {want_graphs}")

    for dim_key, dim in (("one_cells", 1), ("two_cells", 2), ("three_cells", 3)):
        got = sorted(cell_rows(complex_, dim))
        want = sorted(
            (tuple(r["cell"]), r["isotropy_order"]) for r in expected[dim_key]
        )
        if got != want:
            problems.append(f"{dim_key} mismatch:\n got {got}\n want {want}")

    want_components = sorted(
        tuple(sorted(c["vertices"])) for c in expected["components"]
    )
    got_components: dict = {}
    for cell in complex_.cells:
        if cell.dim == 0:
            got_components.setdefault(complex_.component_of[cell.index], []).append(
                complex_.classes[cell.graph_index].name
            )
    got_list = sorted(tuple(sorted(v)) for v in got_components.values())
    if got_list != want_components:
        problems.append(f"components mismatch: {got_list} != {want_components}")
    return problems
