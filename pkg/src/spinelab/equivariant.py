"""Graphs with a symmetry of prime order p: census, moves, expansions.

A ZpGraph is a half-edge graph together with a distinguished symmetry of
order exactly p.  Equivalence is subgroup conjugacy: two pairs are
identified when some graph isomorphism carries one generator to a power
of the other.  The census enumerates quotient data (fixed vertices and
edges plus free p-orbits of each shape) rather than raw graphs, which is
what keeps the search small for p = 5 and 7.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from spinelab.graphs import (
    HalfEdgeGraph,
    build_graph,
    collapse_with_maps,
    is_admissible,
    is_forest,
    rank,
)
from spinelab.symmetry import (
    GraphAutomorphism,
    canonical_form,
    compose,
    dart_isomorphisms,
    edge_permutation,
    identity_automorphism,
    is_automorphism,
    perm_order,
    power,
)


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ZpGraph:
    """A graph with a chosen symmetry of order exactly p.

    A trivial action is allowed only when flagged, for degenerate corners
    of collapse pipelines; everything produced by the census has order
    exactly p.
    """

    graph: HalfEdgeGraph
    action: GraphAutomorphism
    p: int
    trivial: bool = False

    def __post_init__(self):
        if not is_automorphism(self.graph, self.action):
            raise ValueError("action is not an automorphism of the graph")
        order = perm_order(self.action)
        if self.trivial:
            if order != 1:
                raise ValueError("trivial flag set but the action is nontrivial")
        elif order != self.p:
            raise ValueError(f"action has order {order}, expected {self.p}")

    def group(self) -> list:
        """The cyclic group generated by the action, identity first."""
        out = [identity_automorphism(self.graph)]
        current = self.action
        while current != out[0]:
            out.append(current)
            current = compose(self.action, current)
        return out

    def edge_orbits(self) -> list:
        """Orbits of geometric edges, each sorted, in sorted order."""
        ep = edge_permutation(self.graph, self.action)
        seen = set()
        orbits = []
        for e in range(self.graph.edge_count):
            if e in seen:
                continue
            orbit = []
            x = e
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = ep[x]
            orbits.append(tuple(sorted(orbit)))
        return sorted(orbits)

    def free_vertex_orbit_count(self) -> int:
        return sum(1 for v in range(self.graph.vertex_count) if self.action.vperm[v] != v) // self.p

    def fixed_vertex_count(self) -> int:
        return sum(1 for v in range(self.graph.vertex_count) if self.action.vperm[v] == v)

    def to_json(self) -> dict:
        data = self.graph.to_json()
        data["action_vperm"] = list(self.action.vperm)
        data["action_hperm"] = list(self.action.hperm)
        data["p"] = self.p
        return data

    @classmethod
    def from_json(cls, data: dict) -> "ZpGraph":
        graph = HalfEdgeGraph.from_json(data)
        action = GraphAutomorphism(tuple(data["action_vperm"]), tuple(data["action_hperm"]))
        trivial = perm_order(action) == 1
        return cls(graph, action, data["p"], trivial=trivial)


# ---------------------------------------------------------------------------
# equivariant isomorphism


def equivariant_isomorphisms(zg1: ZpGraph, zg2: ZpGraph) -> Iterator:
    """Yield (iso, k) with iso . a1 = a2^k . iso; k runs over units mod p."""
    if zg1.p != zg2.p:
        return
    if zg1.trivial != zg2.trivial:
        return
    if zg1.trivial:
        for iso in dart_isomorphisms(zg1.graph, zg2.graph):
            yield iso, 0
        return
    for k in range(1, zg1.p):
        b = power(zg2.action, k)
        for iso in dart_isomorphisms(zg1.graph, zg2.graph, intertwine=(zg1.action, b)):
            yield iso, k


def equivariant_isomorphic(zg1: ZpGraph, zg2: ZpGraph) -> bool:
    if _equivariant_key(zg1) != _equivariant_key(zg2):
        return False
    for _ in equivariant_isomorphisms(zg1, zg2):
        return True
    return False


def _equivariant_key(zg: ZpGraph) -> tuple:
    """Cheap invariant of the equivalence class, used for bucketing."""
    orbit_sizes = tuple(sorted(len(o) for o in zg.edge_orbits()))
    return (
        canonical_form(zg.graph).data,
        zg.fixed_vertex_count(),
        orbit_sizes,
    )


def dedup_equivariant(items: Iterable) -> list:
    """Representatives of equivariant-isomorphism classes, census order."""
    kept: dict = {}
    for zg in items:
        bucket = kept.setdefault(_equivariant_key(zg), [])
        if not any(equivariant_isomorphic(zg, other) for other in bucket):
            bucket.append(zg)
    out = []
    for k in sorted(kept):
        out.extend(kept[k])
    return out


# ---------------------------------------------------------------------------
# invariant forests, reducedness, equivariant collapse


def invariant_forests(zg: ZpGraph) -> list:
    """All nonempty forests that are unions of edge orbits of the action."""
    orbits = [o for o in zg.edge_orbits() if is_forest(zg.graph, o)]
    out = []

    def extend(prefix: list, start: int):
        if prefix:
            out.append(frozenset(e for o in prefix for e in o))
        for i in range(start, len(orbits)):
            candidate = prefix + [orbits[i]]
            if is_forest(zg.graph, [e for o in candidate for e in o]):
                extend(candidate, i + 1)

    extend([], 0)
    return sorted(out, key=lambda f: (len(f), tuple(sorted(f))))


def is_reduced(zg: ZpGraph) -> bool:
    """No nonempty invariant forest.

    Any invariant forest contains a whole edge orbit and subsets of
    forests are forests, so it is enough that no single orbit is acyclic.
    """
    return not any(is_forest(zg.graph, o) for o in zg.edge_orbits())


def equivariant_collapse(zg: ZpGraph, forest: Iterable) -> ZpGraph:
    """Collapse an invariant forest and transport the action."""
    forest = frozenset(forest)
    ep = edge_permutation(zg.graph, zg.action)
    if {ep[e] for e in forest} != forest:
        raise ValueError("forest is not invariant under the action")
    res = collapse_with_maps(zg.graph, forest)
    n = res.graph.vertex_count
    vperm = [None] * n
    for v in range(zg.graph.vertex_count):
        vperm[res.vertex_map[v]] = res.vertex_map[zg.action.vperm[v]]
    hperm = [None] * res.graph.half_edge_count
    for h in range(zg.graph.half_edge_count):
        if res.dart_map[h] is not None:
            hperm[res.dart_map[h]] = res.dart_map[zg.action.hperm[h]]
    action = GraphAutomorphism(tuple(vperm), tuple(hperm))
    order = perm_order(action)
    return ZpGraph(res.graph, action, zg.p, trivial=(order == 1))


def reduce_zp(zg: ZpGraph) -> ZpGraph:
    """Collapse maximal invariant forests until none remain."""
    current = zg
    while True:
        forests = invariant_forests(current)
        if not forests:
            return current
        biggest = max(forests, key=lambda f: (len(f), tuple(sorted(f))))
        current = equivariant_collapse(current, biggest)


# ---------------------------------------------------------------------------
# census via quotient data

# unit kinds: ("fixed_edge", u, v) one fixed edge: ("bundle", u, v) an orbit
# of p parallel edges between fixed vertices; ("star", u, j) an orbit of p
# edges from fixed u to the vertices of free orbit j; ("orbit_loop", j) a
# loop at each vertex of orbit j; ("chord", j, d) the cycle of chords at
# offset d inside orbit j; ("matching", j1, j2, d) the matching between two
# orbits at offset d.


def _unit_slots(p: int, f: int, m: int, reduced_only: bool) -> list:
    slots = []
    for u in range(f):
        for v in range(u, f):
            if not reduced_only or u == v:
                slots.append(("fixed_edge", u, v))
            slots.append(("bundle", u, v))
    if not reduced_only:
        for u in range(f):
            for j in range(m):
                slots.append(("star", u, j))
    for j in range(m):
        slots.append(("orbit_loop", j))
        for d in range(1, (p - 1) // 2 + 1):
            slots.append(("chord", j, d))
    if not reduced_only:
        for j1 in range(m):
            for j2 in range(j1 + 1, m):
                for d in range(p):
                    slots.append(("matching", j1, j2, d))
    return slots


def _unit_edge_count(p: int, unit) -> int:
    return 1 if unit[0] == "fixed_edge" else p


def _unit_valencies(p: int, f: int, m: int, unit) -> dict:
    """Valency contribution per quotient vertex (fixed index or ('orbit', j))."""
    kind = unit[0]
    out: dict = {}
    if kind == "fixed_edge":
        _, u, v = unit
        out[u] = out.get(u, 0) + (2 if u == v else 1)
        if u != v:
            out[v] = 1
    elif kind == "bundle":
        _, u, v = unit
        out[u] = out.get(u, 0) + (2 * p if u == v else p)
        if u != v:
            out[v] = p
    elif kind == "star":
        _, u, j = unit
        out[u] = p
        out[("orbit", j)] = 1
    elif kind == "orbit_loop":
        out[("orbit", unit[1])] = 2
    elif kind == "chord":
        out[("orbit", unit[1])] = 2
    else:
        _, j1, j2, _ = unit
        out[("orbit", j1)] = 1
        out[("orbit", j2)] = out.get(("orbit", j2), 0) + 1
    return out


def realize_quotient_data(p: int, f: int, m: int, units: Iterable) -> ZpGraph:
    """Build the ZpGraph described by a multiset of units.

    Fixed vertices come first, then each free orbit as a block of p
    consecutive vertices rotated by the action.
    """

    def orbit_vertex(j: int, i: int) -> int:
        return f + j * p + i % p

    edges = []
    orbit_of_edge = []  # (first edge of the orbit, position) for the action
    for unit in units:
        kind = unit[0]
        if kind == "fixed_edge":
            _, u, v = unit
            edges.append((u, v))
            orbit_of_edge.append(None)
        elif kind == "bundle":
            _, u, v = unit
            start = len(edges)
            edges.extend((u, v) for _ in range(p))
            orbit_of_edge.extend((start, i) for i in range(p))
        elif kind == "star":
            _, u, j = unit
            start = len(edges)
            edges.extend((u, orbit_vertex(j, i)) for i in range(p))
            orbit_of_edge.extend((start, i) for i in range(p))
        elif kind == "orbit_loop":
            j = unit[1]
            start = len(edges)
            edges.extend((orbit_vertex(j, i), orbit_vertex(j, i)) for i in range(p))
            orbit_of_edge.extend((start, i) for i in range(p))
        elif kind == "chord":
            _, j, d = unit
            start = len(edges)
            edges.extend((orbit_vertex(j, i), orbit_vertex(j, i + d)) for i in range(p))
            orbit_of_edge.extend((start, i) for i in range(p))
        else:
            _, j1, j2, d = unit
            start = len(edges)
            edges.extend((orbit_vertex(j1, i), orbit_vertex(j2, i + d)) for i in range(p))
            orbit_of_edge.extend((start, i) for i in range(p))

    g = build_graph(f + m * p, edges)
    vperm = list(range(f)) + [
        f + j * p + (i + 1) % p for j in range(m) for i in range(p)
    ]
    hperm = [None] * g.half_edge_count
    for e, tag in enumerate(orbit_of_edge):
        img = e if tag is None else tag[0] + (tag[1] + 1) % p
        h1, h2 = g.edges[e]
        k1, k2 = g.edges[img]
        # darts 2e (first endpoint) and 2e+1 (second endpoint) line up with
        # the image edge's endpoints by construction
        hperm[h1], hperm[h2] = k1, k2
    action = GraphAutomorphism(tuple(vperm), tuple(hperm))
    trivial = perm_order(action) == 1
    return ZpGraph(g, action, p, trivial=trivial)


def _stratum_raw(p: int, v: int, e: int, f: int, m: int, reduced_only: bool) -> Iterator[ZpGraph]:
    """All admissible quotient-data graphs in one (vertices, edges) stratum.

    The slot recursion prunes on valencies: once every slot touching a
    quotient vertex has been decided the vertex must already have valency
    at least 3, and the total valency deficit can never exceed twice the
    remaining edge budget.
    """
    if f + m * p != v:
        return
    slots = _unit_slots(p, f, m, reduced_only)
    sizes = [_unit_edge_count(p, s) for s in slots]
    nkeys = f + m

    def key_index(key):
        return key if isinstance(key, int) else f + key[1]

    contrib = []
    for slot in slots:
        contrib.append(
            [(key_index(k), inc) for k, inc in _unit_valencies(p, f, m, slot).items()]
        )
    last_touch = [-1] * nkeys
    for i, entries in enumerate(contrib):
        for k, _ in entries:
            last_touch[k] = max(last_touch[k], i)
    if any(t < 0 for t in last_touch):
        return
    finalized_at = [[] for _ in slots]
    for k, i in enumerate(last_touch):
        finalized_at[i].append(k)
    # for deficit accounting a free orbit stands for p vertices of its valency
    weight = [1] * f + [p] * m

    def deficit(val) -> int:
        return sum(weight[k] * max(0, 3 - val[k]) for k in range(nkeys))

    def rec(i: int, remaining: int, val: list, counts: list):
        if i == len(slots):
            if remaining == 0:
                units = []
                for slot, c in zip(slots, counts):
                    units.extend([slot] * c)
                zg = realize_quotient_data(p, f, m, units)
                if not zg.trivial and is_admissible(zg.graph):
                    yield zg
            return
        for c in range(remaining // sizes[i] + 1):
            nval = list(val)
            for k, inc in contrib[i]:
                nval[k] += inc * c
            if any(nval[k] < 3 for k in finalized_at[i]):
                continue
            left = remaining - c * sizes[i]
            if deficit(nval) > 2 * left:
                continue
            yield from rec(i + 1, left, nval, counts + [c])

    yield from rec(0, e, [0] * nkeys, [])


def enumerate_zp_graphs(p: int, n: int, max_edges: int, candidate_cap: int = 200_000) -> list:
    """Equivariant-isomorphism classes of admissible rank-n graphs with an
    order-p symmetry, within the edge budget."""
    if max_edges > 3 * n - 3:
        raise BudgetExceeded(f"edge budget {max_edges} exceeds 3*rank-3 = {3 * n - 3}")
    found = []
    count = 0
    for e in range(n, max_edges + 1):
        v = e - n + 1
        for m in range(v // p + 1):
            f = v - m * p
            for zg in _stratum_raw(p, v, e, f, m, reduced_only=False):
                if rank(zg.graph) != n:
                    continue
                found.append(zg)
                count += 1
                if count > candidate_cap:
                    raise BudgetExceeded(
                        f"candidate cap {candidate_cap} hit at {count} graphs"
                    )
    return dedup_equivariant(found)


def classify_reduced(p: int) -> list:
    """All reduced classes of rank 2(p-1), up to equivariant isomorphism.

    For p = 3 the rank-4 census is small enough to filter directly.  For
    p > 3 a reduced graph admits no fixed non-loop edge, star orbit or
    matching orbit (each is an invariant forest on its own), so free
    vertex orbits would be disconnected from the fixed part and a
    vertex-free action would force 1 - 2(p-1) = 0 mod p, i.e. p = 3;
    the census therefore runs on all-vertices-fixed quotient data only.
    """
    n = 2 * (p - 1)
    if p == 3:
        return _classify_reduced_rank4()
    out = []
    v = 1
    while True:
        e = n + v - 1
        # with all vertices fixed the only connecting units are p-edge
        # bundles, so a connected graph needs at least p(v-1) edges
        if e > 3 * n - 3 or p * (v - 1) > e:
            break
        for zg in _stratum_raw(p, v, e, v, 0, reduced_only=True):
            if rank(zg.graph) == n and is_reduced(zg):
                out.append(zg)
        v += 1
    return dedup_equivariant(out)


def _classify_reduced_rank4() -> list:
    from spinelab.spine import match_names, singular_graphs
    from spinelab.symmetry import elements_of_order, inverse

    out = []
    for cls in match_names(singular_graphs(3, 4)):
        order3 = elements_of_order(cls.aut, 3)
        subgroup_reps = []
        seen = set()
        for a in order3:
            key = tuple(sorted((a.hperm, power(a, 2).hperm)))
            if key in seen:
                continue
            # mark the whole conjugacy class of the subgroup <a>
            for g in cls.aut.elements:
                conj = compose(compose(g, a), inverse(g))
                seen.add(tuple(sorted((conj.hperm, power(conj, 2).hperm))))
            subgroup_reps.append(a)
        for a in subgroup_reps:
            zg = ZpGraph(cls.graph, a, 3)
            if is_reduced(zg):
                out.append(zg)
    return dedup_equivariant(out)


# ---------------------------------------------------------------------------
# Nielsen transformations


@dataclass(frozen=True)
class NielsenMove:
    dart: int  # the dart being re-attached (e1)
    along: int  # the dart it slides along (e2)
    result: ZpGraph


def nielsen_moves_for_group(graph: HalfEdgeGraph, group: list) -> list:
    """All moves <e1, e2> of a finite symmetry group acting on the graph.

    Defined on reduced graphs only.  The pair must satisfy: e2 lies
    outside the orbits of e1 and of its reversal, both darts point at the
    same vertex, and every group element fixing e1 fixes e2.  The move
    re-attaches the orbit of e1 so that g.e1 points at the source of
    g.e2.
    """
    if not _reduced_for_group(graph, group):
        raise ValueError("moves are defined on reduced graphs only")
    moves = []
    sigma = graph.sigma
    target = graph.target
    orbits = {}
    for h in range(graph.half_edge_count):
        orbits[h] = {g.hperm[h] for g in group}
    for e1 in range(graph.half_edge_count):
        stab1 = [g for g in group if g.hperm[e1] == e1]
        excluded = orbits[e1] | orbits[sigma[e1]]
        for e2 in range(graph.half_edge_count):
            if e2 in excluded or target[e1] != target[e2]:
                continue
            if any(g.hperm[e2] != e2 for g in stab1):
                continue
            new_target = list(target)
            for g in group:
                new_target[g.hperm[e1]] = target[sigma[g.hperm[e2]]]
            moved = HalfEdgeGraph(graph.vertex_count, sigma, tuple(new_target))
            moves.append((e1, e2, moved))
    return moves


def _reduced_for_group(graph: HalfEdgeGraph, group: list) -> bool:
    """No edge orbit of the group forms a forest."""
    perms = [edge_permutation(graph, g) for g in group]
    seen = set()
    for e in range(graph.edge_count):
        if e in seen:
            continue
        orbit = {ep[e] for ep in perms}
        seen |= orbit
        if is_forest(graph, orbit):
            return False
    return True


def nielsen_moves(zg: ZpGraph) -> list:
    """Moves of the cyclic group generated by the action."""
    out = []
    for e1, e2, moved in nielsen_moves_for_group(zg.graph, zg.group()):
        result = ZpGraph(moved, zg.action, zg.p, trivial=zg.trivial)
        out.append(NielsenMove(e1, e2, result))
    return out


def nielsen_closure(zg: ZpGraph, step_cap: int = 10_000) -> list:
    """Classes reachable by moves followed by reduction, the start included."""
    start = reduce_zp(zg)
    classes = [start]
    queue = [start]
    steps = 0
    while queue:
        current = queue.pop(0)
        for move in nielsen_moves(current):
            steps += 1
            if steps > step_cap:
                raise BudgetExceeded("nielsen closure exceeded the step cap")
            candidate = reduce_zp(move.result)
            if not any(equivariant_isomorphic(candidate, c) for c in classes):
                classes.append(candidate)
                queue.append(candidate)
    return classes


# ---------------------------------------------------------------------------
# equivariant expansions (blow-ups)


def minimal_invariant_forests(zg: ZpGraph) -> list:
    """Invariant forests that are a single edge orbit (fixed or free)."""
    return [
        frozenset(o) for o in zg.edge_orbits() if is_forest(zg.graph, o)
    ]


def equivariant_expansions(zg: ZpGraph, edge_budget: int) -> list:
    """Admissible blow-ups of zg along one fixed edge or one edge orbit.

    Returns (ZpGraph, forest) pairs up to equivalence; collapsing the
    forest of each pair is equivariantly isomorphic to zg.  Contracting a
    single fixed edge keeps the number of free vertex orbits, while
    contracting a star or matching orbit lowers it by one, so only two
    strata can contain candidates.
    """
    p = zg.p
    v, e = zg.graph.vertex_count, zg.graph.edge_count
    m = zg.free_vertex_orbit_count()
    strata = []
    if e + 1 <= edge_budget:
        strata.append((v + 1, e + 1, v + 1 - m * p, m))
    if e + p <= edge_budget:
        strata.append((v + p, e + p, v + p - (m + 1) * p, m + 1))

    pairs = []
    for (vv, ee, ff, mm) in strata:
        if ff < 0:
            continue
        for candidate in _stratum_raw(p, vv, ee, ff, mm, reduced_only=False):
            if rank(candidate.graph) != rank(zg.graph):
                continue
            for forest in minimal_invariant_forests(candidate):
                if len(forest) not in (1, p):
                    continue
                collapsed = equivariant_collapse(candidate, forest)
                if equivariant_isomorphic(collapsed, zg):
                    pairs.append((candidate, forest))
    return _dedup_expansion_pairs(pairs)


def _dedup_expansion_pairs(pairs: list) -> list:
    kept = []
    for zg, forest in pairs:
        duplicate = False
        for other, oforest in kept:
            if _pairs_equivalent(zg, forest, other, oforest):
                duplicate = True
                break
        if not duplicate:
            kept.append((zg, forest))
    return kept


def _pairs_equivalent(zg1: ZpGraph, f1, zg2: ZpGraph, f2) -> bool:
    if _equivariant_key(zg1) != _equivariant_key(zg2) or len(f1) != len(f2):
        return False
    for iso, _ in equivariant_isomorphisms(zg1, zg2):
        ep = tuple(zg2.graph.dart_edge[iso.hperm[h1]] for h1, _ in zg1.graph.edges)
        if frozenset(ep[e] for e in f1) == frozenset(f2):
            return True
    return False
