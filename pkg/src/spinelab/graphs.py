"""Half-edge multigraphs: admissibility, forests and forest collapse.

A finite multigraph is stored as a set of darts (half-edges) ``0..2m-1``
together with a fixed-point-free involution ``sigma`` pairing each dart
with its reversal and a map ``target`` sending each dart to the vertex it
points at.  Geometric edges are the involution orbits, so loops and
parallel edges are fully supported and symmetries are free to reverse
edges.  All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

Forest = frozenset  # frozenset of geometric-edge indices


class NotAForestError(ValueError):
    """Raised when an edge set expected to be acyclic contains a cycle."""


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y; return False if already merged."""
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True


@dataclass(frozen=True)
class HalfEdgeGraph:
    """Multigraph as (vertices, darts, involution, attachment).

    ``sigma`` must be a fixed-point-free involution of the dart indices and
    ``target`` a total map from darts to vertices.  The dart pair
    ``{h, sigma[h]}`` is a geometric edge joining ``target[h]`` and
    ``target[sigma[h]]``; both darts of a loop point at the same vertex.
    """

    vertex_count: int
    sigma: tuple
    target: tuple

    def __post_init__(self):
        m = len(self.sigma)
        if len(self.target) != m:
            raise ValueError("sigma and target must have equal length")
        if m % 2 != 0:
            raise ValueError("dart count must be even")
        for h, s in enumerate(self.sigma):
            if not 0 <= s < m or self.sigma[s] != h:
                raise ValueError("sigma is not an involution")
            if s == h:
                raise ValueError("sigma must be fixed-point free")
        for v in self.target:
            if not 0 <= v < self.vertex_count:
                raise ValueError("target vertex out of range")

    @property
    def half_edge_count(self) -> int:
        return len(self.sigma)

    @property
    def edge_count(self) -> int:
        return len(self.sigma) // 2

    @cached_property
    def edges(self) -> tuple:
        """Geometric edges as dart pairs (h, sigma[h]) with h < sigma[h]."""
        return tuple(
            (h, self.sigma[h]) for h in range(len(self.sigma)) if h < self.sigma[h]
        )

    @cached_property
    def dart_edge(self) -> tuple:
        """Map dart index -> geometric edge index."""
        lookup = [0] * len(self.sigma)
        for e, (h1, h2) in enumerate(self.edges):
            lookup[h1] = lookup[h2] = e
        return tuple(lookup)

    def edge_endpoints(self, e: int) -> tuple:
        h1, h2 = self.edges[e]
        return (self.target[h1], self.target[h2])

    def is_loop(self, e: int) -> bool:
        u, v = self.edge_endpoints(e)
        return u == v

    def valence(self, v: int) -> int:
        return sum(1 for t in self.target if t == v)

    def loop_count(self, v: int) -> int:
        return sum(1 for e in range(self.edge_count) if self.edge_endpoints(e) == (v, v))

    @cached_property
    def multiplicity(self) -> tuple:
        """Symmetric vertex-by-vertex edge multiplicity; diagonal counts loops."""
        n = self.vertex_count
        mat = [[0] * n for _ in range(n)]
        for e in range(self.edge_count):
            u, v = self.edge_endpoints(e)
            if u == v:
                mat[u][u] += 1
            else:
                mat[u][v] += 1
                mat[v][u] += 1
        return tuple(tuple(row) for row in mat)

    def degree_multiset(self) -> tuple:
        return tuple(sorted(self.valence(v) for v in range(self.vertex_count)))

    def total_loops(self) -> int:
        return sum(1 for e in range(self.edge_count) if self.is_loop(e))

    def is_connected(self) -> bool:
        if self.vertex_count == 1:
            return True
        ds = DisjointSet(self.vertex_count)
        classes = self.vertex_count
        for e in range(self.edge_count):
            u, v = self.edge_endpoints(e)
            if ds.union(u, v):
                classes -= 1
        return classes == 1

    def to_json(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "half_edges": self.half_edge_count,
            "sigma": list(self.sigma),
            "target": list(self.target),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HalfEdgeGraph":
        g = cls(data["vertices"], tuple(data["sigma"]), tuple(data["target"]))
        if g.half_edge_count != data["half_edges"]:
            raise ValueError("half_edges field inconsistent with sigma length")
        return g

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_graph(vertex_count: int, edge_list: Iterable) -> HalfEdgeGraph:
    """Build a graph from (u, v) endpoint pairs; loops allowed as (v, v).

    Edge i gets darts 2i (pointing at u) and 2i+1 (pointing at v), so the
    geometric edge order matches the input order.
    """
    sigma, target = [], []
    for u, v in edge_list:
        k = len(sigma)
        sigma += [k + 1, k]
        target += [u, v]
    return HalfEdgeGraph(vertex_count, tuple(sigma), tuple(target))


def rank(g: HalfEdgeGraph) -> int:
    """First Betti number: edges - vertices + number of components."""
    ds = DisjointSet(g.vertex_count)
    components = g.vertex_count
    for e in range(g.edge_count):
        u, v = g.edge_endpoints(e)
        if ds.union(u, v):
            components -= 1
    return g.edge_count - g.vertex_count + components


def is_admissible(g: HalfEdgeGraph) -> bool:
    """Connected, every vertex of valency >= 3, and no separating edge."""
    if not g.is_connected():
        return False
    if any(g.valence(v) < 3 for v in range(g.vertex_count)):
        return False
    return not any(_is_bridge(g, e) for e in range(g.edge_count))


def _is_bridge(g: HalfEdgeGraph, e: int) -> bool:
    u, v = g.edge_endpoints(e)
    if u == v:
        return False
    ds = DisjointSet(g.vertex_count)
    for f in range(g.edge_count):
        if f == e:
            continue
        a, b = g.edge_endpoints(f)
        ds.union(a, b)
    return ds.find(u) != ds.find(v)


def is_forest(g: HalfEdgeGraph, edges: Iterable) -> bool:
    ds = DisjointSet(g.vertex_count)
    for e in edges:
        u, v = g.edge_endpoints(e)
        if u == v or not ds.union(u, v):
            return False
    return True


def enumerate_forests(g: HalfEdgeGraph) -> list:
    """All acyclic edge subsets of g, the empty forest included.

    Output is sorted lexicographically on the sorted edge tuples, so the
    result is canonical for a given graph.
    """
    non_loops = [e for e in range(g.edge_count) if not g.is_loop(e)]
    out = []

    def extend(prefix: list, start: int, ds: DisjointSet):
        out.append(frozenset(prefix))
        for i in range(start, len(non_loops)):
            e = non_loops[i]
            u, v = g.edge_endpoints(e)
            if ds.find(u) == ds.find(v):
                continue
            sub = DisjointSet(g.vertex_count)
            sub.parent = list(ds.parent)
            sub.union(u, v)
            extend(prefix + [e], i + 1, sub)

    extend([], 0, DisjointSet(g.vertex_count))
    out.sort(key=lambda f: (len(f), tuple(sorted(f))))
    return out


@dataclass(frozen=True)
class CollapseResult:
    graph: HalfEdgeGraph
    vertex_map: tuple  # old vertex -> new vertex
    dart_map: tuple  # old dart -> new dart, or None for collapsed darts
    edge_map: tuple  # old edge -> new edge, or None for collapsed edges


def collapse_with_maps(g: HalfEdgeGraph, forest: Iterable) -> CollapseResult:
    """Contract each edge of the forest to a point, with relabeling maps.

    Surviving darts keep their relative order and vertices of the quotient
    are numbered by first appearance in the new attachment map, so repeated
    runs are bit-identical.
    """
    forest = sorted(set(forest))
    for e in forest:
        if not 0 <= e < g.edge_count:
            raise ValueError(f"edge index {e} out of range")
    if not is_forest(g, forest):
        raise NotAForestError("cycle detected in forest argument")

    ds = DisjointSet(g.vertex_count)
    for e in forest:
        u, v = g.edge_endpoints(e)
        ds.union(u, v)

    dead = set(forest)
    dart_map = [None] * g.half_edge_count
    kept = [h for h in range(g.half_edge_count) if g.dart_edge[h] not in dead]
    for new, old in enumerate(kept):
        dart_map[old] = new

    # classes numbered by minimal original vertex, so an empty forest
    # collapses to the identical graph
    roots = sorted({ds.find(v) for v in range(g.vertex_count)})
    class_index = {root: i for i, root in enumerate(roots)}
    new_targets = [class_index[ds.find(g.target[old])] for old in kept]

    new_sigma = [0] * len(kept)
    for old in kept:
        new_sigma[dart_map[old]] = dart_map[g.sigma[old]]

    quotient = HalfEdgeGraph(len(class_index), tuple(new_sigma), tuple(new_targets))
    vertex_map = tuple(class_index[ds.find(v)] for v in range(g.vertex_count))
    edge_map = [None] * g.edge_count
    for e in range(g.edge_count):
        if e in dead:
            continue
        h1, _ = g.edges[e]
        edge_map[e] = quotient.dart_edge[dart_map[h1]]
    return CollapseResult(quotient, vertex_map, tuple(dart_map), tuple(edge_map))


def collapse(g: HalfEdgeGraph, forest: Iterable) -> HalfEdgeGraph:
    """Quotient of g by a forest; rank is preserved."""
    return collapse_with_maps(g, forest).graph


def connected_components(g: HalfEdgeGraph) -> list:
    ds = DisjointSet(g.vertex_count)
    for e in range(g.edge_count):
        u, v = g.edge_endpoints(e)
        ds.union(u, v)
    comps: dict = {}
    for v in range(g.vertex_count):
        comps.setdefault(ds.find(v), []).append(v)
    return sorted(comps.values())
