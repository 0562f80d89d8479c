"""Maximal outerplanar completions and their layered trapezoid decomposition.

A connected outerplanar graph is completed to a triangulated polygon ``gm``
with a chosen base edge ``uu'`` on the outer cycle. Layers are BFS distance
classes from ``{u, u'}`` in ``gm``; every within-layer chord (and ``uu'``
itself) roots a trapezoid whose children are the next-layer vertices hanging
below it. The resulting total order and trapezoid table drive the
outerplanar marking strategy.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .graph import (
    Graph,
    GraphError,
    components,
    is_connected,
    is_outerplanar,
    noncrossing_orders,
)

__all__ = [
    "CompletionError",
    "DecompositionError",
    "MaximalOuterplanar",
    "Trapezoid",
    "TrapezoidalDecomposition",
    "TriangleTree",
    "maximal_completion",
    "decompose",
    "pivot_violations",
    "lies_above",
    "triangle_tree",
    "default_outer_edge",
]


class CompletionError(GraphError):
    pass


class DecompositionError(GraphError):
    pass


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class MaximalOuterplanar:
    gm: Graph
    base: Graph
    added_edges: frozenset[tuple[int, int]]
    outer_cycle: tuple[int, ...]
    root_outer_edge: tuple[int, int]

    def validate(self) -> None:
        gm, base, n = self.gm, self.base, self.gm.n
        if base.n != n:
            raise CompletionError("base and completion differ in vertex count")
        for a, b in base.edges():
            if not gm.has_edge(a, b):
                raise CompletionError(f"base edge ({a}, {b}) missing from completion")
        if set(self.added_edges) != set(gm.edges()) - set(base.edges()):
            raise CompletionError("added_edges does not match E(gm) - E(base)")
        u, up = self.root_outer_edge
        if not base.has_edge(u, up):
            raise CompletionError("root outer edge is not a base edge")
        if n >= 3:
            if gm.num_edges != 2 * n - 3:
                raise CompletionError(f"completion has {gm.num_edges} edges, expected {2 * n - 3}")
            cyc = self.outer_cycle
            if sorted(cyc) != list(range(n)):
                raise CompletionError("outer cycle is not a vertex permutation")
            if cyc[:2] != (u, up):
                raise CompletionError("outer cycle must start with the root outer edge")
            for i in range(n):
                if not gm.has_edge(cyc[i], cyc[(i + 1) % n]):
                    raise CompletionError(f"outer cycle side {cyc[i]}-{cyc[(i + 1) % n]} missing")
            pos = {v: i for i, v in enumerate(cyc)}
            chords = [(pos[a], pos[b]) for a, b in gm.edges()]
            for (a, b), (c, d) in itertools.combinations(chords, 2):
                a, b = sorted((a, b))
                c, d = sorted((c, d))
                if a < c < b < d or c < a < d < b:
                    raise CompletionError("completion edges cross in the outer-cycle drawing")


@dataclass(frozen=True)
class Trapezoid:
    parents: tuple[int, int]  # (left, right): left parent is adjacent to children[0]
    children: tuple[int, ...]
    pivot_index: int
    layer: int

    @property
    def pivot(self) -> int:
        return self.children[self.pivot_index]

    @property
    def root_edge(self) -> tuple[int, int]:
        return _edge(*self.parents)


@dataclass(frozen=True)
class TrapezoidalDecomposition:
    completion: MaximalOuterplanar
    layers: tuple[tuple[int, ...], ...]
    trapezoids: tuple[Trapezoid, ...]
    order: tuple[int, ...]
    parent_map: dict[int, tuple[int, int]] = field(hash=False)
    side_neighbors: dict[int, tuple[int | None, int | None]] = field(hash=False)
    layer_of: dict[int, int] = field(hash=False)

    @property
    def root(self) -> tuple[int, int]:
        return self.completion.root_outer_edge

    def rank(self, v: int) -> int:
        return self._rank[v]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_rank", {v: i for i, v in enumerate(self.order)})
        object.__setattr__(self, "_by_edge", {t.root_edge: t for t in self.trapezoids})
        object.__setattr__(
            self, "_child_of", {c: t for t in self.trapezoids for c in t.children}
        )
        object.__setattr__(self, "_pivots", frozenset(t.pivot for t in self.trapezoids))

    def trapezoid(self, a: int, b: int) -> Trapezoid | None:
        return self._by_edge.get(_edge(a, b))

    def trapezoid_of_child(self, w: int) -> Trapezoid | None:
        return self._child_of.get(w)

    def root_edges_of(self, v: int) -> list[Trapezoid]:
        return [t for t in self.trapezoids if v in t.parents]

    def layer_neighbors(self, v: int) -> list[int]:
        """Neighbors of ``v`` in G_m that lie in the same layer (at most two)."""
        gm, i = self.completion.gm, self.layer_of[v]
        return sorted((w for w in gm.adj[v] if self.layer_of[w] == i), key=self.rank)

    def is_pivot(self, v: int) -> bool:
        return v in self._pivots

    def to_json(self) -> dict:
        return {
            "root_edge": list(self.root),
            "outer_cycle": list(self.completion.outer_cycle),
            "added_edges": [list(e) for e in sorted(self.completion.added_edges)],
            "layers": [list(layer) for layer in self.layers],
            "order": list(self.order),
            "trapezoids": [
                {
                    "parents": list(t.parents),
                    "children": list(t.children),
                    "pivot": t.pivot,
                    "pivot_index": t.pivot_index,
                    "layer": t.layer,
                }
                for t in self.trapezoids
            ],
        }


# -- completion -------------------------------------------------------------


def _triangulate(poly: list[int], chords: set[tuple[int, int]], out: set[tuple[int, int]]) -> None:
    """Fan-triangulate a polygon given by cycle positions, respecting fixed chords."""
    if len(poly) <= 3:
        return
    at = {p: i for i, p in enumerate(poly)}
    for a, b in sorted(chords):
        if a in at and b in at:
            i, j = sorted((at[a], at[b]))
            if j - i >= 2 and not (i == 0 and j == len(poly) - 1):
                _triangulate(poly[i : j + 1], chords, out)
                _triangulate(poly[: i + 1] + poly[j:], chords, out)
                return
    for p in poly[2:-1]:
        out.add(_edge(poly[0], p))
    return


def _build(
    base: Graph, cycle: tuple[int, ...], diagonals: frozenset[tuple[int, int]]
) -> MaximalOuterplanar:
    n = base.n
    edges = set(base.edges())
    edges.update(_edge(cycle[i], cycle[(i + 1) % n]) for i in range(n))
    edges.update(_edge(cycle[a], cycle[b]) for a, b in diagonals)
    gm = base.with_edges(sorted(edges))
    added = frozenset(edges - set(base.edges()))
    return MaximalOuterplanar(gm, base, added, cycle, (cycle[0], cycle[1]))


def _flips(
    fixed: frozenset[tuple[int, int]], diagonals: frozenset[tuple[int, int]], n: int
) -> Iterator[frozenset[tuple[int, int]]]:
    """Triangulations one flip away, flipping only non-fixed diagonals (cycle positions)."""
    adj: dict[int, set[int]] = {i: {(i - 1) % n, (i + 1) % n} for i in range(n)}
    for a, b in diagonals:
        adj[a].add(b)
        adj[b].add(a)
    for d in sorted(diagonals - fixed):
        a, b = d
        x, y = sorted(adj[a] & adj[b])
        yield (diagonals - {d}) | {_edge(x, y)}


def maximal_completion(g: Graph, outer_edge: tuple[int, int], max_cycles: int = 500,
                       max_states: int = 50_000) -> MaximalOuterplanar:
    """Complete ``g`` to a maximal outerplanar graph with ``outer_edge`` on the outer cycle.

    Outer cycles are tried in lexicographic order; for each, a fan
    triangulation is repaired by diagonal flips (best-first on the number of
    trapezoids whose pivot has no base edge to its parents) until every pivot
    is base-adjacent to a parent.
    """
    u, up = outer_edge
    if not is_connected(g):
        raise CompletionError("graph is not connected")
    if not (0 <= u < g.n and 0 <= up < g.n) or not g.has_edge(u, up):
        raise CompletionError(f"outer edge ({u}, {up}) is not an edge of the graph")
    n = g.n
    if n == 2:
        return MaximalOuterplanar(g, g, frozenset(), (u, up), (u, up))

    tried = 0
    for order in noncrossing_orders(g, (u, up)):
        tried += 1
        cycle = tuple(order)
        pos = {v: i for i, v in enumerate(cycle)}
        fixed = frozenset(
            _edge(pos[a], pos[b]) for a, b in g.edges() if (pos[a] - pos[b]) % n not in (1, n - 1)
        )
        start: set[tuple[int, int]] = set(fixed)
        _triangulate(list(range(n)), set(fixed), start)
        found = _repair(g, cycle, fixed, frozenset(start), max_states)
        if found is not None:
            m = _build(g, cycle, found)
            m.validate()
            return m
        if tried >= max_cycles:
            break
    if tried == 0:
        if n <= 20 and not is_outerplanar(g):
            raise CompletionError("graph is not outerplanar")
        raise CompletionError(f"edge ({u}, {up}) cannot lie on the outer face of any embedding")
    raise CompletionError(
        f"no completion with base-adjacent pivots found ({tried} outer cycles examined)"
    )


def _repair(
    g: Graph,
    cycle: tuple[int, ...],
    fixed: frozenset[tuple[int, int]],
    start: frozenset[tuple[int, int]],
    max_states: int,
) -> frozenset[tuple[int, int]] | None:
    n = len(cycle)
    counter = itertools.count()
    seen = {start}
    heap = [(_violations(g, cycle, start), next(counter), start)]
    while heap:
        bad, _, diags = heapq.heappop(heap)
        if bad == 0:
            return diags
        for nxt in _flips(fixed, diags, n):
            if nxt in seen:
                continue
            if len(seen) >= max_states:
                return None
            seen.add(nxt)
            heapq.heappush(heap, (_violations(g, cycle, nxt), next(counter), nxt))
    return None


def _violations(g: Graph, cycle: tuple[int, ...], diagonals: frozenset[tuple[int, int]]) -> int:
    m = _build(g, cycle, diagonals)
    return len(pivot_violations(_raw_decompose(m), g))


def default_outer_edge(g: Graph) -> tuple[int, int]:
    """Lowest base edge that can serve as the outer edge of a completion."""
    for e in g.edges():
        if next(noncrossing_orders(g, e), None) is not None:
            return e
    raise CompletionError("no edge of the graph can be an outer edge")


# -- decomposition ----------------------------------------------------------


def _distances(gm: Graph, sources: tuple[int, ...]) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        for y in gm.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _raw_decompose(m: MaximalOuterplanar) -> TrapezoidalDecomposition:
    gm, n = m.gm, m.gm.n
    u, up = m.root_outer_edge
    cyc = m.outer_cycle
    pos = {v: i for i, v in enumerate(cyc)}
    dist = _distances(gm, (u, up))
    depth = max(dist.values())
    # left to right with u on the left: deeper layers read the cycle backwards
    layers = (tuple(m.root_outer_edge),) + tuple(
        tuple(sorted((v for v in range(n) if dist[v] == i), key=lambda v: -pos[v]))
        for i in range(1, depth + 1)
    )
    order = tuple(v for layer in layers for v in layer)

    trapezoids = []
    roots = [(u, up)] + [
        (a, b) for a, b in gm.edges() if dist[a] == dist[b] and _edge(a, b) != _edge(u, up)
    ]
    for a, b in roots:
        i = dist[a]
        common = [w for w in gm.adj[a] & gm.adj[b] if dist[w] == i + 1]
        if not common:
            continue
        if len(common) > 1:
            raise DecompositionError(f"root edge ({a}, {b}) has {len(common)} pivot candidates")
        pa, pb = sorted((pos[a], pos[b]))
        if pa == 0 and pb == 1:
            arc, left, right = range(n - 1, 1, -1), cyc[0], cyc[1]
        elif pa == 0:
            arc, left, right = range(n - 1, pb, -1), cyc[0], cyc[pb]
        else:
            arc, left, right = range(pb - 1, pa, -1), cyc[pb], cyc[pa]
        kids = tuple(
            cyc[p]
            for p in arc
            if dist[cyc[p]] == i + 1 and (gm.has_edge(cyc[p], a) or gm.has_edge(cyc[p], b))
        )
        trapezoids.append(Trapezoid((left, right), kids, kids.index(common[0]), i))
    rank = {v: i for i, v in enumerate(order)}
    trapezoids.sort(key=lambda t: (t.layer, rank[t.parents[0]], rank[t.parents[1]]))

    parent_map: dict[int, tuple[int, int]] = {}
    side: dict[int, tuple[int | None, int | None]] = {}
    for t in trapezoids:
        for j, c in enumerate(t.children):
            if c in parent_map:
                raise DecompositionError(f"vertex {c} is a child of two trapezoids")
            parent_map[c] = t.parents
            side[c] = (
                t.children[j - 1] if j > 0 else None,
                t.children[j + 1] if j + 1 < len(t.children) else None,
            )
    return TrapezoidalDecomposition(m, layers, tuple(trapezoids), order, parent_map, side, dist)


def pivot_violations(d: TrapezoidalDecomposition, base: Graph) -> list[Trapezoid]:
    """Trapezoids whose pivot has no base edge to either parent."""
    return [
        t for t in d.trapezoids if not any(base.has_edge(t.pivot, p) for p in t.parents)
    ]


def decompose(m: MaximalOuterplanar, check_pivots: bool = True) -> TrapezoidalDecomposition:
    """Layered trapezoid decomposition of a maximal outerplanar completion.

    Raises :class:`DecompositionError` naming the offending vertex or edge if
    a structural property fails.
    """
    d = _raw_decompose(m)
    gm = m.gm
    seen = [v for layer in d.layers for v in layer]
    if sorted(seen) != list(range(gm.n)):
        raise DecompositionError("layers do not partition the vertex set")
    if set(d.layers[0]) != set(m.root_outer_edge):
        raise DecompositionError("layer 0 is not the root outer edge")
    for i, layer in enumerate(d.layers):
        members = set(layer)
        sub_edges = [(a, b) for a, b in gm.edges() if a in members and b in members]
        for v in layer:
            if sum(1 for w in gm.adj[v] if w in members) > 2:
                raise DecompositionError(f"layer {i} is not a linear forest at vertex {v}")
        if len(sub_edges) > len(layer) - len(
            components(Graph.from_edges(gm.n, sub_edges).induced_subgraph(layer)[0])
        ):
            raise DecompositionError(f"layer {i} contains a cycle")
    count: dict[int, int] = {}
    for t in d.trapezoids:
        v, vp = t.parents
        for p in t.parents:
            count[p] = count.get(p, 0) + 1
        if not (gm.has_edge(t.pivot, v) and gm.has_edge(t.pivot, vp)):
            raise DecompositionError(f"pivot {t.pivot} of ({v}, {vp}) misses a parent")
        both = [c for c in t.children if gm.has_edge(c, v) and gm.has_edge(c, vp)]
        if both != [t.pivot]:
            raise DecompositionError(f"trapezoid ({v}, {vp}) has pivots {both}")
        for j, c in enumerate(t.children):
            if not (gm.has_edge(c, v) or gm.has_edge(c, vp)):
                raise DecompositionError(f"child {c} is adjacent to neither parent")
            if j and not gm.has_edge(t.children[j - 1], c):
                raise DecompositionError(f"children {t.children[j - 1]}, {c} are not consecutive")
    for v, c in count.items():
        if c > 2:
            raise DecompositionError(f"vertex {v} lies on {c} root edges")
    for i, layer in enumerate(d.layers[1:], start=1):
        for v in layer:
            if v not in d.parent_map:
                raise DecompositionError(f"vertex {v} of layer {i} is nobody's child")
    if check_pivots:
        bad = pivot_violations(d, m.base)
        if bad:
            t = bad[0]
            raise DecompositionError(
                f"pivot {t.pivot} of ({t.parents[0]}, {t.parents[1]}) has no base edge to a parent"
            )
    return d


# -- geometry of the decomposition --------------------------------------------


def lies_above(d: TrapezoidalDecomposition, w1: int, w2: int) -> bool:
    """Whether every shortest path from w2's parents to the root edge meets w1's parents.

    A path "meets" a vertex when it visits it after its starting vertex.
    """
    t1, t2 = d.trapezoid_of_child(w1), d.trapezoid_of_child(w2)
    if t1 is None or t2 is None:
        bad = w1 if t1 is None else w2
        raise DecompositionError(f"vertex {bad} is not a child vertex")
    gm = d.completion.gm
    dist = d.layer_of
    gate = set(t1.parents)
    start_depth = min(dist[s] for s in t2.parents)
    starts = [s for s in t2.parents if dist[s] == start_depth]

    def escapes(x: int) -> bool:
        if dist[x] == 0:
            return True
        return any(
            escapes(y) for y in gm.adj[x] if dist[y] == dist[x] - 1 and y not in gate
        )

    return not any(escapes(s) for s in starts)


@dataclass(frozen=True)
class TriangleTree:
    faces: tuple[tuple[int, int, int], ...]
    edges: tuple[tuple[int, int], ...]


def triangle_tree(m: MaximalOuterplanar) -> TriangleTree:
    gm = m.gm
    if gm.n < 3:
        raise ValueError("triangle tree needs at least 3 vertices")
    faces = tuple(
        (a, b, c)
        for a, b in gm.edges()
        for c in sorted(gm.adj[a] & gm.adj[b])
        if c > b
    )
    index: dict[tuple[int, int], list[int]] = {}
    for i, (a, b, c) in enumerate(faces):
        for e in ((a, b), (a, c), (b, c)):
            index.setdefault(e, []).append(i)
    edges = tuple(sorted(tuple(ids) for ids in index.values() if len(ids) == 2))
    if any(len(ids) > 2 for ids in index.values()):
        raise DecompositionError("an edge borders more than two triangles")
    tree = Graph.from_edges(len(faces), edges)
    if len(edges) != len(faces) - 1 or not is_connected(tree):
        raise DecompositionError("triangle graph is not a tree")
    return TriangleTree(faces, edges)
