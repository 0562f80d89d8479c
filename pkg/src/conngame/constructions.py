"""Generators and validators for the graph families used by the games."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .graph import (
    Graph,
    GraphError,
    bipartition,
    canonical_form,
    girth,
    is_c4_free,
    is_connected,
)
from .outerplanar import MaximalOuterplanar

__all__ = [
    "figure2_graph",
    "knn_minus_matching",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "complete_bipartite",
    "fan_graph",
    "is_prime",
    "projective_plane_incidence",
    "GkMetadata",
    "gk_construction",
    "validate_gk",
    "parse_apex_policy",
    "enumerate_maximal_outerplanar",
    "random_maximal_outerplanar",
    "random_spanning_outerplanar",
    "random_connected_graph",
    "random_connected_bipartite",
    "connected_graphs",
    "dedup_isomorphic",
    "catalan",
]

FIGURE2_EDGES = ((1, 2), (2, 4), (1, 4), (1, 5), (1, 0), (2, 3), (3, 4), (4, 5), (5, 0))


def figure2_graph() -> Graph:
    """Outerplanar graph on v0..v5 whose connected game chromatic number is 4."""
    return Graph.from_edges(6, FIGURE2_EDGES, [f"v{i}" for i in range(6)])


def knn_minus_matching(n: int) -> Graph:
    """K_{n,n} minus a perfect matching: a_i = i, b_i = n + i, edges a_i b_j for i != j."""
    if n < 2:
        raise GraphError("K_{n,n} minus a matching needs n >= 2")
    edges = [(i, n + j) for i in range(n) for j in range(n) if i != j]
    labels = [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)]
    return Graph.from_edges(2 * n, edges, labels)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def fan_graph(n: int) -> Graph:
    """The n-cycle 0..n-1 triangulated by chords from vertex 0."""
    if n < 3:
        raise GraphError("fans need at least 3 vertices")
    edges = [(i, (i + 1) % n) for i in range(n)] + [(0, j) for j in range(2, n - 1)]
    return Graph.from_edges(n, edges)


# -- projective planes ----------------------------------------------------------


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


def _pg_points(q: int) -> list[tuple[int, int, int]]:
    """Normalized homogeneous triples: the first nonzero coordinate is 1."""
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, b) for b in range(q)]
    pts.append((0, 0, 1))
    return pts


def projective_plane_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q); points are 0..N-1, lines N..2N-1."""
    if not is_prime(q):
        raise GraphError(f"q = {q} is not prime (prime powers are not supported)")
    pts = _pg_points(q)
    n = len(pts)
    edges = [
        (i, n + j)
        for i, p in enumerate(pts)
        for j, line in enumerate(pts)
        if (p[0] * line[0] + p[1] * line[1] + p[2] * line[2]) % q == 0
    ]
    labels = [f"p{i}" for i in range(n)] + [f"L{j}" for j in range(n)]
    return Graph.from_edges(2 * n, edges, labels)


# -- the bipartite construction with apexes over k-subsets of lines -----------


def parse_apex_policy(policy: str | None) -> int | None:
    """``"full"`` -> None; ``"capped:N"`` -> N."""
    if policy in (None, "full"):
        return None
    if isinstance(policy, str) and policy.startswith("capped:"):
        try:
            limit = int(policy.split(":", 1)[1])
        except ValueError:
            raise GraphError(f"bad apex policy {policy!r}") from None
        if limit < 1:
            raise GraphError("capped apex policy needs a limit of at least 1")
        return limit
    raise GraphError(f"apex policy must be 'full' or 'capped:N', got {policy!r}")


def _subset_rank(sub: Sequence[int], m: int, k: int) -> int:
    """Position of a sorted k-subset of range(m) in itertools.combinations order."""
    return math.comb(m, k) - 1 - sum(math.comb(m - 1 - c, k - i) for i, c in enumerate(sub))


def _subset_unrank(rank: int, m: int, k: int) -> tuple[int, ...]:
    out = []
    c = 0
    for i in range(k):
        while True:
            block = math.comb(m - 1 - c, k - 1 - i)
            if rank < block:
                break
            rank -= block
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


@dataclass(frozen=True)
class GkMetadata:
    """Layout of the construction: A = points, B = lines, then one apex per chosen subset.

    Apex ids start at ``2N`` and follow lexicographic order of the subsets of
    B (as sorted vertex ids), so both directions of the apex map are
    computed arithmetically.
    """

    k: int
    q: int
    side: int  # N = q^2 + q + 1
    apex_count: int
    apex_limit: int | None

    @property
    def apex_policy(self) -> str:
        return "full" if self.apex_limit is None else f"capped:{self.apex_limit}"

    @property
    def A(self) -> range:
        return range(0, self.side)

    @property
    def B(self) -> range:
        return range(self.side, 2 * self.side)

    @property
    def apex_offset(self) -> int:
        return 2 * self.side

    @property
    def n(self) -> int:
        return self.apex_offset + self.apex_count

    def is_apex(self, v: int) -> bool:
        return v >= self.apex_offset

    def in_A(self, v: int) -> bool:
        return 0 <= v < self.side

    def in_B(self, v: int) -> bool:
        return self.side <= v < self.apex_offset

    def apex_of(self, subset) -> int | None:
        """Apex adjacent to exactly ``subset`` (B vertex ids), if it exists."""
        sub = sorted(subset)
        if len(sub) != self.k or len(set(sub)) != self.k or not all(self.in_B(b) for b in sub):
            raise GraphError(f"{subset!r} is not a {self.k}-subset of B")
        rank = _subset_rank([b - self.side for b in sub], self.side, self.k)
        return self.apex_offset + rank if rank < self.apex_count else None

    def subset_of(self, apex: int) -> tuple[int, ...]:
        if not self.apex_offset <= apex < self.n:
            raise GraphError(f"vertex {apex} is not an apex")
        rel = _subset_unrank(apex - self.apex_offset, self.side, self.k)
        return tuple(self.side + c for c in rel)

    def apex_items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        subsets = itertools.combinations(self.B, self.k)
        for i, sub in enumerate(itertools.islice(subsets, self.apex_count)):
            yield sub, self.apex_offset + i

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "q": self.q,
            "side": self.side,
            "A": [self.A.start, self.A.stop],
            "B": [self.B.start, self.B.stop],
            "apex_offset": self.apex_offset,
            "apex_count": self.apex_count,
            "apex_policy": self.apex_policy,
        }


def gk_construction(k: int, q: int, apex_policy: str = "full",
                    validate: bool = True) -> tuple[Graph, GkMetadata]:
    """Incidence graph of PG(2, q) plus apexes over k-subsets of the lines."""
    if k < 3:
        raise GraphError("the construction needs k >= 3")
    if q + 1 < k * k:
        raise GraphError(f"q + 1 = {q + 1} is below k^2 = {k * k}")
    limit = parse_apex_policy(apex_policy)
    h = projective_plane_incidence(q)
    side = h.n // 2
    total = math.comb(side, k)
    count = total if limit is None else min(limit, total)
    meta = GkMetadata(k, q, side, count, limit)

    nbrs: list[set[int]] = [set(s) for s in h.adj]
    apex_adj = []
    for sub, apex in meta.apex_items():
        apex_adj.append(frozenset(sub))
        for b in sub:
            nbrs[b].add(apex)
    adj = tuple(frozenset(s) for s in nbrs) + tuple(apex_adj)
    g = Graph(meta.n, adj)
    if validate:
        validate_gk(g, meta, h)
    return g, meta


def validate_gk(g: Graph, meta: GkMetadata, h: Graph | None = None) -> None:
    """Raise GraphError unless every structural invariant of the construction holds."""
    k, side = meta.k, meta.side
    if g.n != meta.n:
        raise GraphError(f"vertex count {g.n} does not match metadata ({meta.n})")
    if h is None:
        h, _ = g.induced_subgraph(range(2 * side))
    if not is_c4_free(h):
        raise GraphError("the point-line graph contains a 4-cycle")
    for v in range(2 * side):
        deg = sum(1 for w in g.adj[v] if w < 2 * side)
        if deg < k * k:
            raise GraphError(f"vertex {v} has degree {deg} < k^2 in the point-line graph")
        if any(meta.in_A(w) == meta.in_A(v) for w in g.adj[v] if w < 2 * side):
            raise GraphError(f"vertex {v} has a neighbor on its own side")
    for v in meta.A:
        if any(meta.is_apex(w) for w in g.adj[v]):
            raise GraphError(f"point {v} is adjacent to an apex")
    for apex in range(meta.apex_offset, meta.n):
        sub = meta.subset_of(apex)
        if g.adj[apex] != frozenset(sub):
            raise GraphError(f"apex {apex} does not have neighborhood {sub}")
    total = math.comb(side, k)
    if meta.apex_limit is None and meta.apex_count != total:
        raise GraphError(f"full policy covers {meta.apex_count} of {total} subsets")
    if not is_connected(g):
        raise GraphError("construction is not connected")


# -- polygon triangulations -------------------------------------------------------


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def _chords(i: int, j: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Diagonal sets triangulating the polygon i, i+1, ..., j (closed by edge ij)."""
    if j - i < 2:
        yield ()
        return
    for m in range(i + 1, j):
        here = tuple(e for e in ((i, m), (m, j)) if e[1] - e[0] > 1)
        for left in _chords(i, m):
            for right in _chords(m, j):
                yield here + left + right


def _package(n: int, diagonals: Sequence[tuple[int, int]]) -> MaximalOuterplanar:
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)] + list(diagonals)
    gm = Graph.from_edges(n, edges)
    return MaximalOuterplanar(gm, gm, frozenset(), tuple(range(n)), (0, 1))


def enumerate_maximal_outerplanar(n: int) -> Iterator[MaximalOuterplanar]:
    """Every triangulation of the labeled convex n-gon (Catalan(n-2) of them)."""
    if not 3 <= n <= 12:
        raise GraphError("triangulation enumeration supports 3 <= n <= 12")
    for diags in _chords(0, n - 1):
        yield _package(n, diags)


def _sample_chords(i: int, j: int, rng: random.Random, out: list) -> None:
    if j - i < 2:
        return
    # pick the apex over edge ij with probability proportional to the triangulation counts
    weights = [catalan(m - i - 1) * catalan(j - m - 1) for m in range(i + 1, j)]
    m = rng.choices(range(i + 1, j), weights)[0]
    out.extend(e for e in ((i, m), (m, j)) if e[1] - e[0] > 1)
    _sample_chords(i, m, rng, out)
    _sample_chords(m, j, rng, out)


def random_maximal_outerplanar(n: int, rng: random.Random) -> MaximalOuterplanar:
    """Uniformly random triangulation of the labeled convex n-gon."""
    if n < 3:
        raise GraphError("triangulations need n >= 3")
    diags: list[tuple[int, int]] = []
    _sample_chords(0, n - 1, rng, diags)
    return _package(n, diags)


def _random_spanning_tree(n: int, edges: list[tuple[int, int]], rng: random.Random):
    order = list(edges)
    rng.shuffle(order)
    root = list(range(n))

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    tree, rest = [], []
    for u, v in order:
        a, b = find(u), find(v)
        if a != b:
            root[a] = b
            tree.append((u, v))
        else:
            rest.append((u, v))
    return tree, rest


def random_spanning_outerplanar(g: Graph, rng: random.Random, keep: float | None = None) -> Graph:
    """Random connected spanning subgraph: a random spanning tree plus a random share of the rest."""
    tree, rest = _random_spanning_tree(g.n, g.edges(), rng)
    p = rng.random() if keep is None else keep
    extra = [e for e in sorted(rest) if rng.random() < p]
    return g.with_edges(sorted(tree + extra))


def random_connected_graph(n: int, rng: random.Random, p: float | None = None) -> Graph:
    p = rng.random() if p is None else p
    tree = [(rng.randrange(i), i) for i in range(1, n)]
    present = set(tree)
    extra = [e for e in itertools.combinations(range(n), 2) if e not in present and rng.random() < p]
    return Graph.from_edges(n, tree + extra)


def random_connected_bipartite(n: int, rng: random.Random, p: float | None = None) -> Graph:
    """Random connected bipartite graph on n >= 2 vertices with both sides nonempty."""
    if n < 2:
        raise GraphError("need at least 2 vertices")
    side = [0, 1] + [rng.randrange(2) for _ in range(n - 2)]
    rng.shuffle(side)
    p = rng.random() if p is None else p
    first = {s: next(v for v in range(n) if side[v] == s) for s in (0, 1)}
    tree = {tuple(sorted((first[0], first[1])))}
    placed = [first[0], first[1]]
    for v in range(n):
        if v in first.values():
            continue
        w = rng.choice([x for x in placed if side[x] != side[v]])
        tree.add((min(v, w), max(v, w)))
        placed.append(v)
    cross = [(u, v) for u, v in itertools.combinations(range(n), 2) if side[u] != side[v]]
    edges = sorted(tree | {e for e in cross if e not in tree and rng.random() < p})
    return Graph.from_edges(n, edges)


def connected_graphs(n: int) -> Iterator[Graph]:
    """All connected graphs on n <= 7 vertices up to isomorphism (graph atlas order)."""
    if not 1 <= n <= 7:
        raise GraphError("exhaustive enumeration covers 1 <= n <= 7")
    from networkx.generators.atlas import graph_atlas_g

    for h in graph_atlas_g():
        if h.number_of_nodes() != n:
            continue
        g = Graph.from_edges(n, [(min(a, b), max(a, b)) for a, b in h.edges()])
        if is_connected(g):
            yield g


def dedup_isomorphic(graphs) -> list[Graph]:
    """First representative of each isomorphism class, in input order."""
    seen: set = set()
    out = []
    for g in graphs:
        key = canonical_form(g)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def describe_family_checks(g: Graph) -> dict:
    """Predicate summary used by the ``generate`` command."""
    parts = bipartition(g)
    return {
        "connected": is_connected(g),
        "bipartite": parts is not None,
        "c4_free": is_c4_free(g) if g.n <= 5000 else None,
        "girth": None if g.n > 5000 else (None if girth(g) == math.inf else int(girth(g))),
    }
