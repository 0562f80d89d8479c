"""Simple undirected graphs on dense integer vertex ids, with I/O and basic predicates."""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "SizeLimitError",
    "parse_graph",
    "write_graph",
    "read_graph",
    "is_connected",
    "components",
    "bipartition",
    "odd_cycle",
    "chromatic_number_exact",
    "is_c4_free",
    "girth",
    "is_outerplanar",
    "noncrossing_orders",
    "has_minor",
    "canonical_form",
    "are_isomorphic",
]

DESK_SCALE = 20


class GraphError(ValueError):
    """Invalid graph structure (loop, duplicate edge, out-of-range vertex)."""


class ParseError(GraphError):
    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.offset = offset


class SizeLimitError(GraphError):
    """The graph is larger than the exhaustive routine accepts."""


@dataclass(frozen=True, eq=True)
class Graph:
    """Immutable simple graph. ``adj[v]`` is the neighbor set of vertex ``v``."""

    n: int
    adj: tuple[frozenset[int], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise GraphError(f"adjacency has {len(self.adj)} entries for n={self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label count does not match n")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise GraphError(f"self-loop at vertex {v}")
            for w in nbrs:
                if not 0 <= w < self.n:
                    raise GraphError(f"neighbor {w} of {v} out of range")
                if v not in self.adj[w]:
                    raise GraphError(f"asymmetric adjacency between {v} and {w}")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None
    ) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs), tuple(labels) if labels else None)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, tuple(frozenset() for _ in range(n)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    # -- basic queries -------------------------------------------------

    @cached_property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(s) for s in self.adj), default=0)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted((len(s) for s in self.adj), reverse=True))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbor sets as integer bitmasks, for the search code."""
        out = []
        for nbrs in self.adj:
            m = 0
            for w in nbrs:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    @cached_property
    def _sorted_adj(self) -> dict[int, tuple[int, ...]]:
        return {}

    def sorted_neighbors(self, v: int) -> tuple[int, ...]:
        cache = self._sorted_adj
        if v not in cache:
            cache[v] = tuple(sorted(self.adj[v]))
        return cache[v]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    # -- derived graphs ------------------------------------------------

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph relabeled to 0..len-1; also returns new->old vertex map."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        labels = [self.label(v) for v in keep] if self.labels else None
        return Graph.from_edges(len(keep), edges, labels), keep

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        """Same vertex set, given edge set."""
        return Graph.from_edges(self.n, edges, self.labels)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(write_graph(self, "graph6")).hexdigest()[:16]


# -- serialization ---------------------------------------------------------

FORMATS = ("edge-list", "graph6")


def parse_graph(text: bytes | str, fmt: str = "edge-list") -> Graph:
    """Parse ``text`` in ``edge-list`` or ``graph6`` format."""
    if isinstance(text, str):
        text = text.encode()
    if fmt == "edge-list":
        return _parse_edge_list(text)
    if fmt == "graph6":
        return _parse_graph6(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def write_graph(g: Graph, fmt: str = "edge-list") -> bytes:
    if fmt == "edge-list":
        lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "graph6":
        return _encode_graph6(g) + b"\n"
    raise ValueError(f"unknown graph format {fmt!r}")


def read_graph(path: str, fmt: str | None = None) -> Graph:
    if fmt is None:
        fmt = "graph6" if path.endswith((".g6", ".graph6")) else "edge-list"
    with open(path, "rb") as fh:
        return parse_graph(fh.read(), fmt)


def _parse_edge_list(data: bytes) -> Graph:
    lines = data.decode("ascii", errors="replace").splitlines()
    records = []
    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            records.append((lineno, body.split()))
    if not records:
        raise ParseError("missing vertex-count header", line=1)
    lineno, head = records[0]
    if len(head) != 1 or not head[0].isdigit():
        raise ParseError(f"malformed header {' '.join(head)!r}", line=lineno)
    n = int(head[0])
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for lineno, parts in records[1:]:
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"expected 'u v', got {' '.join(parts)!r}", line=lineno)
        u, v = int(parts[0]), int(parts[1])
        if u >= n or v >= n:
            raise ParseError(f"vertex index out of range for n={n}", line=lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        if v in nbrs[u]:
            raise ParseError(f"duplicate edge ({u}, {v})", line=lineno)
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(frozenset(s) for s in nbrs))


_G6_HEADER = b">>graph6<<"


def _parse_graph6(data: bytes) -> Graph:
    start = len(_G6_HEADER) if data.startswith(_G6_HEADER) else 0
    body = data[start:].rstrip(b"\r\n")
    for i, byte in enumerate(body):
        if not 63 <= byte <= 126:
            raise ParseError(f"invalid graph6 character {byte!r}", offset=start + i)
    if not body:
        raise ParseError("empty graph6 string", offset=start)
    if body[0] != 126:
        n, pos = body[0] - 63, 1
    elif len(body) >= 2 and body[1] != 126:
        if len(body) < 4:
            raise ParseError("truncated graph6 size field", offset=start)
        n, pos = _g6_int(body[1:4]), 4
    else:
        if len(body) < 8:
            raise ParseError("truncated graph6 size field", offset=start)
        n, pos = _g6_int(body[2:8]), 8
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(body) - pos != nbytes:
        raise ParseError(
            f"expected {nbytes} data bytes for n={n}, found {len(body) - pos}",
            offset=start + min(len(body), pos + nbytes),
        )
    nbrs: list[set[int]] = [set() for _ in range(n)]
    bit = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[pos + bit // 6] - 63
            if byte >> (5 - bit % 6) & 1:
                nbrs[i].add(j)
                nbrs[j].add(i)
            bit += 1
    if nbits % 6:
        last = body[pos + nbytes - 1] - 63
        if last & ((1 << (6 - nbits % 6)) - 1):
            raise ParseError("nonzero graph6 padding bits", offset=start + pos + nbytes - 1)
    return Graph(n, tuple(frozenset(s) for s in nbrs))


def _g6_int(chunk: bytes) -> int:
    value = 0
    for byte in chunk:
        value = (value << 6) | (byte - 63)
    return value


def _encode_graph6(g: Graph) -> bytes:
    n = g.n
    if n <= 62:
        out = bytearray([n + 63])
    elif n <= 258047:
        out = bytearray([126] + [(n >> s & 63) + 63 for s in (12, 6, 0)])
    else:
        out = bytearray([126, 126] + [(n >> s & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    acc = nacc = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (i in row)
            nacc += 1
            if nacc == 6:
                out.append(acc + 63)
                acc = nacc = 0
    if nacc:
        out.append((acc << (6 - nacc)) + 63)
    return bytes(out)


# -- connectivity and bipartiteness -----------------------------------------


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    # cached on the instance: connected games re-ask this for every new game
    cached = g.__dict__.get("_connected")
    if cached is None:
        cached = g.n <= 1 or len(components(g)) == 1
        g.__dict__["_connected"] = cached
    return cached


def _two_color(g: Graph) -> tuple[list[int], list[int | None], tuple[int, int] | None]:
    side = [-1] * g.n
    parent: list[int | None] = [None] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in sorted(g.adj[x]):
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    parent[y] = x
                    queue.append(y)
                elif side[y] == side[x]:
                    return side, parent, (x, y)
    return side, parent, None


def bipartition(g: Graph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Proper 2-partition (A, B); the lowest vertex of each component lands in A.

    Returns None for non-bipartite graphs; see :func:`odd_cycle` for a witness.
    """
    side, _, conflict = _two_color(g)
    if conflict is not None:
        return None
    a = frozenset(v for v in range(g.n) if side[v] == 0)
    return a, frozenset(range(g.n)) - a


def odd_cycle(g: Graph) -> list[int] | None:
    """An odd cycle as a vertex sequence, or None if ``g`` is bipartite."""
    _, parent, conflict = _two_color(g)
    if conflict is None:
        return None
    x, y = conflict

    def to_root(v: int) -> list[int]:
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    px, py = to_root(x), to_root(y)
    on_py = {v: i for i, v in enumerate(py)}
    for i, v in enumerate(px):
        if v in on_py:
            return px[: i + 1] + py[: on_py[v]][::-1]
    raise AssertionError("BFS tree paths share no root")


# -- exact parameters -------------------------------------------------------


def chromatic_number_exact(g: Graph, limit: int = DESK_SCALE) -> int:
    """Exact chromatic number by backtracking k-colorability tests."""
    if g.n > limit:
        raise SizeLimitError(f"chromatic_number_exact refuses n={g.n} > {limit}")
    if g.n == 0:
        return 0
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    k = 1 if g.num_edges == 0 else 2
    while not _colorable(g, order, k):
        k += 1
    return k


def _colorable(g: Graph, order: list[int], k: int) -> bool:
    color = [0] * g.n

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        taken = {color[w] for w in g.adj[v]}
        # a fresh color beyond used+1 is equivalent to used+1
        for c in range(1, min(k, used + 1) + 1):
            if c not in taken:
                color[v] = c
                if place(i + 1, max(used, c)):
                    return True
        color[v] = 0
        return False

    return place(0, 0)


def is_c4_free(g: Graph) -> bool:
    """No two vertices share two common neighbors."""
    seen: set[tuple[int, int]] = set()
    for w in range(g.n):
        nbrs = sorted(g.adj[w])
        for pair in itertools.combinations(nbrs, 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


def girth(g: Graph) -> float:
    """Length of a shortest cycle (``inf`` for forests), by BFS from every vertex."""
    best = float("inf")
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


# -- outerplanarity ---------------------------------------------------------


def noncrossing_orders(g: Graph, prefix: Sequence[int] = (0,)) -> Iterator[list[int]]:
    """Yield cyclic vertex orders, starting with ``prefix``, in which no two edges cross.

    Drawing the vertices on a circle in such an order gives an outerplanar
    embedding, so for n >= 3 these are exactly the Hamiltonian outer cycles of
    the maximal outerplanar supergraphs of ``g``. Orders are produced in
    lexicographic order; dead partial states are memoized.
    """
    n = g.n
    masks = g.masks
    dead: set[tuple[int, tuple[int, ...]]] = set()

    def push(placed: int, frontier: tuple[int, ...], x: int) -> tuple[int, ...] | None:
        # frontier: placed, not enclosed, still with unplaced neighbors, in order
        placed |= 1 << x
        nb = masks[x]
        cut = next((i for i, c in enumerate(frontier) if nb >> c & 1), None)
        if cut is not None:
            for c in frontier[cut + 1 :]:
                if masks[c] & ~placed:
                    return None
            frontier = frontier[: cut + 1]
        kept = tuple(c for c in frontier if masks[c] & ~placed)
        if masks[x] & ~placed:
            kept += (x,)
        return kept

    placed, frontier = 0, ()
    for x in prefix:
        if placed >> x & 1:
            raise GraphError("prefix repeats a vertex")
        nxt = push(placed, frontier, x)
        if nxt is None:
            return
        placed, frontier = placed | 1 << x, nxt
    seq = list(prefix)
    full = (1 << n) - 1

    def extend(placed: int, frontier: tuple[int, ...]) -> Iterator[list[int]]:
        if placed == full:
            yield list(seq)
            return
        key = (placed, frontier)
        if key in dead:
            return
        found = False
        for x in range(n):
            if placed >> x & 1:
                continue
            nxt = push(placed, frontier, x)
            if nxt is None:
                continue
            seq.append(x)
            for order in extend(placed | 1 << x, nxt):
                found = True
                yield order
            seq.pop()
        if not found:
            dead.add(key)

    yield from extend(placed, frontier)


def is_outerplanar(g: Graph, limit: int = DESK_SCALE) -> bool:
    """True iff ``g`` has an outerplanar embedding (no K4 or K2,3 minor).

    Decided by searching for a circular vertex order with pairwise
    non-crossing edges; :func:`has_minor` gives the minor-based reading.
    """
    if g.n > limit:
        raise SizeLimitError(f"is_outerplanar refuses n={g.n} > {limit}")
    if g.n <= 3:
        return True
    if g.num_edges > 2 * g.n - 3:
        return False
    return next(noncrossing_orders(g), None) is not None


def has_minor(g: Graph, h: Graph, limit: int = 9) -> bool:
    """Brute-force minor test by vertex deletion and edge contraction."""
    if g.n > limit:
        raise SizeLimitError(f"has_minor refuses n={g.n} > {limit}")
    h_edges = h.edges()
    seen: set[tuple[frozenset[int], frozenset[tuple[int, int]]]] = set()

    def contains(vs: frozenset[int], es: frozenset[tuple[int, int]]) -> bool:
        for image in itertools.permutations(sorted(vs)):
            if all((min(image[a], image[b]), max(image[a], image[b])) in es for a, b in h_edges):
                return True
        return False

    def rec(vs: frozenset[int], es: frozenset[tuple[int, int]]) -> bool:
        if len(vs) < h.n or len(es) < len(h_edges):
            return False
        key = (vs, es)
        if key in seen:
            return False
        seen.add(key)
        if len(vs) == h.n:
            return contains(vs, es)
        for v in sorted(vs):
            if rec(vs - {v}, frozenset(e for e in es if v not in e)):
                return True
        for a, b in sorted(es):
            merged = set()
            for x, y in es:
                x = a if x == b else x
                y = a if y == b else y
                if x != y:
                    merged.add((min(x, y), max(x, y)))
            if rec(vs - {b}, frozenset(merged)):
                return True
        return False

    return rec(frozenset(range(g.n)), frozenset(g.edges()))


# -- canonical forms --------------------------------------------------------


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition."""
    while True:
        cell_of = {}
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                counts = [0] * len(cells)
                for w in g.adj[v]:
                    counts[cell_of[w]] += 1
                sig.setdefault(tuple(counts), []).append(v)
            for key in sorted(sig):
                new_cells.append(sig[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def canonical_form(g: Graph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Isomorphism-invariant certificate by individualization/refinement."""
    best: list[tuple[tuple[int, int], ...] | None] = [None]

    def search(cells: list[list[int]]) -> None:
        cells = _refine(g, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            pos = {cell[0]: i for i, cell in enumerate(cells)}
            cert = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges()))
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        for v in cells[target]:
            rest = [w for w in cells[target] if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1 :])

    if g.n:
        by_degree: dict[int, list[int]] = {}
        for v in range(g.n):
            by_degree.setdefault(g.degree(v), []).append(v)
        search([by_degree[d] for d in sorted(by_degree)])
    return g.n, best[0] or ()


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.num_edges == h.num_edges and canonical_form(g) == canonical_form(h)
