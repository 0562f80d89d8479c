"""Independent reference implementations, sharing no code with the package.

Each oracle works from raw edge lists and the game definitions directly, so
agreement with the package is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
from collections import deque

import networkx as nx


def adjacency(n: int, edges) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def minimax_winner(n: int, edges, kind: str, connected: bool, k: int) -> str:
    """Plain game-tree search keyed on the full move history.

    Returns "Alice" or "Bob". Re-derives every rule from the definitions:
    proper colors, connectivity of the assigned set and saturation.
    """
    adj = adjacency(n, edges)
    memo: dict[tuple, bool] = {}

    def saturated(assign: dict[int, int]) -> bool:
        for v in range(n):
            if v in assign:
                continue
            if kind == "coloring":
                if len({assign[w] for w in adj[v] if w in assign}) >= k:
                    return True
            elif sum(1 for w in adj[v] if w in assign) >= k:
                return True
        return False

    def moves(assign):
        for v in range(n):
            if v in assign:
                continue
            if connected and assign and not any(w in assign for w in adj[v]):
                continue
            if kind == "coloring":
                for c in range(1, k + 1):
                    if all(assign.get(w) != c for w in adj[v]):
                        yield v, c
            else:
                yield v, 1

    def alice_wins(history: tuple) -> bool:
        if history in memo:
            return memo[history]
        assign = dict(history)
        if saturated(assign):
            result = False
        elif len(assign) == n:
            result = True
        else:
            alice_turn = len(history) % 2 == 0
            outcomes = (alice_wins(history + (m,)) for m in moves(assign))
            result = any(outcomes) if alice_turn else all(outcomes)
        memo[history] = result
        return result

    return "Alice" if alice_wins(()) else "Bob"


def has_c4_naive(n: int, edges) -> bool:
    """Scan every ordered 4-tuple for a 4-cycle subgraph."""
    adj = adjacency(n, edges)
    for a, b, c, d in itertools.permutations(range(n), 4):
        if b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]:
            return True
    return False


def graph6(n: int, edges) -> bytes:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return nx.to_graph6_bytes(g, header=False).strip()


def girth_bfs(n: int, edges) -> float:
    adj = adjacency(n, edges)
    best = float("inf")
    for s in range(n):
        dist = {s: 0}
        parent = {s: -1}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y], parent[y] = dist[x] + 1, x
                    q.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def all_shortest_paths_meet(n: int, edges, sources, targets, gate) -> bool:
    """Whether every shortest path from ``sources`` to ``targets`` visits ``gate``
    at some vertex after its first one. Enumerates the paths explicitly."""
    adj = adjacency(n, edges)
    dist = {t: 0 for t in targets}
    q = deque(targets)
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    best = min(dist[s] for s in sources)
    paths = [[s] for s in sources if dist[s] == best]
    for _ in range(best):
        paths = [p + [y] for p in paths for y in adj[p[-1]] if dist[y] == dist[p[-1]] - 1]
    return all(any(x in gate for x in p[1:]) for p in paths)


def subsets_in_order(m: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(m), k))


def proper_k_colorable(n: int, edges, k: int) -> bool:
    adj = adjacency(n, edges)
    for cols in itertools.product(range(k), repeat=n):
        if all(cols[u] != cols[v] for u in range(n) for v in adj[u]):
            return True
    return False


def is_outerplanar_nx(n: int, edges) -> bool:
    """Outerplanar iff adding a vertex joined to everything keeps it planar."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    g.add_edges_from((n, v) for v in range(n))
    return nx.check_planarity(g)[0]
