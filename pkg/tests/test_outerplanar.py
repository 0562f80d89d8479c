import random
from collections import deque

import pytest

import oracles
from conngame.constructions import (
    catalan,
    enumerate_maximal_outerplanar,
    fan_graph,
    path_graph,
    random_maximal_outerplanar,
    random_spanning_outerplanar,
)
from conngame.graph import Graph, is_outerplanar
from conngame.outerplanar import (
    CompletionError,
    DecompositionError,
    decompose,
    lies_above,
    maximal_completion,
    pivot_violations,
    triangle_tree,
)


def all_triangulations(n_max):
    for n in range(3, n_max + 1):
        yield from enumerate_maximal_outerplanar(n)


def bfs_layers(gm, root):
    dist = {v: 0 for v in root}
    q = deque(root)
    while q:
        x = q.popleft()
        for y in gm.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def check_decomposition(d, base):
    m = d.completion
    gm = m.gm
    m.validate()
    dist = bfs_layers(gm, m.root_outer_edge)
    assert d.layers[0] == tuple(m.root_outer_edge)
    seen = [v for layer in d.layers for v in layer]
    assert sorted(seen) == list(range(gm.n))
    assert list(d.order) == seen
    for i, layer in enumerate(d.layers):
        assert all(dist[v] == i for v in layer)
        layer_set = set(layer)
        # linear forest: max degree 2 and acyclic inside the layer
        inner = [(a, b) for a, b in gm.edges() if a in layer_set and b in layer_set]
        assert all(sum(v in e for e in inner) <= 2 for v in layer)
        assert len(inner) < len(layer)
    children_count = {}
    for t in d.trapezoids:
        a, b = t.parents
        assert gm.has_edge(a, b)
        both = [c for c in t.children if gm.has_edge(c, a) and gm.has_edge(c, b)]
        assert both == [t.pivot]
        assert all(gm.has_edge(c, a) or gm.has_edge(c, b) for c in t.children)
        assert all(d.layer_of[c] == t.layer + 1 for c in t.children)
        assert gm.has_edge(t.children[0], a)
        for c in t.children:
            children_count[c] = children_count.get(c, 0) + 1
    assert pivot_violations(d, base) == []
    assert all(children_count.get(v) == 1 for v in range(gm.n) if d.layer_of[v] > 0)
    for v in range(gm.n):
        roots = d.root_edges_of(v)
        assert len(roots) <= 2
        if not roots and gm.n >= 3:
            assert len(gm.adj[v]) <= 4


def test_fan_decomposition_u_left():
    g = fan_graph(5)
    m = maximal_completion(g, (0, 1))
    assert m.added_edges == frozenset()
    d = decompose(m)
    assert d.layers == ((0, 1), (4, 3, 2))
    assert d.order == (0, 1, 4, 3, 2)
    assert len(d.trapezoids) == 1
    t = d.trapezoids[0]
    assert t.parents == (0, 1) and t.children == (4, 3, 2) and t.pivot == 2


def test_single_edge_and_triangle():
    d = decompose(maximal_completion(path_graph(2), (0, 1)))
    assert d.layers == ((0, 1),) and d.trapezoids == ()
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    m = maximal_completion(tri, (0, 1))
    assert m.added_edges == frozenset()
    d = decompose(m)
    assert d.layers == ((0, 1), (2,))
    assert d.trapezoids[0].pivot == 2


def test_path_completion():
    g = path_graph(4)
    m = maximal_completion(g, (0, 1))
    m.validate()
    assert m.gm.num_edges == 5
    assert set(g.edges()) <= set(m.gm.edges())
    assert is_outerplanar(m.gm)
    n = 4
    assert all(m.gm.has_edge(m.outer_cycle[i], m.outer_cycle[(i + 1) % n]) for i in range(n))


def test_completion_errors():
    with pytest.raises(CompletionError):
        maximal_completion(path_graph(3), (0, 2))
    k4 = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    with pytest.raises(CompletionError):
        maximal_completion(k4, (0, 1))


@pytest.mark.parametrize("n", range(3, 11))
def test_every_triangulation_decomposes(n):
    count = 0
    for m in enumerate_maximal_outerplanar(n):
        check_decomposition(decompose(m), m.base)
        tree = triangle_tree(m)
        assert len(tree.faces) == n - 2 and len(tree.edges) == n - 3
        count += 1
    assert count == catalan(n - 2)


def test_random_spanning_subgraph_completions():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(3, 10)
        g = random_spanning_outerplanar(random_maximal_outerplanar(n, rng).gm, rng)
        e = next(e for e in g.edges() if _try(g, e))
        m = maximal_completion(g, e)
        check_decomposition(decompose(m), g)


def _try(g, e):
    try:
        maximal_completion(g, e)
        return True
    except CompletionError:
        return False


def test_completion_is_deterministic():
    rng = random.Random(3)
    g = random_spanning_outerplanar(random_maximal_outerplanar(9, rng).gm, rng)
    e = g.edges()[0]
    if _try(g, e):
        assert maximal_completion(g, e) == maximal_completion(g, e)


def test_triangle_tree_examples():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    t = triangle_tree(maximal_completion(tri, (0, 1)))
    assert len(t.faces) == 1 and t.edges == ()
    k4e = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    t = triangle_tree(maximal_completion(k4e, (0, 1)))
    assert len(t.faces) == 2 and len(t.edges) == 1
    t = triangle_tree(maximal_completion(fan_graph(5), (0, 1)))
    degrees = sorted(sum(i in e for e in t.edges) for i in range(3))
    assert degrees == [1, 1, 2]


def test_lies_above_against_path_enumeration():
    checked = true_cases = 0
    for m in all_triangulations(8):
        d = decompose(m)
        gm = m.gm
        kids = [v for v in range(gm.n) if d.layer_of[v] > 0]
        for w1 in kids:
            g1 = set(d.trapezoid_of_child(w1).parents)
            for w2 in kids:
                src = d.trapezoid_of_child(w2).parents
                want = oracles.all_shortest_paths_meet(
                    gm.n, gm.edges(), src, m.root_outer_edge, g1
                )
                got = lies_above(d, w1, w2)
                assert got == want, (gm.edges(), w1, w2)
                checked += 1
                true_cases += got
    assert checked > 5000 and 0 < true_cases < checked


def test_lies_above_examples():
    # zigzag triangulation: a layer-2 trapezoid hangs below the root trapezoid
    m = next(m for m in enumerate_maximal_outerplanar(7) if len(decompose(m).layers) >= 3)
    d = decompose(m)
    w1 = d.layers[1][0]
    deep = [t for t in d.trapezoids if t.layer == 1]
    w2 = deep[0].children[0]
    assert lies_above(d, w1, w2)
    assert not lies_above(d, w2, w1)
    same = d.trapezoids[0].children
    if len(same) >= 2:
        assert not lies_above(d, same[0], same[1])


def test_lies_above_rejects_non_children():
    d = decompose(maximal_completion(fan_graph(5), (0, 1)))
    with pytest.raises(DecompositionError):
        lies_above(d, 0, 2)


def test_decomposition_json_shape():
    j = decompose(maximal_completion(fan_graph(5), (0, 1))).to_json()
    assert j["order"] == [0, 1, 4, 3, 2]
    assert j["trapezoids"][0]["pivot"] == 2
