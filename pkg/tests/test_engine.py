import random

import pytest

from conngame.constructions import (
    connected_graphs,
    cycle_graph,
    figure2_graph,
    path_graph,
    random_connected_graph,
)
from conngame.engine import (
    ALICE,
    BOB,
    MARKED,
    GameError,
    GameSpec,
    GameState,
    IllegalMove,
    Move,
    apply_move,
    apply_moves,
    check_move,
    legal_moves,
    new_game,
    playable_vertices,
    random_legal_move,
    saturated_vertices,
    state_to_json,
    threatened_vertices,
    vertex_status,
    winner,
)
from conngame.graph import Graph, is_connected

FIG2 = figure2_graph()
COL3 = GameSpec("coloring", True, 3)


def play(g, spec, pairs):
    s = new_game(g, spec)
    for v, c in pairs:
        s = apply_move(s, Move(v, c))
    return s


def test_new_game_examples():
    s = new_game(FIG2, COL3)
    assert s.assignment == {} and s.turn is ALICE
    s = new_game(path_graph(4), GameSpec("marking", True, 2))
    assert s.assignment == {} and not s.spec.coloring
    with pytest.raises(GameError):
        new_game(Graph.from_edges(4, [(0, 1), (2, 3)]), GameSpec("coloring", True, 2))


def test_spec_validation():
    with pytest.raises(GameError):
        GameSpec("coloring", True, 0)
    with pytest.raises(GameError):
        GameSpec("domination", True, 2)


def test_legal_moves_figure2():
    s = new_game(FIG2, COL3)
    assert len(legal_moves(s)) == 18
    s = apply_move(s, Move(0, 1))
    assert playable_vertices(s) == [1, 5]
    assert legal_moves(s) == [Move(1, 2), Move(1, 3), Move(5, 2), Move(5, 3)]


def test_marking_legal_moves_path():
    s = play(path_graph(4), GameSpec("marking", True, 2), [(0, None)])
    assert legal_moves(s) == [Move(1)]


def test_apply_move_examples():
    s = apply_move(new_game(FIG2, COL3), Move(0, 1))
    assert len(s.assignment) == 1 and s.turn is BOB
    with pytest.raises(IllegalMove) as info:
        apply_move(s, Move(3, 1))
    assert info.value.rule == "connectivity"
    m = play(path_graph(3), GameSpec("marking", True, 2), [(1, None)])
    with pytest.raises(IllegalMove) as info:
        apply_move(m, Move(1))
    assert info.value.rule == "occupied"
    with pytest.raises(IllegalMove):
        apply_move(s, Move(1, 1))  # improper
    with pytest.raises(IllegalMove):
        apply_move(s, Move(1, 4))  # color out of range
    with pytest.raises(IllegalMove):
        apply_move(m, Move(0, 1))  # marks carry no color


def test_case_one_saturation():
    s = play(FIG2, COL3, [(0, 1), (1, 2), (5, 3), (2, 1)])
    assert vertex_status(s, 4).saturated
    assert winner(s) is BOB
    assert saturated_vertices(s) == [4]


def test_status_examples():
    s = play(path_graph(3), GameSpec("marking", True, 2), [(1, None)])
    st = vertex_status(s, 0)
    assert st.playable and not st.saturated and not st.threatened
    empty = new_game(FIG2, COL3)
    for v in range(6):
        st = vertex_status(empty, v)
        assert not (st.playable or st.saturated or st.threatened)


def test_threatened_definition():
    star = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)])
    s = play(star, GameSpec("marking", True, 2), [(1, None)])
    assert not vertex_status(s, 0).threatened  # no neighbor of 0 is playable
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    s = play(tri, GameSpec("marking", True, 2), [(0, None)])
    assert threatened_vertices(s) == [1, 2]
    s = apply_move(s, Move(2))
    assert vertex_status(s, 1).saturated and winner(s) is BOB


def test_winner_examples():
    s = play(path_graph(4), GameSpec("coloring", True, 2), [(0, 1), (1, 2), (2, 1), (3, 2)])
    assert winner(s) is ALICE
    assert winner(apply_move(new_game(FIG2, COL3), Move(0, 1))) is None
    assert legal_moves(s) == []


def test_game_over_rejects_moves():
    s = play(FIG2, COL3, [(0, 1), (1, 2), (5, 3), (2, 1)])
    assert check_move(s, Move(3, 2)).startswith("game over")


def test_from_assignment_validation():
    with pytest.raises(GameError):
        GameState.from_assignment(FIG2, COL3, {0: 1, 1: 1})
    with pytest.raises(GameError):
        GameState.from_assignment(FIG2, COL3, {0: 1, 3: 2})
    with pytest.raises(GameError):
        GameState.from_assignment(FIG2, GameSpec("marking", True, 2), {0: 2})
    s = GameState.from_assignment(FIG2, COL3, {0: 1, 1: 2, 5: 3, 2: 1})
    assert winner(s) is BOB


def _reachable(g, spec):
    frontier = [new_game(g, spec, keep_history=False)]
    seen = set()
    while frontier:
        s = frontier.pop()
        key = tuple(sorted(s.assignment.items()))
        if key in seen:
            continue
        seen.add(key)
        yield s
        for m in legal_moves(s):
            frontier.append(apply_move(s, m))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_no_stalemate_without_bob_win(n):
    for g in connected_graphs(n):
        for kind in ("coloring", "marking"):
            for k in (1, 2, 3):
                for s in _reachable(g, GameSpec(kind, True, k)):
                    if 0 < len(s.assignment) < g.n:
                        assert (not legal_moves(s)) == bool(saturated_vertices(s))


def _check_invariants(s):
    g = s.graph
    if s.spec.coloring:
        assert all(s.assignment.get(u) != s.assignment.get(v) or u not in s.assignment
                   for u, v in g.edges())
    else:
        assert set(s.assignment.values()) <= {MARKED}
    if s.spec.connected and s.assignment:
        assert is_connected(g.induced_subgraph(s.assignment)[0])
    assert (s.turn is ALICE) == (s.moves_made % 2 == 0)


def test_random_playouts_preserve_invariants():
    rng = random.Random(7)
    for _ in range(200):
        g = random_connected_graph(rng.randint(2, 9), rng)
        spec = GameSpec(rng.choice(["coloring", "marking"]), rng.random() < 0.7, rng.randint(1, 4))
        s = new_game(g, spec)
        while winner(s) is None:
            s = apply_move(s, random_legal_move(s, rng))
            _check_invariants(s)
        if winner(s) is BOB:
            # saturation cannot be undone by any further assignment
            assert saturated_vertices(s)


def test_bob_cannot_saturate_without_threat():
    rng = random.Random(9)
    checked = 0
    for _ in range(400):
        g = random_connected_graph(rng.randint(3, 9), rng)
        spec = GameSpec("marking", True, rng.randint(2, 4))
        s = new_game(g, spec)
        while winner(s) is None:
            if s.turn is BOB and not threatened_vertices(s):
                checked += 1
                assert all(winner(apply_move(s, m)) is not BOB for m in legal_moves(s))
            s = apply_move(s, random_legal_move(s, rng))
    assert checked > 100


def test_json_and_history():
    s = play(FIG2, COL3, [(0, 1), (1, 2)])
    j = state_to_json(s)
    assert j["moves_made"] == 2 and j["turn"] == "Alice"
    assert j["history"] == [{"vertex": 0, "color": 1}, {"vertex": 1, "color": 2}]
    assert apply_moves(new_game(FIG2, COL3), s.history).assignment == s.assignment


def test_large_graph_random_moves_are_legal():
    g = cycle_graph(400)
    s = new_game(g, GameSpec("coloring", True, 3))
    rng = random.Random(2)
    for _ in range(50):
        if winner(s) is not None:
            break
        m = random_legal_move(s, rng)
        assert check_move(s, m) is None
        s = apply_move(s, m)
