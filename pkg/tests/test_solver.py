import itertools
import random

import pytest

import oracles
from conngame.constructions import (
    complete_graph,
    connected_graphs,
    cycle_graph,
    figure2_graph,
    knn_minus_matching,
    path_graph,
    random_connected_bipartite,
    random_connected_graph,
)
from conngame.engine import ALICE, BOB, GameSpec, GameState, apply_moves, new_game, winner
from conngame.solver import (
    MEMO_ENV,
    BudgetExceeded,
    PositionSolver,
    canonical_key,
    game_parameter,
    solve_fixed_k,
    solve_state,
    winner_profile,
)

FIG2 = figure2_graph()


def test_canonical_key_examples():
    spec = GameSpec("coloring", True, 3)
    a = GameState.from_assignment(FIG2, spec, {0: 1, 1: 2})
    b = GameState.from_assignment(FIG2, spec, {0: 3, 1: 1})
    assert canonical_key(a) == canonical_key(b)
    c = GameState.from_assignment(FIG2, spec, {0: 1, 1: 2}, moves_made=3)
    assert canonical_key(a) != canonical_key(c)
    d = GameState.from_assignment(FIG2, GameSpec("coloring", True, 4), {0: 1, 1: 2})
    assert canonical_key(a) != canonical_key(d)


def _random_coloring(g, k, rng):
    cols = {}
    for v in rng.sample(range(g.n), rng.randint(0, g.n)):
        free = [c for c in range(1, k + 1) if all(cols.get(w) != c for w in g.adj[v])]
        if free:
            cols[v] = rng.choice(free)
    return cols


def _renaming_equivalent(x, y, k):
    if x.keys() != y.keys():
        return False
    return any(all(perm[c - 1] == y[v] for v, c in x.items())
               for perm in itertools.permutations(range(1, k + 1)))


def test_canonical_key_matches_permutation_search():
    rng = random.Random(4)
    equal = 0
    for _ in range(50):
        g = random_connected_graph(rng.randint(3, 6), rng)
        k = rng.randint(2, 4)
        spec = GameSpec("coloring", False, k)
        x = _random_coloring(g, k, rng)
        if rng.random() < 0.5:
            perm = list(range(1, k + 1))
            rng.shuffle(perm)
            y = {v: perm[c - 1] for v, c in x.items()}
        else:
            y = _random_coloring(g, k, rng)
        sx = GameState.from_assignment(g, spec, x, moves_made=len(x))
        sy = GameState.from_assignment(g, spec, y, moves_made=len(x))
        same = canonical_key(sx) == canonical_key(sy)
        assert same == _renaming_equivalent(x, y, k)
        equal += same
    assert 10 < equal < 50


def test_solve_examples():
    assert solve_fixed_k(FIG2, GameSpec("coloring", True, 3)).winner is BOB
    assert solve_fixed_k(FIG2, GameSpec("coloring", True, 4)).winner is ALICE
    assert solve_fixed_k(complete_graph(3), GameSpec("coloring", True, 2)).winner is BOB
    assert solve_fixed_k(knn_minus_matching(3), GameSpec("coloring", False, 2)).winner is BOB


def test_profile_examples():
    prof = winner_profile(FIG2, "coloring", True, range(1, 6))
    assert [prof.winners[k] for k in range(1, 6)] == [BOB, BOB, BOB, ALICE, ALICE]
    assert prof.min_winning_k == 4
    assert winner_profile(cycle_graph(5), "coloring", True, range(1, 4)).min_winning_k == 3
    rng = random.Random(2)
    for _ in range(15):
        g = random_connected_bipartite(rng.randint(2, 8), rng)
        assert winner_profile(g, "coloring", True, [2]).winners[2] is ALICE


def test_profile_json():
    j = winner_profile(FIG2, "coloring", True, range(1, 3)).to_json()
    assert j["winners"] == {"1": "Bob", "2": "Bob"} and j["min_winning_k"] is None


def test_principal_variation_is_legal_and_reaches_winner():
    for spec in (GameSpec("coloring", True, 3), GameSpec("coloring", True, 4),
                 GameSpec("marking", True, 3), GameSpec("marking", False, 4)):
        res = solve_fixed_k(FIG2, spec, pv=True)
        end = apply_moves(new_game(FIG2, spec), res.principal_variation)
        assert winner(end) is res.winner


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_agrees_with_plain_minimax(n):
    for g in connected_graphs(n):
        for kind in ("coloring", "marking"):
            for connected in (False, True):
                for k in (1, 2, 3):
                    got = solve_fixed_k(g, GameSpec(kind, connected, k)).winner
                    want = oracles.minimax_winner(g.n, g.edges(), kind, connected, k)
                    assert str(got) == want, (g.edges(), kind, connected, k)


def test_canonical_and_plain_agree():
    rng = random.Random(6)
    for _ in range(50):
        g = random_connected_graph(rng.randint(2, 6), rng)
        for name in ("chi_g", "chi_cg", "col_g", "col_cg"):
            assert game_parameter(g, name) == game_parameter(g, name, canonical=False)
            assert game_parameter(g, name) == game_parameter(g, name, prune=False)


@pytest.mark.parametrize("n", range(1, 8))
def test_alice_wins_with_degree_plus_one(n):
    for g in connected_graphs(n):
        k = g.max_degree + 1
        for kind in ("coloring", "marking"):
            for connected in (False, True):
                assert solve_fixed_k(g, GameSpec(kind, connected, k)).winner is ALICE


def test_mid_game_solve():
    spec = GameSpec("coloring", True, 3)
    s = GameState.from_assignment(FIG2, spec, {0: 1, 1: 2})
    assert solve_state(s).winner is BOB
    with pytest.raises(ValueError):
        solve_state(GameState.from_assignment(FIG2, spec, {0: 1}, moves_made=2))


def test_budget(monkeypatch):
    g = path_graph(10)
    spec = GameSpec("coloring", False, 2)
    with pytest.raises(BudgetExceeded):
        solve_fixed_k(g, spec, max_positions=5)
    monkeypatch.setenv(MEMO_ENV, "3")
    with pytest.raises(BudgetExceeded):
        PositionSolver(g, spec).solve(new_game(g, spec))


def test_ordinary_gap_family():
    assert game_parameter(knn_minus_matching(3), "chi_g") == 3
    assert game_parameter(knn_minus_matching(3), "chi_cg") == 2
