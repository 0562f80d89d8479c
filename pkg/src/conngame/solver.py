"""Exact winners by memoized AND-OR search, and the four game parameters.

Positions are memoized on the current assignment only (the win condition
never looks at history). In canonical mode colors are renamed by first
appearance along the vertex order, and moves introducing an unused color are
generated for a single representative color.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

from .engine import ALICE, BOB, GameSpec, GameState, Move, Player, new_game, winner
from .graph import Graph

__all__ = [
    "BudgetExceeded",
    "PositionSolver",
    "SolveResult",
    "WinnerProfile",
    "canonical_key",
    "solve_fixed_k",
    "solve_state",
    "winner_profile",
    "game_parameter",
    "game_parameters",
    "PARAMETERS",
]

MEMO_ENV = "CONNGAME_MEMO_LIMIT"
DEFAULT_MEMO_LIMIT = 5_000_000

# parameter name -> (kind, connected)
PARAMETERS = {
    "chi_g": ("coloring", False),
    "chi_cg": ("coloring", True),
    "col_g": ("marking", False),
    "col_cg": ("marking", True),
}


class BudgetExceeded(RuntimeError):
    """The search visited more positions than its budget allows."""


def _memo_limit(limit: int | None) -> int:
    if limit is not None:
        return limit
    return int(os.environ.get(MEMO_ENV, DEFAULT_MEMO_LIMIT))


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    nodes_expanded: int
    memo_hits: int
    principal_variation: tuple[Move, ...] | None = None

    def to_json(self) -> dict:
        return {
            "winner": str(self.winner),
            "nodes": self.nodes_expanded,
            "memo_hits": self.memo_hits,
            "pv": None
            if self.principal_variation is None
            else [m.to_json() for m in self.principal_variation],
        }


@dataclass(frozen=True)
class WinnerProfile:
    kind: str
    connected: bool
    winners: dict[int, Player]
    nodes: dict[int, int]

    @property
    def min_winning_k(self) -> int | None:
        return min((k for k, w in self.winners.items() if w is ALICE), default=None)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "connected": self.connected,
            "winners": {str(k): str(w) for k, w in sorted(self.winners.items())},
            "nodes": {str(k): c for k, c in sorted(self.nodes.items())},
            "min_winning_k": self.min_winning_k,
        }


def _rename(values: Iterable[int]) -> list[int]:
    seen: dict[int, int] = {}
    out = []
    for c in values:
        if c:
            c = seen.setdefault(c, len(seen) + 1)
        out.append(c)
    return out


def canonical_key(s: GameState) -> bytes:
    """Position key, invariant under renaming of colors."""
    spec = s.spec
    head = bytes([spec.kind == "coloring", spec.connected, s.moves_made % 2]) + spec.k.to_bytes(
        2, "big"
    )
    if spec.coloring:
        body = _rename(s.value(v) for v in range(s.graph.n))
        width = 1 if spec.k < 256 else 2
        return head + b"".join(c.to_bytes(width, "big") for c in body)
    bits = 0
    for v in s.assignment:
        bits |= 1 << v
    return head + bits.to_bytes((s.graph.n + 7) // 8 or 1, "big")


class PositionSolver:
    """Search state for one (graph, spec); the memo is reused across positions."""

    def __init__(self, g: Graph, spec: GameSpec, canonical: bool = True, prune: bool = True,
                 max_positions: int | None = None):
        self.g = g
        self.spec = spec
        self.k = spec.k
        self.canonical = canonical
        self.limit = _memo_limit(max_positions)
        self.masks = g.masks
        self.adj = [tuple(sorted(s)) for s in g.adj]
        self.full = (1 << g.n) - 1
        # only vertices of degree >= k can ever saturate
        self.hot = 0
        if prune:
            for v in range(g.n):
                if len(self.adj[v]) >= spec.k:
                    self.hot |= 1 << v
        else:
            self.hot = self.full
        self.memo: dict = {}
        self.nodes = 0
        self.hits = 0

    # -- shared helpers -----------------------------------------------------

    def _candidates(self, mask: int, frontier: int) -> Iterator[int]:
        pool = frontier if (self.spec.connected and mask) else self.full & ~mask
        while pool:
            low = pool & -pool
            yield low.bit_length() - 1
            pool ^= low

    def _expand(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceeded(f"search exceeded {self.limit} positions (set {MEMO_ENV})")

    # -- coloring -------------------------------------------------------------

    def _colors_for(self, cols: list[int], v: int) -> list[int]:
        taken = {cols[w] for w in self.adj[v]}
        if not self.canonical:
            return [c for c in range(1, self.k + 1) if c not in taken]
        present = set(cols)
        out = []
        fresh = False
        for c in range(1, self.k + 1):
            if c in taken:
                continue
            if c in present:
                out.append(c)
            elif not fresh:
                out.append(c)
                fresh = True
        return out

    def _col_terminal(self, cols: list[int], v: int, count: int) -> Player | None:
        for w in self.adj[v]:
            if cols[w] == 0 and self.hot >> w & 1:
                seen = {cols[x] for x in self.adj[w]}
                seen.discard(0)
                if len(seen) >= self.k:
                    return BOB
        return ALICE if count == self.g.n else None

    def col_moves(self, cols: list[int], mask: int, frontier: int) -> Iterator[Move]:
        for v in self._candidates(mask, frontier):
            for c in self._colors_for(cols, v):
                yield Move(v, c)

    def col_win(self, cols: list[int], mask: int, frontier: int, count: int) -> bool:
        if not self.hot & ~mask:
            return True
        key = bytes(_rename(cols)) if self.canonical else bytes(cols)
        hit = self.memo.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self._expand()
        alice = count % 2 == 0
        result = not alice
        for m in self.col_moves(cols, mask, frontier):
            child = self._col_child(cols, mask, frontier, count, m)
            if child == alice:
                result = alice
                break
        self.memo[key] = result
        return result

    def _col_child(self, cols, mask, frontier, count, m: Move) -> bool:
        v = m.vertex
        cols[v] = m.color
        try:
            end = self._col_terminal(cols, v, count + 1)
            if end is not None:
                return end is ALICE
            nmask = mask | 1 << v
            return self.col_win(cols, nmask, (frontier | self.masks[v]) & ~nmask, count + 1)
        finally:
            cols[v] = 0

    # -- marking ------------------------------------------------------------------

    def _mark_terminal(self, mask: int, v: int) -> Player | None:
        for w in self.adj[v]:
            if not mask >> w & 1 and (self.masks[w] & mask).bit_count() >= self.k:
                return BOB
        return ALICE if mask == self.full else None

    def mark_win(self, mask: int, frontier: int) -> bool:
        if not self.hot & ~mask:
            return True
        hit = self.memo.get(mask)
        if hit is not None:
            self.hits += 1
            return hit
        self._expand()
        alice = mask.bit_count() % 2 == 0
        result = not alice
        for v in self._candidates(mask, frontier):
            if self._mark_child(mask, frontier, v) == alice:
                result = alice
                break
        self.memo[mask] = result
        return result

    def _mark_child(self, mask: int, frontier: int, v: int) -> bool:
        nmask = mask | 1 << v
        end = self._mark_terminal(nmask, v)
        if end is not None:
            return end is ALICE
        return self.mark_win(nmask, (frontier | self.masks[v]) & ~nmask)

    # -- entry points -----------------------------------------------------------

    def solve(self, s: GameState, want_pv: bool = False) -> SolveResult:
        done = winner(s)
        if done is not None:
            return SolveResult(done, 0, 0, () if want_pv else None)
        cols = [s.value(v) for v in range(self.g.n)]
        mask = 0
        frontier = 0
        for v in s.assignment:
            mask |= 1 << v
            frontier |= self.masks[v]
        frontier &= ~mask
        count = len(s.assignment)
        if s.moves_made % 2 != count % 2:
            raise ValueError("solver positions must have one assigned vertex per move")
        if self.spec.coloring:
            alice_wins = self.col_win(cols, mask, frontier, count)
        else:
            alice_wins = self.mark_win(mask, frontier)
        pv = self._pv(cols, mask, frontier, count, alice_wins) if want_pv else None
        return SolveResult(ALICE if alice_wins else BOB, self.nodes, self.hits, pv)

    def _pv(self, cols, mask, frontier, count, alice_wins: bool) -> tuple[Move, ...]:
        cols = list(cols)
        line: list[Move] = []
        while True:
            alice = count % 2 == 0
            mover_wins = alice_wins == alice
            if self.spec.coloring:
                moves = list(self.col_moves(cols, mask, frontier))
            else:
                moves = [Move(v) for v in self._candidates(mask, frontier)]
            if not self.hot & ~mask:
                # Alice wins from here whatever happens; play it out in move order
                chosen = moves[0]
            else:
                chosen = moves[0]
                if mover_wins:
                    for m in moves:
                        if self._outcome(cols, mask, frontier, count, m) == alice_wins:
                            chosen = m
                            break
            line.append(chosen)
            v = chosen.vertex
            if self.spec.coloring:
                cols[v] = chosen.color
                end = self._col_terminal(cols, v, count + 1)
            else:
                end = self._mark_terminal(mask | 1 << v, v)
            mask |= 1 << v
            frontier = (frontier | self.masks[v]) & ~mask
            count += 1
            if end is not None:
                return tuple(line)

    def _outcome(self, cols, mask, frontier, count, m: Move) -> bool:
        if self.spec.coloring:
            return self._col_child(cols, mask, frontier, count, m)
        return self._mark_child(mask, frontier, m.vertex)


def solve_state(
    s: GameState,
    *,
    canonical: bool = True,
    prune: bool = True,
    pv: bool = False,
    max_positions: int | None = None,
) -> SolveResult:
    """Winner under optimal play from position ``s``."""
    search = PositionSolver(s.graph, s.spec, canonical, prune, max_positions)
    return search.solve(s, pv)


def solve_fixed_k(g: Graph, spec: GameSpec, **kwargs) -> SolveResult:
    """Winner of the game ``spec`` on ``g`` from the empty position, Alice first."""
    return solve_state(new_game(g, spec, keep_history=False), **kwargs)


def winner_profile(
    g: Graph, kind: str, connected: bool, k_range: Iterable[int], **kwargs
) -> WinnerProfile:
    winners: dict[int, Player] = {}
    nodes: dict[int, int] = {}
    for k in k_range:
        res = solve_fixed_k(g, GameSpec(kind, connected, k), **kwargs)
        winners[k] = res.winner
        nodes[k] = res.nodes_expanded
    return WinnerProfile(kind, connected, winners, nodes)


def game_parameter(g: Graph, name: str, **kwargs) -> int:
    """Least k for which Alice wins (k = max degree + 1 always suffices)."""
    kind, connected = PARAMETERS[name]
    for k in range(1, g.max_degree + 2):
        if solve_fixed_k(g, GameSpec(kind, connected, k), **kwargs).winner is ALICE:
            return k
    raise AssertionError(f"Alice lost {name} at k = max degree + 1")


def game_parameters(g: Graph, **kwargs) -> dict[str, int]:
    names = PARAMETERS if g.n and _connected(g) else ("chi_g", "col_g")
    return {name: game_parameter(g, name, **kwargs) for name in names}


def _connected(g: Graph) -> bool:
    from .graph import is_connected

    return is_connected(g)
