"""Rules of the coloring and marking games, ordinary or connected.

States are immutable. The assignment is stored sparsely (vertex -> value) so
that playouts on graphs with hundreds of thousands of vertices stay cheap;
in marking games every assigned vertex carries the value :data:`MARKED`.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from .graph import Graph, is_connected

__all__ = [
    "ALICE",
    "BOB",
    "MARKED",
    "Player",
    "GameSpec",
    "Move",
    "GameState",
    "IllegalMove",
    "GameError",
    "VertexStatus",
    "new_game",
    "legal_moves",
    "check_move",
    "apply_move",
    "vertex_status",
    "winner",
    "saturated_vertices",
    "threatened_vertices",
    "playable_vertices",
    "random_legal_move",
    "state_to_json",
]

MARKED = 1


class Player(str, Enum):
    ALICE = "Alice"
    BOB = "Bob"

    def other(self) -> Player:
        return Player.BOB if self is Player.ALICE else Player.ALICE

    def __str__(self) -> str:
        return self.value


ALICE, BOB = Player.ALICE, Player.BOB


class GameError(ValueError):
    pass


class IllegalMove(GameError):
    def __init__(self, rule: str, detail: str):
        super().__init__(f"{rule}: {detail}")
        self.rule = rule


@dataclass(frozen=True)
class GameSpec:
    kind: str  # "coloring" or "marking"
    connected: bool
    k: int

    def __post_init__(self) -> None:
        if self.kind not in ("coloring", "marking"):
            raise GameError(f"unknown game kind {self.kind!r}")
        if self.k < 1:
            raise GameError("k must be at least 1")

    @property
    def coloring(self) -> bool:
        return self.kind == "coloring"

    def to_json(self) -> dict:
        return {"kind": self.kind, "connected": self.connected, "k": self.k}

    @classmethod
    def from_json(cls, data: Mapping) -> GameSpec:
        return cls(data["kind"], bool(data["connected"]), int(data["k"]))

    def __str__(self) -> str:
        prefix = "connected " if self.connected else ""
        return f"{prefix}{self.kind} k={self.k}"


@dataclass(frozen=True, order=True)
class Move:
    vertex: int
    color: int | None = None

    def __str__(self) -> str:
        return f"{self.vertex}" if self.color is None else f"{self.vertex}<-{self.color}"

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "color": self.color}

    @classmethod
    def from_json(cls, data: Mapping) -> Move:
        return cls(int(data["vertex"]), None if data.get("color") is None else int(data["color"]))


@dataclass(frozen=True)
class GameState:
    graph: Graph
    spec: GameSpec
    assignment: Mapping[int, int]
    moves_made: int
    history: tuple[Move, ...] | None = None
    saturated: int | None = field(default=None, compare=False)

    @property
    def turn(self) -> Player:
        return ALICE if self.moves_made % 2 == 0 else BOB

    @property
    def last_move(self) -> Move | None:
        return self.history[-1] if self.history else None

    def value(self, v: int) -> int:
        return self.assignment.get(v, 0)

    def is_assigned(self, v: int) -> bool:
        return v in self.assignment

    @classmethod
    def from_assignment(
        cls,
        g: Graph,
        spec: GameSpec,
        assignment: Mapping[int, int],
        moves_made: int | None = None,
    ) -> GameState:
        """Build a position directly, validating every state invariant."""
        assignment = dict(assignment)
        for v, c in assignment.items():
            if not 0 <= v < g.n:
                raise GameError(f"vertex {v} out of range")
            if spec.coloring:
                if not 1 <= c <= spec.k:
                    raise GameError(f"color {c} outside 1..{spec.k}")
                for w in g.adj[v]:
                    if assignment.get(w) == c:
                        raise GameError(f"improper coloring on edge ({v}, {w})")
            elif c != MARKED:
                raise GameError("marking states hold only MARKED values")
        if spec.connected and assignment:
            sub, _ = g.induced_subgraph(assignment)
            if not is_connected(sub):
                raise GameError("assigned vertices do not induce a connected subgraph")
        moves = len(assignment) if moves_made is None else moves_made
        state = cls(g, spec, assignment, moves, None)
        sat = saturated_vertices(state)
        return replace(state, saturated=sat[0] if sat else None)


@dataclass(frozen=True)
class VertexStatus:
    playable: bool
    saturated: bool
    threatened: bool


def new_game(g: Graph, spec: GameSpec, keep_history: bool = True) -> GameState:
    if spec.connected and (g.n < 1 or not is_connected(g)):
        raise GameError("connected games need a connected graph with at least one vertex")
    return GameState(g, spec, {}, 0, () if keep_history else None)


# -- predicates ---------------------------------------------------------------


def _assigned_neighbors(s: GameState, v: int) -> list[int]:
    nbrs = s.graph.adj[v]
    if len(nbrs) <= len(s.assignment):
        return [w for w in nbrs if w in s.assignment]
    return [w for w in s.assignment if w in nbrs]


def _neighbor_colors(s: GameState, v: int) -> set[int]:
    return {s.assignment[w] for w in _assigned_neighbors(s, v)}


def _is_playable(s: GameState, v: int) -> bool:
    if v in s.assignment:
        return False
    nbrs = s.graph.adj[v]
    if len(nbrs) <= len(s.assignment):
        return any(w in s.assignment for w in nbrs)
    return any(w in nbrs for w in s.assignment)


def _is_saturated(s: GameState, v: int) -> bool:
    if v in s.assignment:
        return False
    if s.spec.coloring:
        return len(_neighbor_colors(s, v)) >= s.spec.k
    return len(_assigned_neighbors(s, v)) >= s.spec.k


def playable_vertices(s: GameState) -> list[int]:
    """Unassigned vertices with at least one assigned neighbor."""
    out: set[int] = set()
    for v in s.assignment:
        out.update(w for w in s.graph.adj[v] if w not in s.assignment)
    return sorted(out)


def _crowded(s: GameState, within: frozenset[int] | None = None) -> list[int]:
    """Unassigned vertices (inside ``within``) with at least k assigned neighbors, sorted."""
    adj, k = s.graph.adj, s.spec.k
    counts: Counter[int] = Counter()
    for a in s.assignment:
        counts.update(adj[a] if within is None else adj[a] & within)
    return sorted(w for w, c in counts.items() if c >= k and w not in s.assignment)


def saturated_vertices(s: GameState) -> list[int]:
    return [v for v in _crowded(s) if _is_saturated(s, v)]


def threatened_vertices(s: GameState) -> list[int]:
    if s.spec.coloring:
        return []
    pool = playable_vertices(s) if s.spec.k > 1 else range(s.graph.n)
    return [v for v in pool if vertex_status(s, v).threatened]


def vertex_status(s: GameState, v: int) -> VertexStatus:
    playable = _is_playable(s, v)
    saturated = _is_saturated(s, v)
    threatened = False
    if not s.spec.coloring and v not in s.assignment:
        if len(_assigned_neighbors(s, v)) == s.spec.k - 1:
            threatened = any(_is_playable(s, w) for w in s.graph.adj[v])
    return VertexStatus(playable, saturated, threatened)


def winner(s: GameState) -> Player | None:
    if s.saturated is not None:
        return BOB
    if len(s.assignment) == s.graph.n:
        return ALICE
    return None


# -- moves --------------------------------------------------------------------


def _candidate_vertices(s: GameState) -> list[int]:
    if s.spec.connected and s.assignment:
        return playable_vertices(s)
    return [v for v in range(s.graph.n) if v not in s.assignment]


def legal_moves(s: GameState) -> list[Move]:
    """All legal moves, ordered by vertex then color; empty once the game is decided."""
    if winner(s) is not None:
        return []
    if not s.spec.coloring:
        return [Move(v) for v in _candidate_vertices(s)]
    out = []
    for v in _candidate_vertices(s):
        taken = _neighbor_colors(s, v)
        out.extend(Move(v, c) for c in range(1, s.spec.k + 1) if c not in taken)
    return out


def check_move(s: GameState, m: Move) -> str | None:
    """Reason the move is illegal, or None if it is legal."""
    if winner(s) is not None:
        return "game over: the winner is already decided"
    v = m.vertex
    if not 0 <= v < s.graph.n:
        return f"vertex {v} out of range"
    if s.spec.coloring:
        if m.color is None or not 1 <= m.color <= s.spec.k:
            return f"coloring moves need a color in 1..{s.spec.k}"
    elif m.color is not None:
        return "marking moves carry no color"
    if v in s.assignment:
        return f"occupied: vertex {v} is already {'colored' if s.spec.coloring else 'marked'}"
    if s.spec.coloring and m.color in _neighbor_colors(s, v):
        return f"improper color: a neighbor of {v} already has color {m.color}"
    if s.spec.connected and s.assignment and not _is_playable(s, v):
        return f"connectivity: vertex {v} has no assigned neighbor"
    return None


def apply_move(s: GameState, m: Move) -> GameState:
    reason = check_move(s, m)
    if reason is not None:
        raise IllegalMove(reason.split(":", 1)[0], reason)
    assignment = dict(s.assignment)
    assignment[m.vertex] = m.color if s.spec.coloring else MARKED
    history = None if s.history is None else s.history + (m,)
    nxt = GameState(s.graph, s.spec, assignment, s.moves_made + 1, history)
    nbrs = s.graph.adj[m.vertex]
    if len(nbrs) <= 64:
        near: Iterable[int] = s.graph.sorted_neighbors(m.vertex)
    else:
        # only neighbors touching k assigned vertices can saturate
        near = _crowded(nxt, nbrs)
    sat = next((w for w in near if w not in assignment and _is_saturated(nxt, w)), None)
    return replace(nxt, saturated=sat) if sat is not None else nxt


def apply_moves(s: GameState, moves: Iterable[Move]) -> GameState:
    for m in moves:
        s = apply_move(s, m)
    return s


def random_legal_move(s: GameState, rng: random.Random, max_tries: int = 10_000) -> Move:
    """Uniformly random legal move.

    Small graphs enumerate ``legal_moves``. Large graphs sample a vertex
    uniformly from the union of assigned neighborhoods (weighted pick plus
    rejection by multiplicity) and a uniform color, rejecting illegal pairs;
    every legal (vertex, color) pair is equally likely either way.
    """
    if winner(s) is not None:
        raise GameError("game over: no legal moves")
    if s.graph.n <= 256:
        return rng.choice(legal_moves(s))
    k = s.spec.k if s.spec.coloring else 1
    g = s.graph
    sources = list(s.assignment) if (s.spec.connected and s.assignment) else None
    weights = [len(g.adj[v]) for v in sources] if sources else None
    for _ in range(max_tries):
        if sources is None:
            v = rng.randrange(g.n)
        else:
            src = rng.choices(sources, weights)[0]
            nbrs = g.sorted_neighbors(src)
            v = nbrs[rng.randrange(len(nbrs))]
            if rng.random() >= 1.0 / len(_assigned_neighbors(s, v)):
                continue
        m = Move(v, rng.randint(1, k) if s.spec.coloring else None)
        if check_move(s, m) is None:
            return m
    return rng.choice(legal_moves(s))


def state_to_json(s: GameState) -> dict:
    return {
        "spec": s.spec.to_json(),
        "assignment": {str(v): c for v, c in sorted(s.assignment.items())},
        "moves_made": s.moves_made,
        "turn": str(s.turn),
        "winner": None if winner(s) is None else str(winner(s)),
        "history": None if s.history is None else [m.to_json() for m in s.history],
    }
