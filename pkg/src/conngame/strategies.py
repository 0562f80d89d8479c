"""Explicit strategies and the harnesses that play and verify them.

A strategy is an object with ``start(g, spec)``, which returns the player for
one playout (so per-game memory never leaks between games), and
``choose(state, rng) -> (Move, note)``. The note records the rule or stage
behind the move and ends up in the trace.
"""

from __future__ import annotations

import bisect
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .constructions import GkMetadata
from .engine import (
    ALICE,
    BOB,
    GameSpec,
    GameState,
    Move,
    Player,
    apply_move,
    check_move,
    legal_moves,
    new_game,
    playable_vertices,
    random_legal_move,
    saturated_vertices,
    threatened_vertices,
    winner,
)
from .engine import _is_playable, _neighbor_colors
from .graph import Graph, bipartition
from .outerplanar import (
    CompletionError,
    TrapezoidalDecomposition,
    decompose,
    maximal_completion,
)
from .solver import PositionSolver

__all__ = [
    "StrategyError",
    "StageInfeasible",
    "Ply",
    "Trace",
    "Strategy",
    "FirstLegal",
    "UniformRandom",
    "SolverPlayer",
    "AliceBipartite",
    "alice_bipartite_move",
    "OuterplanarContext",
    "outerplanar_context",
    "outerplanar_rules",
    "AliceOuterplanar",
    "alice_outerplanar_move",
    "observation3_violation",
    "observation4_violation",
    "GkBob",
    "GkGreedyAlice",
    "GkLookaheadAlice",
    "bob_gk_move",
    "simulate",
    "VerifyResult",
    "adversarial_verify",
    "make_strategy",
    "STRATEGY_NAMES",
]


class StrategyError(RuntimeError):
    """A strategy was used outside its contract or produced an illegal move."""


class StageInfeasible(StrategyError):
    """Bob's staged plan found no admissible move; carries a dump of the position."""

    def __init__(self, message: str, dump: Mapping):
        super().__init__(f"{message}; state: {dict(dump)}")
        self.dump = dict(dump)


# -- traces -------------------------------------------------------------------


@dataclass(frozen=True)
class Ply:
    player: Player
    move: Move
    note: str | None = None

    def to_json(self) -> dict:
        return {"player": str(self.player), **self.move.to_json(), "note": self.note}

    @classmethod
    def from_json(cls, data: Mapping) -> Ply:
        return cls(Player(data["player"]), Move.from_json(data), data.get("note"))


@dataclass(frozen=True)
class Trace:
    """A game record a_0, b_1, a_1, ... and the verdict it reached (None if cut short)."""

    spec: GameSpec
    plies: tuple[Ply, ...]
    verdict: Player | None
    saturated: tuple[int, ...] = ()
    failure: str | None = None

    @property
    def moves(self) -> list[Move]:
        return [p.move for p in self.plies]

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "plies": [p.to_json() for p in self.plies],
            "verdict": None if self.verdict is None else str(self.verdict),
            "saturated": list(self.saturated),
            "failure": self.failure,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Trace:
        return cls(
            GameSpec.from_json(data["spec"]),
            tuple(Ply.from_json(p) for p in data["plies"]),
            None if data.get("verdict") is None else Player(data["verdict"]),
            tuple(data.get("saturated", ())),
            data.get("failure"),
        )

    def replay(self, g: Graph) -> GameState:
        """Replay through the engine, checking alternation and the recorded verdict."""
        s = new_game(g, self.spec)
        for i, ply in enumerate(self.plies):
            if ply.player is not s.turn:
                raise StrategyError(f"ply {i}: expected {s.turn} to move, trace says {ply.player}")
            s = apply_move(s, ply.move)
        if winner(s) is not self.verdict:
            raise StrategyError(f"replay ends with winner {winner(s)}, trace says {self.verdict}")
        return s


def _finish(spec: GameSpec, plies: list[Ply], s: GameState, failure: str | None = None) -> Trace:
    return Trace(spec, tuple(plies), winner(s), tuple(saturated_vertices(s)), failure)


# -- generic strategies ----------------------------------------------------------


class Strategy:
    name = "strategy"

    def start(self, g: Graph, spec: GameSpec) -> Strategy:
        return self

    def choose(self, s: GameState, rng: random.Random | None) -> tuple[Move, str | None]:
        raise NotImplementedError


class FirstLegal(Strategy):
    name = "first-legal"

    def choose(self, s, rng):
        return legal_moves(s)[0], None


class UniformRandom(Strategy):
    name = "random"

    def choose(self, s, rng):
        if rng is None:
            raise StrategyError("the random strategy needs a seeded generator")
        return random_legal_move(s, rng), None


class SolverPlayer(Strategy):
    """Plays a move that keeps a forced win when one exists, otherwise the first legal move."""

    name = "solver"

    def __init__(self, max_positions: int | None = None):
        self.max_positions = max_positions
        self._solver: PositionSolver | None = None

    def start(self, g, spec):
        fresh = SolverPlayer(self.max_positions)
        fresh._solver = PositionSolver(g, spec, max_positions=self.max_positions)
        return fresh

    def choose(self, s, rng):
        if self._solver is None:
            self._solver = PositionSolver(s.graph, s.spec, max_positions=self.max_positions)
        me = s.turn
        moves = legal_moves(s)
        for m in moves:
            child = apply_move(s, m)
            done = winner(child)
            if done is None:
                done = self._solver.solve(child).winner
            if done is me:
                return m, "winning"
        return moves[0], "losing"


# -- connected bipartite graphs, two colors -----------------------------------


def alice_bipartite_move(s: GameState) -> Move:
    """Color 1 on vertex 0 to open, then the first legal move."""
    if not (s.spec.coloring and s.spec.connected and s.spec.k == 2):
        raise StrategyError("the bipartite strategy plays connected coloring with k = 2")
    if bipartition(s.graph) is None:
        raise StrategyError("graph is not bipartite")
    if s.turn is not ALICE:
        raise StrategyError("it is not Alice's turn")
    if not s.assignment:
        return Move(0, 1)
    return legal_moves(s)[0]


class AliceBipartite(Strategy):
    name = "bipartite"

    def start(self, g, spec):
        if not (spec.coloring and spec.connected and spec.k == 2):
            raise StrategyError("the bipartite strategy plays connected coloring with k = 2")
        if bipartition(g) is None:
            raise StrategyError("graph is not bipartite")
        return self

    def choose(self, s, rng):
        # contract already checked in start()
        if not s.assignment:
            return Move(0, 1), "open"
        return legal_moves(s)[0], "first-legal"


# -- connected outerplanar graphs, marking ---------------------------------------


@dataclass(frozen=True)
class OuterplanarContext:
    base: Graph
    decomposition: TrapezoidalDecomposition | None  # None only for a single vertex

    @property
    def root(self) -> tuple[int, int] | None:
        return None if self.decomposition is None else self.decomposition.root


def outerplanar_context(g: Graph, outer_edge: tuple[int, int] | None = None) -> OuterplanarContext:
    """Decomposition rooted at ``outer_edge``, or at the lowest edge admitting one."""
    if g.n == 1:
        return OuterplanarContext(g, None)
    candidates = [outer_edge] if outer_edge is not None else g.edges()
    last: Exception | None = None
    for e in candidates:
        try:
            return OuterplanarContext(g, decompose(maximal_completion(g, e)))
        except CompletionError as exc:
            last = exc
    raise StrategyError(f"no usable outer edge: {last}")


def outerplanar_rules(s: GameState, ctx: OuterplanarContext) -> list[tuple[str, int]]:
    """Every rule whose precondition holds, with the vertex that rule would mark."""
    d = ctx.decomposition
    if d is None:
        return [("R0", 0)] if not s.assignment else []
    out: list[tuple[str, int]] = []
    if s.moves_made == 0:
        return [("R0", d.root[0])]
    last = s.last_move
    if last is None:
        raise StrategyError("Bob's last move is missing from the state history")
    b = last.vertex
    marked = s.assignment

    t = d.trapezoid_of_child(b)
    if t is not None:
        r1 = [p for p in t.parents if p not in marked and _is_playable(s, p)]
        if r1:
            out.append(("R1", min(r1, key=d.rank)))
    r2 = []
    for t in d.root_edges_of(b):
        v = t.parents[0] if t.parents[1] == b else t.parents[1]
        if v in marked and _is_playable(s, t.pivot):
            r2.append(t.pivot)
    # any edge inside a layer roots a (possibly childless) trapezoid here
    r3 = [
        v
        for v in d.layer_neighbors(b)
        if v not in marked and d.is_pivot(v) and _is_playable(s, v)
    ]
    if r2:
        out.append(("R2", min(r2, key=d.rank)))
    if r3:
        out.append(("R3", min(r3, key=d.rank)))
    playable = playable_vertices(s)
    if playable:
        out.append(("R4", min(playable, key=d.rank)))
    return out


def alice_outerplanar_move(s: GameState, ctx: OuterplanarContext) -> tuple[Move, str]:
    if s.spec.coloring or not s.spec.connected:
        raise StrategyError("the outerplanar strategy plays the connected marking game")
    if ctx.base is not s.graph and ctx.base != s.graph:
        raise StrategyError("context belongs to a different graph")
    rules = outerplanar_rules(s, ctx)
    if not rules:
        raise StrategyError("no rule applies: no playable vertex remains")
    rule, v = rules[0]
    return Move(v), rule


class AliceOuterplanar(Strategy):
    name = "outerplanar-marking"

    def __init__(self, outer_edge: tuple[int, int] | None = None):
        self.outer_edge = outer_edge
        self.ctx: OuterplanarContext | None = None

    def start(self, g, spec):
        if spec.coloring or not spec.connected:
            raise StrategyError("the outerplanar strategy plays the connected marking game")
        if self.ctx is not None and self.ctx.base == g:
            return self
        fresh = AliceOuterplanar(self.outer_edge)
        fresh.ctx = outerplanar_context(g, self.outer_edge)
        return fresh

    def choose(self, s, rng):
        if self.ctx is None:
            self.ctx = outerplanar_context(s.graph, self.outer_edge)
        return alice_outerplanar_move(s, self.ctx)


def observation3_violation(s: GameState, ctx: OuterplanarContext) -> str | None:
    """After Alice's second move both ends of the root edge are marked."""
    d = ctx.decomposition
    if d is None or s.moves_made < 3 or s.turn is not BOB:
        return None
    missing = [x for x in d.root if x not in s.assignment]
    return f"root vertices {missing} unmarked after ply {s.moves_made}" if missing else None


def observation4_violation(s: GameState, ctx: OuterplanarContext) -> str | None:
    """A marked child of a trapezoid whose root edge is a base edge has both parents marked."""
    d = ctx.decomposition
    if d is None or s.turn is not BOB:
        return None
    for t in d.trapezoids:
        a, b = t.parents
        if not ctx.base.has_edge(a, b):
            continue
        if a in s.assignment and b in s.assignment:
            continue
        for w in t.children:
            if w in s.assignment:
                return f"child {w} of trapezoid {t.parents} marked with a parent unmarked"
    return None


# -- Bob on the bipartite apex construction --------------------------------------


@dataclass
class GkMemory:
    stage: int = 1  # 1: find u, v; 2: color u', v'; 3: color the rest of X; 4: done
    stage1_moves: int = 0
    u: int | None = None
    v: int | None = None
    up: int | None = None
    vp: int | None = None
    X: list[int] = field(default_factory=list)
    history: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "u": self.u,
            "v": self.v,
            "u_prime": self.up,
            "v_prime": self.vp,
            "X": list(self.X),
        }


def _legal_colors(s: GameState, x: int) -> list[int]:
    taken = _neighbor_colors(s, x)
    return [c for c in range(1, s.spec.k + 1) if c not in taken]


def _dump(s: GameState, mem: GkMemory) -> dict:
    return {"assignment": dict(sorted(s.assignment.items())), "moves": s.moves_made, **mem.to_json()}


class GkBob(Strategy):
    """Bob's staged plan: two points of distinct colors, cross-colored lines, then a full subset."""

    name = "gk-bob"

    def __init__(self, meta: GkMetadata):
        self.meta = meta
        self.mem = GkMemory()

    def start(self, g, spec):
        if not spec.coloring or not spec.connected or spec.k != self.meta.k:
            raise StrategyError(f"Bob's plan plays connected coloring with k = {self.meta.k}")
        if g.n != self.meta.n:
            raise StrategyError("graph does not match the construction metadata")
        return GkBob(self.meta)

    def choose(self, s, rng):
        if s.turn is not BOB:
            raise StrategyError("it is not Bob's turn")
        before = self.mem.stage
        move, note = bob_gk_move(s, self.meta, self.mem)
        if winner(apply_move(s, move)) is BOB:
            self.mem.stage = 4  # won early, e.g. an apex completed by Alice's own colors
        assert self.mem.stage >= before
        self.mem.history.append(self.mem.stage)
        return move, note

    @property
    def stage(self) -> int:
        return self.mem.stage


def _colored_points(s: GameState, meta: GkMetadata) -> list[int]:
    return sorted(v for v in s.assignment if meta.in_A(v))


def _store(s: GameState, mem: GkMemory, meta: GkMetadata) -> bool:
    """Fix u and v once two colored points with distinct colors exist."""
    pts = _colored_points(s, meta)
    if not pts:
        return False
    u = pts[0]
    v = next((p for p in pts if s.assignment[p] != s.assignment[u]), None)
    if v is None:
        return False
    mem.u, mem.v, mem.stage = u, v, 2
    return True


def bob_gk_move(s: GameState, meta: GkMetadata, mem: GkMemory) -> tuple[Move, str]:
    """Next move of Bob's plan; ``mem`` is updated in place."""
    g, k = s.graph, s.spec.k
    if k != meta.k or g.n != meta.n:
        raise StrategyError("state does not match the construction metadata")
    if mem.stage == 1 and not _store(s, mem, meta):
        mem.stage1_moves += 1
        if mem.stage1_moves > 3:
            raise StageInfeasible("stage 1 needed more than three moves", _dump(s, mem))
        return _stage1(s, meta, mem), "stage1"
    if mem.stage == 2:
        if mem.up is None:
            mem.up = _pick_cross(s, meta, mem, mem.u, mem.v, exclude=())
            return Move(mem.up, s.assignment[mem.v]), "stage2:u'"
        mem.vp = _pick_cross(s, meta, mem, mem.v, mem.u, exclude=(mem.up,))
        mem.stage = 3
        mem.X = [mem.up, mem.vp]
        return Move(mem.vp, s.assignment[mem.u]), "stage2:v'"
    if mem.stage == 3:
        return _stage3(s, meta, mem)
    raise StageInfeasible("plan already complete but the game continues", _dump(s, mem))


def _stage1(s: GameState, meta: GkMetadata, mem: GkMemory) -> Move:
    g = s.graph
    pts = _colored_points(s, meta)
    lines = sorted(v for v in s.assignment if meta.in_B(v))
    avoid = {s.assignment[p] for p in pts}
    # a new point next to a colored line, in a color not yet used on points
    for y in lines:
        for w in g.sorted_neighbors(y):
            if not meta.in_A(w):
                break
            if w in s.assignment:
                continue
            cols = [c for c in _legal_colors(s, w) if c not in avoid]
            if cols:
                return Move(w, cols[0])
    # otherwise a line next to a colored point or apex
    sources = pts or sorted(v for v in s.assignment if meta.is_apex(v))
    for a in sources:
        for y in g.sorted_neighbors(a):
            if not meta.in_B(y) or y in s.assignment:
                continue
            cols = _legal_colors(s, y)
            if cols:
                return Move(y, cols[0])
    raise StageInfeasible("no stage-1 move available", _dump(s, mem))


def _lines_of(g: Graph, meta: GkMetadata, p: int) -> list[int]:
    return [y for y in g.sorted_neighbors(p) if meta.in_B(y)]


def _lines_or_points(g: Graph, meta: GkMetadata, v: int) -> tuple[int, ...]:
    """Non-apex neighbors of ``v``; they come first in sorted order."""
    nbrs = g.sorted_neighbors(v)
    return nbrs[: bisect.bisect_left(nbrs, meta.apex_offset)]


def _pick_cross(s: GameState, meta: GkMetadata, mem: GkMemory, a: int, b: int,
                exclude: Iterable[int]) -> int:
    """Uncolored line through ``a`` but not ``b`` that accepts the color of ``b``."""
    g, k = s.graph, s.spec.k
    color = s.assignment[b]
    through_b = set(_lines_of(g, meta, b))
    pool = [y for y in _lines_of(g, meta, a) if y not in through_b and y not in exclude]
    admissible = [
        y for y in pool if y not in s.assignment and color not in _neighbor_colors(s, y)
    ]
    # each colored vertex other than a, b rules out at most k of these lines
    others = len(s.assignment) - 2
    bound = len(pool) - k * others
    if len(admissible) < max(bound, 1):
        raise StageInfeasible(
            f"stage 2 has {len(admissible)} admissible lines through {a} (bound {bound})",
            _dump(s, mem),
        )
    return admissible[0]


def _stage3(s: GameState, meta: GkMetadata, mem: GkMemory) -> tuple[Move, str]:
    g, k = s.graph, s.spec.k
    used = {s.assignment[x] for x in mem.X}
    color = min(c for c in range(1, k + 1) if c not in used)
    last = len(mem.X) == k - 1
    pool = sorted(set(_lines_of(g, meta, mem.u)) | set(_lines_of(g, meta, mem.v)))
    pool = [y for y in pool if y not in mem.X]
    admissible = []
    for y in pool:
        if y in s.assignment or color in _neighbor_colors(s, y):
            continue
        if last:
            apex = meta.apex_of(mem.X + [y])
            if apex is None or apex in s.assignment:
                continue
        admissible.append(y)
    others = len(s.assignment) - 2 - len(mem.X)
    bound = len(pool) - k * others
    if len(admissible) < max(bound, 1):
        raise StageInfeasible(
            f"stage 3 has {len(admissible)} admissible lines (bound {bound})", _dump(s, mem)
        )
    y = admissible[0]
    mem.X.append(y)
    if last:
        mem.stage = 4
    return Move(y, color), f"stage3:{len(mem.X)}"


def _threat_replies(s: GameState, meta: GkMetadata) -> int:
    """Number of distinct replies (vertex, color) that would saturate some vertex."""
    k = s.spec.k
    g = s.graph
    candidates: set[int] = set()
    colored_lines = sorted(v for v in s.assignment if meta.in_B(v))
    for v in s.assignment:
        if not meta.in_B(v):
            candidates.update(w for w in g.adj[v] if w not in s.assignment)
    for v in colored_lines:
        candidates.update(w for w in _lines_or_points(g, meta, v) if w not in s.assignment)
    # apexes with k - 1 distinctly colored lines; a reply must color the last
    # line, so only playable lines are worth completing
    open_lines = set()
    for v in s.assignment:
        if not meta.in_B(v):
            open_lines.update(y for y in g.adj[v] if meta.in_B(y) and y not in s.assignment)
    for combo in itertools.combinations(colored_lines, k - 1):
        if len({s.assignment[y] for y in combo}) < k - 1:
            continue
        for y in sorted(open_lines):
            apex = meta.apex_of(combo + (y,))
            if apex is not None and apex not in s.assignment:
                candidates.add(apex)
    replies: set[tuple[int, int]] = set()
    for w in candidates:
        cols = _neighbor_colors(s, w)
        if len(cols) != k - 1:
            continue
        missing = next(c for c in range(1, k + 1) if c not in cols)
        playable: set[int] = set()
        for a in s.assignment:
            playable |= g.adj[a] & g.adj[w]
        for x in playable:
            if x not in s.assignment and missing not in _neighbor_colors(s, x):
                replies.add((x, missing))
    return len(replies)


def _opening(s: GameState, rng: random.Random | None) -> Move:
    """Seeded uniform opening; vertex 0 with color 1 without a generator."""
    return Move(0, 1) if rng is None else random_legal_move(s, rng)


class GkGreedyAlice(Strategy):
    """First fit next to Bob's last move, skipping moves that saturate a vertex at once."""

    name = "gk-greedy"

    def choose(self, s, rng):
        if not s.assignment:
            return _opening(s, rng), "open"
        last = s.last_move
        if last is not None:
            for w in s.graph.sorted_neighbors(last.vertex):
                if w in s.assignment:
                    continue
                for c in _legal_colors(s, w):
                    if winner(apply_move(s, Move(w, c))) is not BOB:
                        return Move(w, c), "adjacent"
        return legal_moves(s)[0], "fallback"


class GkLookaheadAlice(Strategy):
    """One-ply lookahead over a bounded candidate set, minimizing Bob's winning replies."""

    name = "gk-lookahead"

    def __init__(self, meta: GkMetadata, max_candidates: int = 16):
        self.meta = meta
        self.max_candidates = max_candidates

    def _candidates(self, s: GameState) -> list[int]:
        meta = self.meta
        near: set[int] = set()
        for v in s.assignment:
            near.update(w for w in _lines_or_points(s.graph, meta, v) if w not in s.assignment)
        return sorted(near)[: self.max_candidates]

    def choose(self, s, rng):
        if not s.assignment:
            return _opening(s, rng), "open"
        best_score, best = None, []
        for w in self._candidates(s):
            for c in _legal_colors(s, w):
                m = Move(w, c)
                child = apply_move(s, m)
                if winner(child) is BOB:
                    continue
                score = _threat_replies(child, self.meta)
                if best_score is None or score < best_score:
                    best_score, best = score, [m]
                elif score == best_score:
                    best.append(m)
        if not best:
            if rng is None:
                return legal_moves(s)[0], "fallback"
            return random_legal_move(s, rng), "fallback"
        m = best[0] if rng is None else rng.choice(best)
        return m, f"replies={best_score}"


# -- harnesses ---------------------------------------------------------------------


def simulate(
    g: Graph,
    spec: GameSpec,
    alice: Strategy,
    bob: Strategy,
    seed: int | None = 0,
    observer: Callable[[GameState, Ply], None] | None = None,
    players: dict | None = None,
) -> Trace:
    """Play one full game; ``observer`` sees the state after every ply.

    If ``players`` is a dict it receives the per-game player objects.
    """
    rng = random.Random(seed)
    started = {ALICE: alice.start(g, spec), BOB: bob.start(g, spec)}
    if players is not None:
        players.update(started)
    s = new_game(g, spec)
    plies: list[Ply] = []
    while winner(s) is None:
        who = s.turn
        strat = started[who]
        move, note = strat.choose(s, rng)
        reason = check_move(s, move)
        if reason is not None:
            raise StrategyError(
                f"{strat.name} ({who}) made an illegal move {move} at ply {s.moves_made}: {reason}"
            )
        s = apply_move(s, move)
        ply = Ply(who, move, note)
        plies.append(ply)
        if observer is not None:
            observer(s, ply)
    return _finish(spec, plies, s)


@dataclass(frozen=True)
class VerifyResult:
    passed: bool
    witness: Trace | None
    positions: int

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "positions": self.positions,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


class _Failure(Exception):
    pass


def adversarial_verify(
    g: Graph,
    spec: GameSpec,
    alice: Strategy,
    hooks: Iterable[Callable[[GameState], str | None]] = (),
    max_positions: int | None = None,
    require_win: bool = True,
    require_no_threat: bool = True,
) -> VerifyResult:
    """Check a deterministic Alice against every sequence of Bob replies.

    Alice's choice must depend only on the assignment and Bob's last move:
    positions with Bob to move are memoized on the assignment. A marking game
    fails as soon as a vertex is threatened after Alice's move; the witness
    is then extended by Bob's saturating reply. With both ``require_*`` flags
    off only the hooks are checked, and lost branches are simply closed.
    """
    from .solver import BudgetExceeded, _memo_limit

    limit = _memo_limit(max_positions)
    alice = alice.start(g, spec)
    hooks = list(hooks)
    seen: set[frozenset] = set()
    path: list[Ply] = []

    def fail(s: GameState, why: str) -> None:
        raise _Failure(Trace(spec, tuple(path), winner(s), tuple(saturated_vertices(s)), why))

    def alice_turn(s: GameState) -> None:
        move, note = alice.choose(s, None)
        reason = check_move(s, move)
        if reason is not None:
            fail(s, f"Alice's strategy proposed an illegal move {move}: {reason}")
        s = apply_move(s, move)
        path.append(Ply(ALICE, move, note))
        if winner(s) is BOB and require_win:
            fail(s, f"Alice's move saturated vertex {s.saturated}")
        if not spec.coloring and require_no_threat:
            threats = threatened_vertices(s)
            if threats:
                t = threats[0]
                reply = next(w for w in s.graph.sorted_neighbors(t) if _is_playable(s, w))
                path.append(Ply(BOB, Move(reply), f"saturates threatened vertex {t}"))
                fail(apply_move(s, Move(reply)), f"vertex {t} threatened after Alice's move")
        for hook in hooks:
            why = hook(s)
            if why:
                fail(s, why)
        if winner(s) is not None:
            path.pop()
            return
        key = frozenset(s.assignment.items())
        if key in seen:
            path.pop()
            return
        if len(seen) >= limit:
            raise BudgetExceeded(f"verification exceeded {limit} positions")
        for b in legal_moves(s):
            nxt = apply_move(s, b)
            path.append(Ply(BOB, b, None))
            if winner(nxt) is BOB and require_win:
                fail(nxt, f"Bob saturated vertex {nxt.saturated}")
            if winner(nxt) is None:
                alice_turn(nxt)
            path.pop()
        seen.add(key)
        path.pop()

    try:
        alice_turn(new_game(g, spec))
    except _Failure as exc:
        return VerifyResult(False, exc.args[0], len(seen))
    return VerifyResult(True, None, len(seen))


# -- registry ------------------------------------------------------------------------

STRATEGY_NAMES = (
    "first-legal",
    "random",
    "solver",
    "bipartite",
    "outerplanar-marking",
    "gk-bob",
    "gk-greedy",
    "gk-lookahead",
)


def make_strategy(name: str, meta: GkMetadata | None = None) -> Strategy:
    simple = {
        "first-legal": FirstLegal,
        "random": UniformRandom,
        "solver": SolverPlayer,
        "bipartite": AliceBipartite,
        "outerplanar-marking": AliceOuterplanar,
        "gk-greedy": GkGreedyAlice,
    }
    if name in simple:
        return simple[name]()
    if name in ("gk-bob", "gk-lookahead"):
        if meta is None:
            raise StrategyError(f"strategy {name} needs a graph built by the gk construction")
        return GkBob(meta) if name == "gk-bob" else GkLookaheadAlice(meta)
    raise StrategyError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")
