"""Command-line interface: every command prints one canonical JSON report.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or input
error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence, TextIO

from . import __version__
from .constructions import (
    GkMetadata,
    complete_graph,
    connected_graphs,
    cycle_graph,
    enumerate_maximal_outerplanar,
    fan_graph,
    figure2_graph,
    gk_construction,
    knn_minus_matching,
    path_graph,
    projective_plane_incidence,
)
from .engine import (
    ALICE,
    BOB,
    GameError,
    GameSpec,
    Move,
    apply_move,
    check_move,
    new_game,
    saturated_vertices,
    winner,
)
from .graph import Graph, GraphError, is_connected, read_graph, write_graph
from .outerplanar import decompose, maximal_completion, triangle_tree
from .solver import PARAMETERS, BudgetExceeded, game_parameter, solve_fixed_k, winner_profile
from .strategies import (
    STRATEGY_NAMES,
    AliceBipartite,
    AliceOuterplanar,
    Ply,
    StrategyError,
    Trace,
    adversarial_verify,
    make_strategy,
    observation3_violation,
    observation4_violation,
    outerplanar_context,
    simulate,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: list[str]
    graph: dict | None = None
    results: Any = None
    stats: dict = field(default_factory=dict)
    error: dict | None = None
    exit_code: int = EXIT_OK
    wall_time: float | None = None

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "tool_version": __version__,
            "command": self.command,
            "graph": self.graph,
            "results": self.results,
            "stats": self.stats,
            "error": self.error,
            "exit_code": self.exit_code,
        }
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _fix_floats(x: Any) -> Any:
    if isinstance(x, float):
        return float(f"{x:.6g}")
    if isinstance(x, dict):
        return {k: _fix_floats(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fix_floats(v) for v in x]
    return x


def emit_report(r: RunReport, sink: TextIO) -> int:
    """Write ``r`` as canonical JSON (sorted keys, fixed floats); returns bytes written."""
    text = json.dumps(_fix_floats(r.to_json()), sort_keys=True, indent=2) + "\n"
    sink.write(text)
    sink.flush()
    return len(text.encode())


# -- graph arguments ------------------------------------------------------------

BUILTINS: dict[str, Callable[..., Graph]] = {
    "figure2": figure2_graph,
    "fan": fan_graph,
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "knn-minus-m": knn_minus_matching,
    "pg": projective_plane_incidence,
}


def load_graph(spec: str, fmt: str | None = None) -> tuple[Graph, GkMetadata | None]:
    """A builtin name such as ``figure2``, ``fan:6``, ``gk:3:11:capped:100``, or a file path."""
    head, _, rest = spec.partition(":")
    if head == "gk":
        parts = rest.split(":")
        if len(parts) < 2:
            raise UsageError("gk graphs are written gk:K:Q or gk:K:Q:capped:N")
        policy = ":".join(parts[2:]) or "full"
        return gk_construction(_int(parts[0], spec), _int(parts[1], spec), policy)
    if head in BUILTINS:
        args = [_int(a, spec) for a in rest.split(":")] if rest else []
        try:
            return BUILTINS[head](*args), None
        except TypeError:
            raise UsageError(f"wrong parameters for builtin graph {head!r}") from None
    try:
        return read_graph(spec, fmt), None
    except OSError as exc:
        raise GraphError(f"cannot read graph file {spec!r}: {exc.strerror}") from None


def _int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"graph {spec!r}: {text!r} is not an integer") from None


def graph_info(g: Graph) -> dict:
    return {"n": g.n, "m": g.num_edges, "digest": g.digest, "max_degree": g.max_degree}


def _spec(args) -> GameSpec:
    return GameSpec(args.game, bool(args.connected), args.k)


def _parameter_name(kind: str, connected: bool) -> str:
    return next(name for name, key in PARAMETERS.items() if key == (kind, connected))


# -- commands ----------------------------------------------------------------------


def cmd_solve(args, report: RunReport) -> int:
    g, _ = load_graph(args.graph, args.format)
    report.graph = graph_info(g)
    spec = _spec(args)
    res = solve_fixed_k(g, spec, canonical=not args.no_canonical, pv=args.pv)
    report.results = {
        "parameter": _parameter_name(spec.kind, spec.connected),
        "k": spec.k,
        "spec": spec.to_json(),
        **res.to_json(),
    }
    report.stats = {"nodes": res.nodes_expanded, "memo_hits": res.memo_hits}
    return EXIT_OK


def cmd_profile(args, report: RunReport) -> int:
    g, _ = load_graph(args.graph, args.format)
    report.graph = graph_info(g)
    if args.k_min < 1 or args.k_max < args.k_min:
        raise UsageError("need 1 <= --k-min <= --k-max")
    prof = winner_profile(g, args.game, bool(args.connected), range(args.k_min, args.k_max + 1),
                          canonical=not args.no_canonical)
    report.results = {"parameter": _parameter_name(args.game, bool(args.connected)),
                      **prof.to_json()}
    report.stats = {"nodes": sum(prof.nodes.values())}
    return EXIT_OK


def _strategy(name: str, meta: GkMetadata | None):
    if name not in STRATEGY_NAMES:
        raise UsageError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")
    return make_strategy(name, meta)


def cmd_simulate(args, report: RunReport) -> int:
    g, meta = load_graph(args.graph, args.format)
    report.graph = graph_info(g)
    spec = _spec(args)
    alice, bob = _strategy(args.alice, meta), _strategy(args.bob, meta)
    if args.games < 1:
        raise UsageError("--games must be positive")
    if args.games == 1:
        trace = simulate(g, spec, alice, bob, seed=args.seed)
        trace.replay(g)
        report.results = {"verdict": str(trace.verdict), "plies": len(trace.plies),
                          "trace": trace.to_json()}
        return EXIT_OK
    verdicts = {"Alice": 0, "Bob": 0}
    longest = 0
    for i in range(args.games):
        trace = simulate(g, spec, alice, bob, seed=args.seed + i)
        verdicts[str(trace.verdict)] += 1
        longest = max(longest, len(trace.plies))
    report.results = {"games": args.games, "first_seed": args.seed, "verdicts": verdicts,
                      "max_plies": longest}
    return EXIT_OK


def _verify_targets(args) -> list[tuple[str, Graph]]:
    if args.family == "triangulations":
        if args.n is None:
            raise UsageError("--family triangulations needs --n")
        return [(f"triangulation:{args.n}:{i}", m.gm)
                for i, m in enumerate(enumerate_maximal_outerplanar(args.n))]
    if args.graph is None:
        raise UsageError("--family file needs --graph")
    g, _ = load_graph(args.graph, args.format)
    return [(args.graph, g)]


def cmd_verify(args, report: RunReport) -> int:
    targets = _verify_targets(args)
    if len(targets) == 1:
        report.graph = graph_info(targets[0][1])
    failures = []
    positions = 0
    for name, g in targets:
        if args.strategy == "outerplanar-marking":
            spec = GameSpec("marking", True, args.k)
            ctx = outerplanar_context(g)
            alice = AliceOuterplanar()
            hooks = [lambda s, c=ctx: observation3_violation(s, c),
                     lambda s, c=ctx: observation4_violation(s, c)]
        elif args.strategy == "bipartite":
            spec = GameSpec("coloring", True, args.k)
            alice, hooks = AliceBipartite(), []
        else:
            raise UsageError("--strategy must be outerplanar-marking or bipartite")
        res = adversarial_verify(g, spec, alice, hooks, max_positions=args.max_positions)
        positions += res.positions
        if not res.passed:
            entry = {"graph": name, "graph6": write_graph(g, "graph6").decode().strip(),
                     "failure": res.witness.failure}
            if len(failures) < args.max_witnesses:
                entry["witness"] = res.witness.to_json()
            failures.append(entry)
    report.results = {
        "family": args.family,
        "n": args.n,
        "strategy": args.strategy,
        "k": args.k,
        "graphs": len(targets),
        "passed": len(targets) - len(failures),
        "failed": len(failures),
        "verdict": "pass" if not failures else "fail",
        "failures": failures,
    }
    report.stats = {"positions": positions}
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_decompose(args, report: RunReport) -> int:
    g, _ = load_graph(args.graph, args.format)
    report.graph = graph_info(g)
    if args.root_edge:
        u, v = args.root_edge
        if not g.has_edge(u, v):
            raise UsageError(f"({u}, {v}) is not an edge of the graph")
        m = maximal_completion(g, (u, v))
    else:
        ctx = outerplanar_context(g)
        if ctx.decomposition is None:
            raise UsageError("a single vertex has no decomposition")
        m = ctx.decomposition.completion
    d = decompose(m)
    tree = triangle_tree(m) if g.n >= 3 else None
    report.results = {
        **d.to_json(),
        "triangle_tree": None if tree is None else {
            "faces": [list(f) for f in tree.faces],
            "edges": [list(e) for e in tree.edges],
        },
    }
    return EXIT_OK


def cmd_generate(args, report: RunReport) -> int:
    fam = args.family
    meta = None
    if fam == "figure2":
        graphs = [figure2_graph()]
    elif fam == "knn-minus-m":
        graphs = [knn_minus_matching(_need(args.n, "--n"))]
    elif fam == "pg-incidence":
        graphs = [projective_plane_incidence(_need(args.q, "--q"))]
    elif fam == "gk":
        g, meta = gk_construction(_need(args.k, "--k"), _need(args.q, "--q"), args.apex_policy)
        graphs = [g]
    else:
        graphs = [m.gm for m in enumerate_maximal_outerplanar(_need(args.n, "--n"))]
    fmt = args.out_format
    if fmt == "edge-list" and len(graphs) > 1:
        raise UsageError("several graphs need --out-format graph6")
    data = b"".join(write_graph(g, fmt) for g in graphs)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    elif len(data) > 1_000_000:
        raise UsageError("output exceeds 1 MB; pass --out FILE")
    report.results = {
        "family": fam,
        "count": len(graphs),
        "format": fmt,
        "graphs": [graph_info(g) for g in graphs],
        "metadata": None if meta is None else meta.to_json(),
        "data": None if args.out else data.decode(),
        "out": args.out,
    }
    return EXIT_OK


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"this family needs {flag}")
    return value


def _profile(g: Graph, kind: str, connected: bool) -> list[str]:
    return [str(w) for _, w in sorted(
        winner_profile(g, kind, connected, range(1, g.max_degree + 2)).winners.items())]


def cmd_survey(args, report: RunReport) -> int:
    if not 1 <= args.n_max <= 7:
        raise UsageError("--n-max must be between 1 and 7")
    findings = []
    examined = 0
    for n in range(1, args.n_max + 1):
        for g in connected_graphs(n):
            examined += 1
            g6 = write_graph(g, "graph6").decode().strip()
            if args.question == "q3-nonmonotone":
                prof = _profile(g, "coloring", True)
                wins = [k for k, w in enumerate(prof, 1) if w == "Alice" and k >= 3]
                if wins and any(w == "Bob" for w in prof[wins[0]:]):
                    findings.append({"graph6": g6, "n": n, "profile": prof})
            elif args.question == "q4-monotonicity":
                base = game_parameter(g, "col_cg")
                for label, h in _connected_deletions(g):
                    val = game_parameter(h, "col_cg")
                    if val > base:
                        findings.append({"graph6": g6, "n": n, "col_cg": base, "subgraph": label,
                                         "subgraph_graph6": write_graph(h, "graph6").decode().strip(),
                                         "subgraph_col_cg": val})
            else:
                vals = {name: game_parameter(g, name) for name in PARAMETERS}
                if vals["chi_g"] < vals["chi_cg"] or vals["col_g"] < vals["col_cg"]:
                    findings.append({"graph6": g6, "n": n, **vals})
    report.results = {
        "question": args.question,
        "n_max": args.n_max,
        "graphs_examined": examined,
        "findings": findings,
        "note": "exploration only: candidates and solver-verified values, no claims",
    }
    return EXIT_OK


def _connected_deletions(g: Graph):
    for e in g.edges():
        h = g.with_edges([f for f in g.edges() if f != e])
        if is_connected(h):
            yield f"minus edge {e[0]}-{e[1]}", h
    for v in range(g.n):
        if g.n > 1:
            h, _ = g.induced_subgraph(w for w in range(g.n) if w != v)
            if is_connected(h):
                yield f"minus vertex {v}", h


def cmd_play(args, report: RunReport, stdin: TextIO, stderr: TextIO) -> int:
    g, meta = load_graph(args.graph, args.format)
    report.graph = graph_info(g)
    spec = _spec(args)
    human = ALICE if args.human == "alice" else BOB
    opponent = _strategy(args.opponent, meta).start(g, spec)
    rng = random.Random(args.seed)
    s = new_game(g, spec)
    plies: list[Ply] = []
    aborted = False
    while winner(s) is None:
        if s.turn is human:
            stderr.write(f"[{s.turn}] move ({'vertex color' if spec.coloring else 'vertex'}): ")
            stderr.flush()
            line = stdin.readline()
            if not line or line.strip() in ("quit", "q"):
                aborted = True
                break
            try:
                parts = [int(x) for x in line.split()]
                m = Move(parts[0], parts[1] if spec.coloring and len(parts) > 1 else None)
            except (ValueError, IndexError):
                stderr.write("could not parse the move\n")
                continue
            reason = check_move(s, m)
            if reason is not None:
                stderr.write(f"illegal: {reason}\n")
                continue
            note = "human"
        else:
            m, note = opponent.choose(s, rng)
            stderr.write(f"[{s.turn}] {m}\n")
        plies.append(Ply(s.turn, m, note))
        s = apply_move(s, m)
    trace = Trace(spec, tuple(plies), winner(s), tuple(saturated_vertices(s)),
                  "aborted" if aborted else None)
    report.results = {"verdict": None if trace.verdict is None else str(trace.verdict),
                      "aborted": aborted, "trace": trace.to_json()}
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _game_args(p: argparse.ArgumentParser, with_k: bool = True) -> None:
    p.add_argument("--graph", required=True, help="builtin name (figure2, fan:6, gk:3:11) or file")
    p.add_argument("--format", choices=("edge-list", "graph6"), default=None)
    p.add_argument("--game", choices=("coloring", "marking"), required=True)
    p.add_argument("--connected", action="store_true")
    if with_k:
        p.add_argument("--k", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conngame", description=__doc__.splitlines()[0])
    parser.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("solve", help="exact winner for one k")
    _game_args(p)
    p.add_argument("--pv", action="store_true", help="include a principal variation")
    p.add_argument("--no-canonical", action="store_true")

    p = sub.add_parser("profile", help="winners over a range of k")
    _game_args(p, with_k=False)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--no-canonical", action="store_true")

    p = sub.add_parser("simulate", help="play strategies against each other")
    _game_args(p)
    p.add_argument("--alice", required=True)
    p.add_argument("--bob", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--games", type=int, default=1)

    p = sub.add_parser("verify-strategy", help="check a strategy against every Bob")
    p.add_argument("--family", choices=("triangulations", "file"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--graph")
    p.add_argument("--format", choices=("edge-list", "graph6"), default=None)
    p.add_argument("--strategy", choices=("outerplanar-marking", "bipartite"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-positions", type=int, default=None)
    p.add_argument("--max-witnesses", type=int, default=3)

    p = sub.add_parser("decompose", help="trapezoid decomposition of an outerplanar graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=("edge-list", "graph6"), default=None)
    p.add_argument("--root-edge", type=int, nargs=2, metavar=("U", "V"))

    p = sub.add_parser("generate", help="emit a graph family")
    p.add_argument("--family", choices=("figure2", "knn-minus-m", "pg-incidence", "gk",
                                        "triangulations"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--apex-policy", default="full")
    p.add_argument("--out-format", choices=("edge-list", "graph6"), default="graph6")
    p.add_argument("--out")

    p = sub.add_parser("survey", help="search small graphs around an open question")
    p.add_argument("--question", choices=("q3-nonmonotone", "q4-monotonicity",
                                          "q5-connectivity-gap"), required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("play", help="play in the terminal against a strategy")
    _game_args(p)
    p.add_argument("--human", choices=("alice", "bob"), required=True)
    p.add_argument("--opponent", default="solver")
    p.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "profile": cmd_profile,
    "simulate": cmd_simulate,
    "verify-strategy": cmd_verify,
    "decompose": cmd_decompose,
    "generate": cmd_generate,
    "survey": cmd_survey,
}


def run_command(argv: Sequence[str], stdin: TextIO | None = None,
                stderr: TextIO | None = None) -> RunReport:
    """Run one command and return its report (the exit code is ``report.exit_code``)."""
    argv = list(argv)
    report = RunReport(command=argv)
    start = time.perf_counter()
    timing = False
    try:
        args = build_parser().parse_args(argv)
        timing = args.timing
        if args.command is None:
            raise UsageError("a command is required")
        if args.command == "play":
            code = cmd_play(args, report, stdin or sys.stdin, stderr or sys.stderr)
        else:
            code = COMMANDS[args.command](args, report)
        report.exit_code = code
    except UsageError as exc:
        report.error, report.exit_code = {"kind": "usage", "message": str(exc)}, EXIT_USAGE
    except (GraphError, GameError) as exc:
        report.error, report.exit_code = {"kind": "input", "message": str(exc)}, EXIT_USAGE
    except StrategyError as exc:
        report.error, report.exit_code = {"kind": "strategy", "message": str(exc)}, EXIT_USAGE
    except BudgetExceeded as exc:
        report.error, report.exit_code = {"kind": "budget", "message": str(exc)}, EXIT_BUDGET
    if timing:
        report.wall_time = time.perf_counter() - start
    return report


def main(argv: Sequence[str] | None = None) -> int:
    report = run_command(sys.argv[1:] if argv is None else argv)
    emit_report(report, sys.stdout)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
