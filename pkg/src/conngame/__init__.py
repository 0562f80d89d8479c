"""Coloring and marking games on graphs, ordinary and connected."""

__version__ = "0.1.0"

from .engine import ALICE, BOB, GameSpec, GameState, Move, apply_move, legal_moves, new_game, winner
from .graph import Graph, parse_graph, read_graph, write_graph
from .solver import game_parameter, game_parameters, solve_fixed_k, winner_profile

__all__ = [
    "__version__",
    "ALICE",
    "BOB",
    "GameSpec",
    "GameState",
    "Move",
    "Graph",
    "apply_move",
    "legal_moves",
    "new_game",
    "winner",
    "parse_graph",
    "read_graph",
    "write_graph",
    "game_parameter",
    "game_parameters",
    "solve_fixed_k",
    "winner_profile",
]
