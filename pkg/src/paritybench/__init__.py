"""Parity game solvers built around the APT nested-fixpoint algorithm.

Zielonka's algorithm and small progress measures serve as baselines; the
benchmark harness times them on seeded random games.
"""

from importlib import resources

from .apt import AptStats, ExtendedParityGame, solve_apt, win, win_dual, win_epg
from .arena import (MAX, MIN, GameError, ParityGame, ParseError, SolveResult, alpha_partition,
                    force, members, nodeset, normalize, normalize_with_map, parse_game,
                    parse_solution, serialize_game, serialize_solution)
from .budget import Budget, MemoutGuard, SolverAbort, SolverTimeout
from .classic import (OracleBoundError, attractor, solve_oracle, solve_spm, solve_zielonka,
                      strategy_sound)
from .generator import GenSpec, family_size, generate, generate_one
from .kernels import BACKEND as KERNEL_BACKEND
from .transform import compress_priorities, preprocess_solve, remove_self_loops, scc_solve

__version__ = "0.1.0"


def example_game() -> ParityGame:
    """The seven-node running example (min-parity, nodes named q0..q6)."""
    text = resources.files(__package__).joinpath("data/example.gm").read_text(encoding="utf-8")
    return parse_game(text, MIN)


__all__ = [
    "AptStats", "ExtendedParityGame", "solve_apt", "win", "win_dual", "win_epg",
    "MAX", "MIN", "GameError", "ParityGame", "ParseError", "SolveResult", "alpha_partition",
    "force", "members", "nodeset", "normalize", "normalize_with_map", "parse_game",
    "parse_solution", "serialize_game", "serialize_solution",
    "Budget", "MemoutGuard", "SolverAbort", "SolverTimeout",
    "OracleBoundError", "attractor", "solve_oracle", "solve_spm", "solve_zielonka",
    "strategy_sound", "GenSpec", "family_size", "generate", "generate_one", "KERNEL_BACKEND",
    "compress_priorities", "preprocess_solve", "remove_self_loops", "scc_solve",
    "example_game", "__version__",
]
