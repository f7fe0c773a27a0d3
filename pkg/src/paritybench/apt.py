"""The APT solver: nested least fixpoints over extended parity games.

An extended parity game adds two disjoint node sets to an arena: reaching a
*visiting* node wins for player 0, reaching an *avoiding* node wins for
player 1, and plays that touch neither are decided by the min-parity
condition. ``win`` computes a player's winning region by recursion on the
priority partition; every level runs a least-fixpoint iteration that moves
nodes of its priority class between the two special sets.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import budget as _budget
from .arena import (ParityGame, SolveResult, alpha_partition, empty_set, force,
                    normalize)


@dataclass
class ExtendedParityGame:
    game: ParityGame
    visiting: np.ndarray
    avoiding: np.ndarray

    def __post_init__(self):
        if not self.game.is_canonical():
            raise ValueError("extended parity games use canonical min-parity arenas")
        if (self.visiting & self.avoiding).any():
            raise ValueError("visiting and avoiding sets must be disjoint")

    def reduced(self) -> ParityGame:
        """Plain game where special nodes become self-loops.

        Visiting nodes get priority 2 (even), avoiding nodes priority 1 (odd).
        Regions agree with the extended game outside ``visiting | avoiding``;
        a play that merely starts on a special node is not decided by it, so
        those nodes can differ. See ``reduced_exact``.
        """
        g = self.game
        special = self.visiting | self.avoiding
        succ = g.successor_lists()
        prio = g.priority.copy()
        for v in np.flatnonzero(special).tolist():
            succ[v] = [v]
            prio[v] = 2 if self.visiting[v] else 1
        return ParityGame.from_lists(g.owner, prio, succ)

    def reduced_exact(self) -> ParityGame:
        """Equivalent plain game on ``n + s`` nodes for ``s`` special nodes.

        Each special node keeps its edges and gains a sink copy with a
        self-loop (priority 2 for visiting, 1 for avoiding); every edge into a
        special node is redirected to its copy. The first ``n`` nodes carry
        the regions of the extended game.
        """
        g = self.game
        n = g.node_count
        special = np.flatnonzero(self.visiting | self.avoiding)
        copy = np.full(n, -1, dtype=np.int64)
        copy[special] = n + np.arange(special.size)
        succ = [[int(copy[w]) if copy[w] >= 0 else w for w in ws] for ws in g.successor_lists()]
        succ += [[int(c)] for c in copy[special]]
        owner = np.concatenate([g.owner, np.zeros(special.size, dtype=g.owner.dtype)])
        prio = np.concatenate([g.priority, np.where(self.visiting[special], 2, 1)])
        return ParityGame.from_lists(owner, prio, succ)


@dataclass
class AptStats:
    depth: int = 0
    recursive_calls: int = 0
    outer_fixpoint_iterations: list[int] = field(default_factory=list)

    def bound(self, n: int) -> int:
        """The (n+2)^d ceiling on recursive calls."""
        return (n + 2) ** self.depth


# trace(depth, player, reach, avoid, result) is called on every base-case evaluation
Trace = Callable[[int, int, np.ndarray, np.ndarray, np.ndarray], None]


class _Solver:
    def __init__(self, game, stats, budget, trace, check_chain):
        self.game = game
        self.stats = stats
        self.budget = budget
        self.trace = trace
        self.check_chain = check_chain
        self.nbytes = game.node_count

    def win(self, player: int, alpha: Sequence[np.ndarray], pos: int,
            reach: np.ndarray, avoid: np.ndarray) -> np.ndarray:
        self.stats.recursive_calls += 1
        if pos == len(alpha):
            result = force(self.game, player, reach)
            if self.trace is not None:
                self.trace(pos, player, reach, avoid, result)
            return result
        _budget.check(self.budget)
        block = alpha[pos]
        opponent = 1 - player
        if not block.any():
            # the body does not depend on Y: one evaluation is the fixpoint
            self.stats.outer_fixpoint_iterations[pos] += 1
            return ~self.win(opponent, alpha, pos + 1, avoid, reach)
        y = empty_set(self.game.node_count)
        while True:
            self.stats.outer_fixpoint_iterations[pos] += 1
            _budget.charge(self.budget, 3 * self.nbytes)
            inner = self.win(opponent, alpha, pos + 1, avoid | (block & ~y), reach | (block & y))
            y_next = ~inner
            if np.array_equal(y_next, y):
                return y
            if self.check_chain and (y & ~y_next).any():
                raise AssertionError("fixpoint iterates must ascend")
            y = y_next


def win(player: int, alpha: Sequence[np.ndarray], reach: np.ndarray, avoid: np.ndarray,
        game: ParityGame | ExtendedParityGame, *, stats: AptStats | None = None,
        budget=None, trace: Trace | None = None, check_chain: bool = False) -> np.ndarray:
    """Winning region of ``player`` for the priority sequence ``alpha``.

    ``reach`` is the set ``player`` wants to visit and ``avoid`` the set the
    opponent wants to visit; for player 0 they are the visiting and avoiding
    sets, for player 1 the other way round. ``alpha`` may be any suffix of the
    full priority partition. Special nodes carry no priority, so they are
    dropped from the blocks of ``alpha``.
    """
    arena = game.game if isinstance(game, ExtendedParityGame) else game
    if (reach & avoid).any():
        raise ValueError("reach and avoid sets must be disjoint")
    special = reach | avoid
    if special.any():
        alpha = [block & ~special for block in alpha]
    if stats is None:
        stats = AptStats()
    stats.depth = len(alpha)
    if len(stats.outer_fixpoint_iterations) < len(alpha):
        stats.outer_fixpoint_iterations = [0] * len(alpha)
    return _Solver(arena, stats, budget, trace, check_chain).win(player, list(alpha), 0,
                                                                 reach, avoid)


def win_epg(epg: ExtendedParityGame, **kw) -> np.ndarray:
    """Player 0's winning region of an extended parity game."""
    alpha = alpha_partition(epg.game)
    return win(0, alpha, epg.visiting, epg.avoiding, epg.game, **kw)


def win_dual(player: int, alpha: Sequence[np.ndarray], visit: np.ndarray, avoid: np.ndarray,
             game: ParityGame) -> np.ndarray:
    """The same regions via the complemented iteration of the original pseudocode.

    Here the loop variable is the opponent's region, started from the
    assignment ``V' := V | F``, ``A' := A`` and iterated downwards; ``visit``
    and ``avoid`` are given from ``player``'s point of view.
    """
    n = game.node_count
    full = np.ones(n, dtype=bool)

    def win_(i, a, v, x):
        if not a:
            return force(game, i, v)
        return full & ~min_fp(1 - i, a, x, v)

    def min_fp(i, a, v, x):
        block, rest = a[0], a[1:]
        y1 = empty_set(n)
        v2 = v | block
        x2 = x
        y2 = win_(i, rest, v2, x2)
        while not np.array_equal(y2, y1):
            y1 = y2
            v2 = v | (block & y1)
            x2 = x | (block & ~y1)
            y2 = win_(i, rest, v2, x2)
        return y2

    special = visit | avoid
    return win_(player, [block & ~special for block in alpha], visit, avoid)


def solve_apt(game: ParityGame, *, budget=None, trace: Trace | None = None,
              check_chain: bool = False) -> SolveResult:
    """Solve ``game`` with APT; regions only, no strategies."""
    start = time.perf_counter()
    canon = normalize(game)
    n = canon.node_count
    stats = AptStats()
    alpha = alpha_partition(canon)
    w0 = win(0, alpha, empty_set(n), empty_set(n), canon, stats=stats, budget=budget,
             trace=trace, check_chain=check_chain)
    return SolveResult(w0=w0, w1=~w0, algorithm="apt", work=stats.recursive_calls,
                       wall_time=time.perf_counter() - start, stats=stats)
