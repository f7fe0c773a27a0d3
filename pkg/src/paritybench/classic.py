"""Baseline solvers (Zielonka's recursion and small progress measures) plus
an exhaustive strategy-enumeration oracle for tiny games.

All solvers use the min-parity convention: player 0 wins a play when the
least priority seen infinitely often is even. Non-canonical input is
normalized first; node indices are never changed.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from . import budget as _budget
from . import kernels
from .arena import MIN, ParityGame, SolveResult, empty_set, full_set, normalize

ORACLE_BOUND = 12


class OracleBoundError(ValueError):
    """The game is too large for strategy enumeration."""


def attractor(game: ParityGame, player: int, target: np.ndarray,
              alive: np.ndarray | None = None) -> np.ndarray:
    """Least superset of ``target`` closed under ``player``'s one-step force.

    Computed backwards with lazily initialised out-degree counters, inside
    the sub-arena ``alive`` (the whole game by default).
    """
    if alive is None:
        alive = full_set(game.node_count)
    attr, _ = kernels.attractor(game.succ_ptr, game.succ_idx, game.pred_ptr, game.pred_idx,
                                game.owner, player, target, alive)
    return attr


def _attract(game, player, target, alive, strategy):
    attr, rank = kernels.attractor(game.succ_ptr, game.succ_idx, game.pred_ptr,
                                   game.pred_idx, game.owner, player, target, alive)
    if strategy is not None:
        chosen = kernels.attractor_strategy(game.succ_ptr, game.succ_idx, game.owner,
                                            player, rank, target)
        hit = chosen >= 0
        strategy[hit] = chosen[hit]
    return attr


def _first_alive_successor(game, v, alive):
    for w in game.successors(v).tolist():
        if alive[w]:
            return w
    raise AssertionError(f"node {v} has no successor inside the sub-arena")


def _zielonka(game, alive, strategies, budget, counter):
    """Regions (w0, w1) of the sub-arena ``alive``; fills ``strategies`` in place."""
    counter[0] += 1
    n = game.node_count
    won = [empty_set(n), empty_set(n)]
    alive = alive.copy()
    while alive.any():
        _budget.check(budget)
        _budget.charge(budget, 4 * n)
        m = int(game.priority[alive].min())
        i = m % 2
        top = alive & (game.priority == m)
        attr = _attract(game, i, top, alive, strategies[i])
        sub = _zielonka(game, alive & ~attr, strategies, budget, counter)
        if not sub[1 - i].any():
            won[i] |= alive
            if strategies[i] is not None:
                mine = np.flatnonzero(top & (game.owner == i)).tolist()
                for v in mine:
                    strategies[i][v] = _first_alive_successor(game, v, alive)
            break
        escape = _attract(game, 1 - i, sub[1 - i], alive, strategies[1 - i])
        won[1 - i] |= escape
        alive &= ~escape
    return won


def solve_zielonka(game: ParityGame, *, strategies: bool = True, budget=None) -> SolveResult:
    """Zielonka's recursive algorithm on the min-parity form of ``game``.

    The opponent-attractor step loops instead of recursing, so the recursion
    depth is bounded by the number of distinct priorities.
    """
    start = time.perf_counter()
    canon = normalize(game)
    n = canon.node_count
    strat = [np.full(n, -1, dtype=np.int64), np.full(n, -1, dtype=np.int64)] if strategies \
        else [None, None]
    counter = [0]
    w0, w1 = _zielonka(canon, full_set(n), strat, budget, counter)
    if strategies:
        strat[0][~(w0 & (canon.owner == 0))] = -1
        strat[1][~(w1 & (canon.owner == 1))] = -1
    return SolveResult(w0=w0, w1=w1, algorithm="re", strategy0=strat[0], strategy1=strat[1],
                       work=counter[0], wall_time=time.perf_counter() - start)


# --- small progress measures -------------------------------------------------


def measure_space(game: ParityGame) -> np.ndarray:
    """Component bounds: how many nodes carry each odd priority 1, 3, 5, ..."""
    d = game.max_priority()
    odd = list(range(1, d + 1, 2))
    return np.array([int((game.priority == q).sum()) for q in odd], dtype=np.int32)


def measure_space_size(game: ParityGame) -> int:
    return math.prod(int(b) + 1 for b in measure_space(game))


def solve_spm(game: ParityGame, *, strategies: bool = True, budget=None,
              chunk: int = 1 << 16) -> SolveResult:
    """Jurdzinski's small progress measures, lifted to the least fixpoint.

    Nodes whose measure reaches top are won by player 1. The work-list loop
    runs in chunks of ``chunk`` lift attempts between budget checks.
    """
    start = time.perf_counter()
    g = normalize(game)
    n = g.node_count
    bounds = measure_space(g)
    c = bounds.shape[0]
    _budget.charge(budget, 4 * n * c + 6 * n)
    measures = np.zeros(n * c, dtype=np.int32)
    top = np.zeros(n, dtype=np.uint8)
    queue = np.arange(n, dtype=np.int32)
    inq = np.ones(n, dtype=np.uint8)
    state = np.array([0, n, 0], dtype=np.int64)
    done = n == 0
    while not done:
        _budget.check(budget)
        done = kernels.spm_run(g.succ_ptr, g.succ_idx, g.pred_ptr, g.pred_idx, g.owner,
                               g.priority, bounds, measures, top, queue, inq, state, chunk)
    w1 = top.astype(bool)
    w0 = ~w1
    strat0 = None
    if strategies:
        strat0 = _spm_strategy(g, measures.reshape(n, c) if c else np.zeros((n, 0), np.int32),
                               w0, bounds)
    return SolveResult(w0=w0, w1=w1, algorithm="sp", strategy0=strat0,
                       work=int(state[2]), wall_time=time.perf_counter() - start)


def _spm_strategy(g, rho, w0, bounds):
    """Player 0 moves to a successor minimising the progress measure."""
    from ._pykernels import _greater, _prog

    strat = np.full(g.node_count, -1, dtype=np.int64)
    rows = [tuple(r) for r in rho.tolist()]
    bd = bounds.tolist()
    for v in np.flatnonzero(w0 & (g.owner == 0)).tolist():
        best, best_w = "unset", -1
        for w in g.successors(v).tolist():
            cand = _prog(int(g.priority[v]), rows[w] if w0[w] else None, bd)
            if best == "unset" or _greater(best, cand):
                best, best_w = cand, w
        strat[v] = best_w
    return strat


# --- exhaustive oracle --------------------------------------------------------


def _closure(succ_mask, allowed):
    """reach[v]: bitmask of nodes reachable from v in >= 1 step inside ``allowed``."""
    n = len(succ_mask)
    reach = [succ_mask[v] & allowed for v in range(n)]
    for k in range(n):
        bit = 1 << k
        if not allowed & bit:
            continue
        rk = reach[k]
        for v in range(n):
            if reach[v] & bit:
                reach[v] |= rk
    return reach


def _losing_mask(succ_mask, priority, semantics):
    """Nodes from which some cycle with odd deciding priority is reachable."""
    n = len(succ_mask)
    full = (1 << n) - 1
    bad = 0
    for m in sorted(set(priority)):
        if m % 2 == 0:
            continue
        if semantics == MIN:
            allowed = sum(1 << v for v in range(n) if priority[v] >= m)
        else:
            allowed = sum(1 << v for v in range(n) if priority[v] <= m)
        reach = _closure(succ_mask, allowed)
        for v in range(n):
            if priority[v] == m and reach[v] >> v & 1:
                bad |= 1 << v
    if not bad:
        return 0
    reach_all = _closure(succ_mask, full)
    losing = bad
    for v in range(n):
        if reach_all[v] & bad:
            losing |= 1 << v
    return losing


def solve_oracle(game: ParityGame, *, bound: int = ORACLE_BOUND, budget=None) -> SolveResult:
    """Enumerate every memoryless player-0 strategy.

    A node is won by player 0 iff some strategy leaves no cycle with odd
    deciding priority reachable from it, player 1 keeping all moves. Works
    directly on either parity convention and needs no normalization.
    """
    n = game.node_count
    if n > bound:
        raise OracleBoundError(f"oracle is limited to {bound} nodes, game has {n}")
    start = time.perf_counter()
    succ = game.successor_lists()
    prio = game.priority.tolist()
    owner = game.owner.tolist()
    full = (1 << n) - 1
    p0 = [v for v in range(n) if owner[v] == 0]
    base = [0 if owner[v] == 0 else sum(1 << w for w in succ[v]) for v in range(n)]
    won = 0
    count = 0
    for choice in itertools.product(*(succ[v] for v in p0)):
        count += 1
        if count % 4096 == 0:
            _budget.check(budget)
        mask = list(base)
        for v, w in zip(p0, choice):
            mask[v] = 1 << w
        won |= full & ~_losing_mask(mask, prio, game.semantics)
        if won == full:
            break
    w0 = np.array([bool(won >> v & 1) for v in range(n)], dtype=bool)
    return SolveResult(w0=w0, w1=~w0, algorithm="oracle", work=count,
                       wall_time=time.perf_counter() - start)


def strategy_sound(game: ParityGame, player: int, region: np.ndarray,
                   strategy: np.ndarray) -> bool:
    """Whether following ``strategy`` inside ``region`` wins for ``player``.

    Every opponent deviation must stay in the region, and every cycle of the
    strategy-restricted graph inside it must have parity ``player``. Uses the
    game's own parity convention; intended for oracle-sized games.
    """
    n = game.node_count
    if n > 62:
        raise OracleBoundError("strategy check uses bitmask closure; game too large")
    succ = game.successor_lists()
    owner = game.owner.tolist()
    mask = []
    for v in range(n):
        if not region[v]:
            mask.append(0)
            continue
        if owner[v] == player:
            w = int(strategy[v])
            if w < 0 or w not in succ[v] or not region[w]:
                return False
            mask.append(1 << w)
        else:
            if any(not region[w] for w in succ[v]):
                return False
            mask.append(sum(1 << w for w in succ[v]))
    prio = game.priority.tolist()
    if player == 1:
        # reuse the odd-cycle search by shifting parities
        prio = [p + 1 for p in prio]
    losing = _losing_mask(mask, prio, game.semantics)
    inside = sum(1 << v for v in range(n) if region[v])
    return not (losing & inside)
