"""Winner-preserving preprocessing steps that compose with any solver.

Priorities can be compressed and self-loops decided up front; ``scc_solve``
works bottom-up over terminal strongly connected components.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import budget as _budget
from .arena import ParityGame, SolveResult, empty_set, full_set, normalize
from .classic import attractor

Backend = Callable[..., SolveResult]


def compress_priorities(game: ParityGame) -> tuple[ParityGame, dict[int, int]]:
    """Map the used priorities onto a dense, parity- and order-preserving range.

    Runs of consecutive used priorities with equal parity collapse into one
    value; the first value is 1 for an odd least priority and 2 otherwise.
    """
    game = normalize(game)
    used = sorted(set(game.priority.tolist()))
    mapping: dict[int, int] = {}
    current = None
    for p in used:
        if current is None:
            current = 1 if p % 2 else 2
        elif p % 2 != current % 2:
            current += 1
        mapping[p] = current
    if all(p == q for p, q in mapping.items()):
        return game, mapping
    lut = np.zeros(used[-1] + 1, dtype=np.int64)
    for p, q in mapping.items():
        lut[p] = q
    return game.with_priority(lut[game.priority]), mapping


def remove_self_loops(game: ParityGame):
    """Decide or drop every self-loop.

    Returns ``(residual, index, w0, w1)``: the residual game, the original
    index of each residual node, and the regions decided along the way
    (boolean arrays over the original nodes). The residual has no self-loops
    and is left-total.
    """
    game = normalize(game)
    n = game.node_count
    alive = full_set(n)
    won = [empty_set(n), empty_set(n)]
    succ = game.successor_lists()
    owner = game.owner.tolist()
    prio = game.priority.tolist()
    loops = [v for v in range(n) if v in succ[v]]
    changed = True
    while changed:
        changed = False
        for v in loops:
            if not alive[v]:
                continue
            j = owner[v]
            if prio[v] % 2 == j:
                winner = j
            elif not any(alive[w] for w in succ[v] if w != v):
                winner = 1 - j
            else:
                continue
            attr = attractor(game, winner, _single(n, v), alive)
            won[winner] |= attr
            alive &= ~attr
            changed = True
    # every surviving loop now has an alternative: the owner never wants it
    lists = []
    for v in np.flatnonzero(alive).tolist():
        lists.append([w for w in succ[v] if alive[w] and w != v])
    index = np.flatnonzero(alive)
    remap = np.full(n, -1, dtype=np.int64)
    remap[index] = np.arange(index.size)
    residual = ParityGame.from_lists(
        game.owner[index], game.priority[index],
        [[int(remap[w]) for w in ws] for ws in lists],
        names=None if game.names is None else [game.names[i] for i in index],
        node_ids=game.ids[index],
    )
    return residual, index, won[0], won[1]


def _single(n, v):
    s = empty_set(n)
    s[v] = True
    return s


def _terminal_component(game: ParityGame, alive: np.ndarray) -> np.ndarray:
    """A bottom SCC of the sub-arena ``alive``: the one holding the least node index."""
    n = game.node_count
    src = np.repeat(np.arange(n), np.diff(game.succ_ptr))
    dst = game.succ_idx
    keep = alive[src] & alive[dst]
    m = csr_matrix((np.ones(int(keep.sum()), dtype=np.int8), (src[keep], dst[keep])), shape=(n, n))
    _, labels = connected_components(m, directed=True, connection="strong")
    leaving = labels[src[keep]] != labels[dst[keep]]
    not_terminal = np.zeros(labels.max() + 1, dtype=bool)
    not_terminal[labels[src[keep]][leaving]] = True
    candidates = np.flatnonzero(alive & ~not_terminal[labels])
    return labels == labels[candidates[0]]


def scc_solve(game: ParityGame, backend: Backend, *, budget=None, **backend_kw) -> SolveResult:
    """Solve bottom SCCs one at a time, propagating each result by attractors."""
    start = time.perf_counter()
    game = normalize(game)
    n = game.node_count
    alive = full_set(n)
    w = [empty_set(n), empty_set(n)]
    rounds = 0
    while alive.any():
        _budget.check(budget)
        rounds += 1
        comp = _terminal_component(game, alive) & alive
        sub, index = game.subgame(comp)
        res = backend(sub, budget=budget, **backend_kw)
        for player, region in ((0, res.w0), (1, res.w1)):
            target = empty_set(n)
            target[index[region]] = True
            target &= alive
            if not target.any():
                continue
            attr = attractor(game, player, target, alive)
            w[player] |= attr
            alive &= ~attr
    name = getattr(backend, "algorithm", getattr(backend, "__name__", "backend"))
    return SolveResult(w0=w[0], w1=w[1], algorithm=f"scc+{name}", work=rounds,
                       wall_time=time.perf_counter() - start)


def preprocess_solve(game: ParityGame, backend: Backend, flags: str | set[str] = "none",
                     *, budget=None, **backend_kw) -> SolveResult:
    """Run ``backend`` behind the requested preprocessing steps.

    ``flags`` is any of ``none``, ``loops``, ``scc``, ``compress``, ``all`` or a
    ``+``-joined combination. Strategies are not carried through.
    """
    if isinstance(flags, str):
        flags = set(flags.split("+"))
    if "all" in flags:
        flags = {"loops", "scc", "compress"}
    flags.discard("none")
    unknown = flags - {"loops", "scc", "compress"}
    if unknown:
        raise ValueError(f"unknown preprocessing flags {sorted(unknown)}")
    start = time.perf_counter()
    game = normalize(game)
    n = game.node_count
    if not flags:
        return backend(game, budget=budget, **backend_kw)
    w0 = empty_set(n)
    index = np.arange(n)
    work = game
    if "loops" in flags:
        work, index, w0, _ = remove_self_loops(game)
    if "compress" in flags:
        work, _ = compress_priorities(work)
    if work.node_count:
        if "scc" in flags:
            res = scc_solve(work, backend, budget=budget, **backend_kw)
        else:
            res = backend(work, budget=budget, **backend_kw)
        w0 = w0.copy()
        w0[index[res.w0]] = True
    return SolveResult(w0=w0, w1=~w0, algorithm="+".join(sorted(flags)),
                       wall_time=time.perf_counter() - start)
