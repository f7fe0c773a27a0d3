"""Parity game arenas: the data model, PGSolver I/O and parity conventions.

Nodes are dense indices ``0..n-1``. Successor and predecessor relations are
kept in CSR form (``ptr``/``idx`` array pairs) so the kernels can walk them
without Python overhead. Node sets are boolean numpy arrays of length ``n``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels

log = logging.getLogger(__name__)

MIN = "min"
MAX = "max"


class GameError(ValueError):
    """Raised when a game violates an arena invariant."""


class ParseError(ValueError):
    """Syntax or semantic error in a PGSolver file, with its location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# --- node sets ---------------------------------------------------------------


def empty_set(n: int) -> np.ndarray:
    return np.zeros(n, dtype=bool)


def full_set(n: int) -> np.ndarray:
    return np.ones(n, dtype=bool)


def nodeset(n: int, members: Iterable[int] = ()) -> np.ndarray:
    s = np.zeros(n, dtype=bool)
    idx = np.fromiter(members, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise GameError(f"node set member out of range 0..{n - 1}")
    s[idx] = True
    return s


def members(s: np.ndarray) -> list[int]:
    return np.flatnonzero(s).tolist()


# --- the arena ---------------------------------------------------------------


def _csr(lists: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    lengths = np.fromiter((len(s) for s in lists), dtype=np.int64, count=len(lists))
    ptr = np.zeros(len(lists) + 1, dtype=np.int64)
    np.cumsum(lengths, out=ptr[1:])
    if ptr[-1]:
        idx = np.concatenate([np.asarray(s, dtype=np.int32) for s in lists if len(s)])
    else:
        idx = np.zeros(0, dtype=np.int32)
    return ptr, idx


def _transpose(n: int, ptr: np.ndarray, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    src = np.repeat(np.arange(n, dtype=np.int32), np.diff(ptr))
    order = np.argsort(idx, kind="stable")
    pred_idx = src[order].astype(np.int32)
    counts = np.bincount(idx, minlength=n)
    pred_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=pred_ptr[1:])
    return pred_ptr, pred_idx


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ParityGame:
    """An immutable parity game arena.

    Build instances with :meth:`from_lists` or :meth:`from_csr`; the
    predecessor relation is derived and validated there.
    """

    owner: np.ndarray
    priority: np.ndarray
    succ_ptr: np.ndarray
    succ_idx: np.ndarray
    pred_ptr: np.ndarray = field(repr=False)
    pred_idx: np.ndarray = field(repr=False)
    semantics: str = MIN
    names: tuple[str | None, ...] | None = None
    node_ids: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_csr(cls, owner, priority, succ_ptr, succ_idx, semantics=MIN,
                 names=None, node_ids=None, validate=True, _pred=None) -> "ParityGame":
        owner = np.ascontiguousarray(owner, dtype=np.int8)
        priority = np.ascontiguousarray(priority, dtype=np.int64)
        succ_ptr = np.ascontiguousarray(succ_ptr, dtype=np.int64)
        succ_idx = np.ascontiguousarray(succ_idx, dtype=np.int32)
        n = owner.shape[0]
        if validate:
            _validate(n, owner, priority, succ_ptr, succ_idx, semantics)
        pred_ptr, pred_idx = _pred if _pred is not None else _transpose(n, succ_ptr, succ_idx)
        if names is not None:
            names = tuple(names)
            if len(names) != n:
                raise GameError("names must have one entry per node")
            if all(x is None for x in names):
                names = None
        if node_ids is not None:
            node_ids = np.ascontiguousarray(node_ids, dtype=np.int64)
            if node_ids.shape != (n,):
                raise GameError("node_ids must have one entry per node")
            if validate and np.unique(node_ids).size != n:
                raise GameError("node_ids must be distinct")
            if np.array_equal(node_ids, np.arange(n)):
                node_ids = None
        return cls(
            _frozen(owner), _frozen(priority), _frozen(succ_ptr), _frozen(succ_idx),
            _frozen(pred_ptr), _frozen(pred_idx), semantics, names,
            None if node_ids is None else _frozen(node_ids),
        )

    @classmethod
    def from_lists(cls, owner: Sequence[int], priority: Sequence[int],
                   successors: Sequence[Sequence[int]], semantics: str = MIN,
                   names=None, node_ids=None) -> "ParityGame":
        if not (len(owner) == len(priority) == len(successors)):
            raise GameError("owner, priority and successors must have equal length")
        ptr, idx = _csr(successors)
        return cls.from_csr(owner, priority, ptr, idx, semantics, names, node_ids)

    @property
    def node_count(self) -> int:
        return int(self.owner.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.succ_idx.shape[0])

    @property
    def ids(self) -> np.ndarray:
        """File-level node ids (dense indices unless parsed from a file)."""
        if self.node_ids is None:
            return np.arange(self.node_count, dtype=np.int64)
        return self.node_ids

    def successors(self, v: int) -> np.ndarray:
        return self.succ_idx[self.succ_ptr[v]:self.succ_ptr[v + 1]]

    def predecessors(self, v: int) -> np.ndarray:
        return self.pred_idx[self.pred_ptr[v]:self.pred_ptr[v + 1]]

    def successor_lists(self) -> list[list[int]]:
        idx = self.succ_idx.tolist()
        ptr = self.succ_ptr.tolist()
        return [idx[ptr[v]:ptr[v + 1]] for v in range(self.node_count)]

    def max_priority(self) -> int:
        return int(self.priority.max()) if self.node_count else 0

    def is_canonical(self) -> bool:
        return self.semantics == MIN and (self.node_count == 0 or int(self.priority.min()) >= 1)

    def with_owner(self, owner) -> "ParityGame":
        return ParityGame.from_csr(owner, self.priority, self.succ_ptr, self.succ_idx,
                                   self.semantics, self.names, self.node_ids,
                                   _pred=(self.pred_ptr, self.pred_idx))

    def with_priority(self, priority, semantics: str | None = None) -> "ParityGame":
        return ParityGame.from_csr(self.owner, priority, self.succ_ptr, self.succ_idx,
                                   semantics or self.semantics, self.names, self.node_ids,
                                   validate=False, _pred=(self.pred_ptr, self.pred_idx))

    def subgame(self, keep: np.ndarray) -> tuple["ParityGame", np.ndarray]:
        """Induced sub-arena on ``keep``; returns it and the kept original indices.

        The caller guarantees every kept node keeps at least one kept successor.
        """
        index = np.flatnonzero(keep)
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[index] = np.arange(index.size)
        src = np.repeat(np.arange(self.node_count), np.diff(self.succ_ptr))
        mask = keep[src] & keep[self.succ_idx]
        new_src = remap[src[mask]]
        new_idx = remap[self.succ_idx[mask]]
        counts = np.bincount(new_src, minlength=index.size)
        ptr = np.zeros(index.size + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        names = None if self.names is None else [self.names[i] for i in index]
        sub = ParityGame.from_csr(self.owner[index], self.priority[index], ptr, new_idx,
                                  self.semantics, names, self.ids[index])
        return sub, index

    def structurally_equal(self, other: "ParityGame") -> bool:
        if self.node_count != other.node_count or self.semantics != other.semantics:
            return False
        if not (np.array_equal(self.owner, other.owner)
                and np.array_equal(self.priority, other.priority)
                and np.array_equal(self.succ_ptr, other.succ_ptr)
                and np.array_equal(self.succ_idx, other.succ_idx)
                and np.array_equal(self.ids, other.ids)):
            return False
        return _norm_names(self) == _norm_names(other)


def _norm_names(g: ParityGame):
    if g.names is None:
        return (None,) * g.node_count
    return tuple(None if x is None else " ".join(x.split()) for x in g.names)


def _validate(n, owner, priority, succ_ptr, succ_idx, semantics):
    if semantics not in (MIN, MAX):
        raise GameError(f"unknown semantics {semantics!r}")
    if priority.shape != (n,) or succ_ptr.shape != (n + 1,):
        raise GameError("per-node arrays have inconsistent lengths")
    if n and not np.isin(owner, (0, 1)).all():
        raise GameError("owner must be 0 or 1")
    if n and priority.min() < 0:
        raise GameError("priorities must be non-negative")
    if succ_ptr[0] != 0 or succ_ptr[-1] != succ_idx.shape[0]:
        raise GameError("malformed successor index")
    deg = np.diff(succ_ptr)
    if (deg < 1).any():
        v = int(np.flatnonzero(deg < 1)[0])
        raise GameError(f"node {v} has no successor (moves must be left-total)")
    if succ_idx.size and (succ_idx.min() < 0 or succ_idx.max() >= n):
        raise GameError("successor index out of range")
    if succ_idx.size:
        src = np.repeat(np.arange(n, dtype=np.int64), deg)
        keys = src * n + succ_idx
        if np.unique(keys).size != keys.size:
            raise GameError("successor lists must not contain duplicates")


# --- PGSolver format ---------------------------------------------------------

_TOKEN = re.compile(r'\s*(?:(?P<int>\d+)|(?P<str>"[^"]*")|(?P<punct>[;,])|(?P<word>[A-Za-z_]\w*)|(?P<bad>\S))')


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self._line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(self, pos: int) -> tuple[int, int]:
        from bisect import bisect_right
        line = bisect_right(self._line_starts, pos)
        return line, pos - self._line_starts[line - 1] + 1

    def error(self, message: str, pos: int | None = None):
        line, col = self.where(self.pos if pos is None else pos)
        return ParseError(message, line, col)

    def next(self):
        m = _TOKEN.match(self.text, self.pos)
        if m is None:  # only trailing whitespace left
            self.pos = len(self.text)
            return None, None, self.pos
        self.pos = m.end()
        kind = m.lastgroup
        return kind, m.group(kind), m.start(kind)

    def peek(self):
        saved = self.pos
        tok = self.next()
        self.pos = saved
        return tok

    def expect(self, kind: str, value: str | None = None):
        k, v, at = self.next()
        if k != kind or (value is not None and v != value):
            want = value or kind
            got = "end of input" if k is None else repr(v)
            raise self.error(f"expected {want}, got {got}", at)
        return v, at


def parse_game(text: str, semantics: str = MAX) -> ParityGame:
    """Parse a PGSolver game description.

    ``semantics`` declares the winning convention of the file (PGSolver
    itself uses max-parity). Node ids are mapped to dense indices in order of
    their definition records.
    """
    toks = _Tokens(text)
    bound = None
    kind, value, at = toks.peek()
    if kind == "word":
        if value != "parity":
            raise toks.error(f"unknown keyword {value!r}", at)
        toks.next()
        bound = int(toks.expect("int")[0])
        toks.expect("punct", ";")

    ids: list[int] = []
    where: dict[int, int] = {}
    owners: list[int] = []
    prios: list[int] = []
    raw_succ: list[list[tuple[int, int]]] = []
    names: list[str | None] = []
    while True:
        kind, value, at = toks.next()
        if kind is None:
            break
        if kind != "int":
            raise toks.error(f"expected node id, got {value!r}", at)
        node = int(value)
        if bound is not None and node > bound:
            raise toks.error(f"node id {node} exceeds header bound {bound}", at)
        if node in where:
            raise toks.error(f"duplicate definition of node {node}", at)
        prio = int(toks.expect("int")[0])
        own, own_at = toks.expect("int")
        if own not in ("0", "1"):
            raise toks.error(f"owner must be 0 or 1, got {own}", own_at)
        succ = []
        while True:
            k, v, sat = toks.next()
            if k != "int":
                raise toks.error(f"expected successor id, got {'end of input' if k is None else repr(v)}", sat)
            succ.append((int(v), sat))
            k, v, sat = toks.peek()
            if k == "punct" and v == ",":
                toks.next()
                continue
            break
        name = None
        k, v, sat = toks.peek()
        if k == "str":
            toks.next()
            name = v[1:-1]
        toks.expect("punct", ";")
        where[node] = len(ids)
        ids.append(node)
        owners.append(int(own))
        prios.append(prio)
        raw_succ.append(succ)
        names.append(name)

    successors = []
    for node, succ in zip(ids, raw_succ):
        seen: dict[int, None] = {}
        for s, sat in succ:
            if s not in where:
                if bound is not None and s > bound:
                    raise toks.error(f"successor {s} exceeds header bound {bound}", sat)
                raise toks.error(f"successor {s} of node {node} is never defined", sat)
            if where[s] in seen:
                log.warning("node %d: duplicate successor %d dropped", node, s)
            seen[where[s]] = None
        successors.append(list(seen))
    return ParityGame.from_lists(owners, prios, successors, semantics,
                                 names=names, node_ids=ids)


def serialize_game(game: ParityGame) -> str:
    ids = game.ids.tolist()
    prio = game.priority.tolist()
    owner = game.owner.tolist()
    succ = game.successor_lists()
    bound = max(ids) if ids else 0
    out = [f"parity {bound};\n"]
    for v in range(game.node_count):
        line = f"{ids[v]} {prio[v]} {owner[v]} " + ",".join(str(ids[w]) for w in succ[v])
        if game.names is not None and game.names[v] is not None:
            line += f' "{game.names[v]}"'
        out.append(line + ";\n")
    return "".join(out)


def serialize_solution(game: ParityGame, result) -> str:
    """Render a SolveResult in PGSolver's ``paritysol`` format."""
    ids = game.ids.tolist()
    bound = max(ids) if ids else 0
    out = [f"paritysol {bound};\n"]
    for v in range(game.node_count):
        winner = 0 if result.w0[v] else 1
        strat = result.strategy0 if winner == 0 else result.strategy1
        line = f"{ids[v]} {winner}"
        if strat is not None and game.owner[v] == winner and strat[v] >= 0:
            line += f" {ids[int(strat[v])]}"
        out.append(line + ";\n")
    return "".join(out)


def parse_solution(text: str, game: ParityGame):
    """Parse a ``paritysol`` file against ``game``.

    Returns ``(winner, strategy)`` arrays indexed by dense node index;
    strategy entries are -1 where no successor is given.
    """
    toks = _Tokens(text)
    kind, value, at = toks.peek()
    if kind == "word":
        if value != "paritysol":
            raise toks.error(f"unknown keyword {value!r}", at)
        toks.next()
        toks.expect("int")
        toks.expect("punct", ";")
    index = {int(x): i for i, x in enumerate(game.ids.tolist())}
    winner = np.full(game.node_count, -1, dtype=np.int8)
    strategy = np.full(game.node_count, -1, dtype=np.int64)
    while True:
        kind, value, at = toks.next()
        if kind is None:
            break
        if kind != "int":
            raise toks.error(f"expected node id, got {value!r}", at)
        if int(value) not in index:
            raise toks.error(f"unknown node {value}", at)
        v = index[int(value)]
        w, wat = toks.expect("int")
        if w not in ("0", "1"):
            raise toks.error("winner must be 0 or 1", wat)
        winner[v] = int(w)
        k, s, sat = toks.peek()
        if k == "int":
            toks.next()
            if int(s) not in index:
                raise toks.error(f"unknown strategy successor {s}", sat)
            strategy[v] = index[int(s)]
        toks.expect("punct", ";")
    if (winner < 0).any():
        v = int(np.flatnonzero(winner < 0)[0])
        raise ParseError(f"no winner given for node {int(game.ids[v])}", 0, 0)
    return winner, strategy


# --- parity conventions ------------------------------------------------------


def normalize_with_map(game: ParityGame) -> tuple[ParityGame, dict[int, int]]:
    """Convert to min-parity with priorities >= 1, keeping winners and indices.

    Returns the canonical game and the applied priority permutation.
    """
    used = sorted(set(game.priority.tolist()))
    if game.semantics == MAX:
        top = game.max_priority()
        if top % 2:
            top += 1
        mapping = {p: top - p + 2 for p in used}
    elif used and used[0] == 0:
        mapping = {p: p + 2 for p in used}
    else:
        return game, {p: p for p in used}
    lut = np.zeros(max(used) + 1, dtype=np.int64)
    for p, q in mapping.items():
        lut[p] = q
    return game.with_priority(lut[game.priority], MIN), mapping


def normalize(game: ParityGame) -> ParityGame:
    return normalize_with_map(game)[0]


def alpha_partition(game: ParityGame) -> list[np.ndarray]:
    """The priority partition F_1..F_d; ``result[i - 1]`` holds priority ``i``.

    Empty classes are kept so the sequence always starts at an odd priority.
    """
    if not game.is_canonical():
        raise GameError("alpha_partition needs a canonical min-parity game")
    d = game.max_priority()
    return [game.priority == i for i in range(1, d + 1)]


def force(game: ParityGame, player: int, target: np.ndarray) -> np.ndarray:
    """Nodes from which ``player`` makes the next node lie in ``target``.

    One step only: ``player``'s nodes with some successor in ``target`` and
    the opponent's nodes with all successors in ``target``.
    """
    return kernels.force(game.succ_ptr, game.succ_idx, game.owner, player, target)


@dataclass
class SolveResult:
    """Winning regions, optional memoryless strategies and solver metadata.

    Strategy arrays map each node owned by the player inside that player's
    region to the chosen successor, and hold -1 elsewhere.
    """

    w0: np.ndarray
    w1: np.ndarray
    algorithm: str
    strategy0: np.ndarray | None = None
    strategy1: np.ndarray | None = None
    work: int = 0
    wall_time: float = 0.0
    stats: object = None

    def winners(self) -> np.ndarray:
        return np.where(self.w0, 0, 1).astype(np.int8)

    def same_regions(self, other: "SolveResult") -> bool:
        return np.array_equal(self.w0, other.w0) and np.array_equal(self.w1, other.w1)

    def check(self, game: ParityGame) -> None:
        """Assert the determinacy partition and strategy legality."""
        if (self.w0 & self.w1).any() or not (self.w0 | self.w1).all():
            raise AssertionError("winning regions must partition the nodes")
        for player, strat, region in ((0, self.strategy0, self.w0), (1, self.strategy1, self.w1)):
            if strat is None:
                continue
            for v in np.flatnonzero(strat >= 0).tolist():
                if not region[v] or game.owner[v] != player:
                    raise AssertionError(f"strategy{player} defined outside its domain at {v}")
                if int(strat[v]) not in set(game.successors(v).tolist()):
                    raise AssertionError(f"strategy{player} picks a non-successor at {v}")
