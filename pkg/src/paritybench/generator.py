"""Seeded random parity games in the style of PGSolver's ``randomgame``.

Each node independently gets a priority uniform in ``0..k-1`` (max-parity),
an owner by a fair coin and ``d`` distinct successors, with ``d`` uniform in
``1..n`` (or in a bounded range ``lo..hi`` for sparse desk-scale games).

Randomness comes from numpy's PCG64 bit generator. Instance ``j`` of a spec
is seeded from ``SeedSequence([seed, j])``, so instances can be produced in
any order or in parallel with identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .arena import MAX, ParityGame, serialize_game

FAMILIES = ("uniform", "exp2", "exp-e", "exp10")
MAX_FAMILY_NODES = 10 ** 7


def family_size(family: str, k: int) -> int:
    """Node count of the exponential families: 2^k, round(e^k), 10^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base = {"exp2": 2.0, "exp-e": math.e, "exp10": 10.0}.get(family)
    if base is None:
        raise ValueError(f"family {family!r} has no derived size")
    if k * math.log(base) > math.log(MAX_FAMILY_NODES):
        raise OverflowError(f"{family} with k={k} exceeds {MAX_FAMILY_NODES} nodes")
    if family == "exp2":
        return 2 ** k
    if family == "exp10":
        return 10 ** k
    return int(round(math.e ** k))


@dataclass(frozen=True)
class GenSpec:
    n: int | None
    k: int
    seed: int = 0
    count: int = 1
    family: str = "uniform"
    degree: tuple[int, int] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family != "uniform":
            object.__setattr__(self, "n", family_size(self.family, self.k))
        if self.n is None or self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 1 or self.count < 1:
            raise ValueError("k and count must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.degree is not None:
            lo, hi = self.degree
            if not 1 <= lo <= hi:
                raise ValueError("degree range must satisfy 1 <= lo <= hi")

    def filename(self, j: int) -> str:
        return f"{self.family}_n{self.n}_k{self.k}_s{self.seed}_{j}.gm"


def instance_seed(seed: int, j: int) -> int:
    """64-bit sub-seed of instance ``j``; also the ``seed`` column of bench CSVs."""
    return int(np.random.SeedSequence([seed, j]).generate_state(1, dtype=np.uint64)[0])


def random_game(n: int, k: int, seed: int, degree: tuple[int, int] | None = None) -> ParityGame:
    rng = np.random.Generator(np.random.PCG64(seed))
    priority = rng.integers(0, k, size=n)
    owner = rng.integers(0, 2, size=n)
    if degree is None:
        lo, hi = 1, n
    else:
        lo, hi = min(degree[0], n), min(degree[1], n)
    deg = rng.integers(lo, hi + 1, size=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=ptr[1:])
    idx = np.empty(int(ptr[-1]), dtype=np.int32)
    for v in range(n):
        succ = rng.choice(n, size=int(deg[v]), replace=False)
        succ.sort()
        idx[ptr[v]:ptr[v + 1]] = succ
    return ParityGame.from_csr(owner, priority, ptr, idx, semantics=MAX, validate=False)


def generate_one(spec: GenSpec, j: int) -> ParityGame:
    return random_game(spec.n, spec.k, instance_seed(spec.seed, j), spec.degree)


def generate(spec: GenSpec) -> Iterator[ParityGame]:
    for j in range(spec.count):
        yield generate_one(spec, j)


def write_corpus(spec: GenSpec, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for j, game in enumerate(generate(spec)):
        path = out / spec.filename(j)
        path.write_text(serialize_game(game), encoding="utf-8", newline="\n")
        paths.append(path)
    return paths
