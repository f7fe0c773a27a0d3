"""Benchmark harness: timed solver runs over generated cells with a
cross-algorithm agreement check, CSV output and summary tables.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import os
import statistics
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from .apt import solve_apt
from .arena import serialize_game
from .budget import Budget, SolverAbort
from .classic import solve_oracle, solve_spm, solve_zielonka
from .generator import GenSpec, generate_one, instance_seed
from .transform import preprocess_solve

log = logging.getLogger(__name__)

CSV_COLUMNS = ("seed", "family", "n", "k", "edges", "algorithm", "preprocessing",
               "time_ms", "status", "digest")

# timed runs compute regions only, so every solver does the same job
SOLVERS = {
    "apt": solve_apt,
    "re": partial(solve_zielonka, strategies=False),
    "sp": partial(solve_spm, strategies=False),
    "oracle": solve_oracle,
}


class DigestMismatch(RuntimeError):
    def __init__(self, message: str, path: Path):
        super().__init__(f"{message}; game written to {path}")
        self.path = path


def regions_digest(w0: np.ndarray) -> str:
    """Order-independent fingerprint of the partition (W0, complement)."""
    h = hashlib.sha256()
    h.update(int(w0.shape[0]).to_bytes(8, "little"))
    h.update(np.packbits(w0.astype(bool)).tobytes())
    return h.hexdigest()[:16]


@dataclass
class BenchRecord:
    seed: int
    family: str
    n: int
    k: int
    edge_count: int
    algorithm: str
    preprocessing: str
    wall_time_ms: float | None
    status: str
    regions_digest: str | None
    cell: int = 0
    instance: int = 0

    def row(self) -> list:
        t = "" if self.wall_time_ms is None else f"{self.wall_time_ms:.3f}"
        return [self.seed, self.family, self.n, self.k, self.edge_count, self.algorithm,
                self.preprocessing, t, self.status, self.regions_digest or ""]


@dataclass
class BenchConfig:
    algorithms: list[str]
    cells: list[GenSpec]
    timeout: float = 60.0
    preprocess: dict[str, str] = field(default_factory=dict)
    max_alloc_bytes: int | None = None
    dump_dir: str | None = None
    threads: int | None = None

    def __post_init__(self):
        unknown = set(self.algorithms) - set(SOLVERS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not self.cells:
            raise ValueError("no benchmark cells")


def _threads(config: BenchConfig) -> int:
    if config.threads is not None:
        return max(1, config.threads)
    env = os.environ.get("PARITYBENCH_THREADS")
    cap = int(env) if env else 1
    return max(1, min(cap, os.cpu_count() or 1))


def run_instance(config: BenchConfig, cell: int, j: int) -> list[BenchRecord]:
    spec = config.cells[cell]
    game = generate_one(spec, j)
    seed = instance_seed(spec.seed, j)
    out = []
    for alg in config.algorithms:
        flags = config.preprocess.get(alg, "none")
        budget = Budget(config.timeout, config.max_alloc_bytes)
        t0 = time.perf_counter()
        try:
            res = preprocess_solve(game, SOLVERS[alg], flags, budget=budget)
        except SolverAbort as exc:
            ms, status, digest = None, exc.status, None
        else:
            ms = (time.perf_counter() - t0) * 1000.0
            status, digest = "ok", regions_digest(res.w0)
        out.append(BenchRecord(seed, spec.family, spec.n, spec.k, game.edge_count, alg, flags,
                               ms, status, digest, cell, j))
    digests = {r.regions_digest for r in out if r.status == "ok"}
    if len(digests) > 1:
        dump = Path(config.dump_dir or tempfile.mkdtemp(prefix="paritybench-"))
        dump.mkdir(parents=True, exist_ok=True)
        path = dump / spec.filename(j)
        path.write_text(serialize_game(game), encoding="utf-8")
        detail = ", ".join(f"{r.algorithm}={r.regions_digest}" for r in out if r.status == "ok")
        raise DigestMismatch(f"solvers disagree ({detail})", path)
    return out


def run_bench(config: BenchConfig) -> list[BenchRecord]:
    tasks = [(c, j) for c, spec in enumerate(config.cells) for j in range(spec.count)]
    workers = _threads(config)
    records: list[BenchRecord] = []
    if workers == 1:
        for c, j in tasks:
            records.extend(run_instance(config, c, j))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(run_instance, [config] * len(tasks), *zip(*tasks)):
                records.extend(chunk)
    records.sort(key=lambda r: (r.cell, r.instance, config.algorithms.index(r.algorithm)))
    _warn_non_monotone(summarize(records))
    return records


def write_csv(records, path_or_file) -> None:
    if hasattr(path_or_file, "write"):
        _write_rows(path_or_file, records)
        return
    with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
        _write_rows(fh, records)


def _write_rows(fh, records):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())


def read_csv(path) -> list[BenchRecord]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(BenchRecord(int(row["seed"]), row["family"], int(row["n"]), int(row["k"]),
                                   int(row["edges"]), row["algorithm"], row["preprocessing"],
                                   float(row["time_ms"]) if row["time_ms"] else None,
                                   row["status"], row["digest"] or None))
    return out


SUMMARY_COLUMNS = ("family", "n", "k", "algorithm", "preprocessing", "instances", "ok",
                   "timeouts", "memouts", "mean_ms", "median_ms", "mean_all_ms")


def summarize(records, timeout: float | None = None) -> list[dict]:
    """Per cell and algorithm: mean/median over ok runs and abort counts.

    ``mean_all_ms`` also averages aborted runs, counted at the timeout
    (so it is a lower bound); it is empty when ``timeout`` is not given and a
    run aborted.
    """
    groups: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.family, r.n, r.k, r.algorithm, r.preprocessing), []).append(r)
    rows = []
    for key, rs in groups.items():
        ok = [r.wall_time_ms for r in rs if r.status == "ok"]
        aborted = len(rs) - len(ok)
        mean_all = None
        if not aborted:
            mean_all = statistics.fmean(ok) if ok else None
        elif timeout is not None:
            mean_all = (sum(ok) + aborted * timeout * 1000.0) / len(rs)
        rows.append(dict(zip(SUMMARY_COLUMNS, (
            *key, len(rs), len(ok),
            sum(r.status == "timeout" for r in rs),
            sum(r.status == "memout-guard" for r in rs),
            statistics.fmean(ok) if ok else None,
            statistics.median(ok) if ok else None,
            mean_all,
        ))))
    return rows


def _warn_non_monotone(rows):
    by_alg: dict[tuple, list[tuple[int, float]]] = {}
    for r in rows:
        if r["family"] == "uniform" and r["mean_ms"] is not None:
            by_alg.setdefault((r["algorithm"], r["preprocessing"], r["k"]), []).append(
                (r["n"], r["mean_ms"]))
    for key, pts in by_alg.items():
        pts.sort()
        for (n1, t1), (n2, t2) in zip(pts, pts[1:]):
            if t2 < t1:
                log.warning("%s: mean time drops from %.1f ms (n=%d) to %.1f ms (n=%d)",
                            key, t1, n1, t2, n2)


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def format_table(rows) -> str:
    if not rows:
        return ""
    cells = [[_fmt(r[c]) for c in SUMMARY_COLUMNS] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(SUMMARY_COLUMNS)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(SUMMARY_COLUMNS, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def summary_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in rows:
        w.writerow(["" if r[c] is None else r[c] for c in SUMMARY_COLUMNS])
    return buf.getvalue()


# --- grids -------------------------------------------------------------------

UNIFORM_NODES = (2000, 4000, 6000, 8000, 10000, 12000, 14000)
UNIFORM_PRIORITIES = (2, 3, 5)
FAMILY_PRIORITIES = {"exp2": range(10, 16), "exp-e": range(3, 11), "exp10": range(1, 6)}


def full_grid(seed: int = 0, instances: int = 20) -> list[GenSpec]:
    cells = [GenSpec(n, k, seed, instances) for k in UNIFORM_PRIORITIES for n in UNIFORM_NODES]
    for fam, ks in FAMILY_PRIORITIES.items():
        cells += [GenSpec(None, k, seed, instances, fam) for k in ks]
    return cells


def desk_grid(seed: int = 0, instances: int = 20) -> list[GenSpec]:
    cells = [GenSpec(n, k, seed, instances) for k in UNIFORM_PRIORITIES for n in (2000, 4000)]
    cells += [GenSpec(None, k, seed, instances, "exp2") for k in (10,)]
    cells += [GenSpec(None, k, seed, instances, "exp-e") for k in range(3, 8)]
    cells += [GenSpec(None, k, seed, instances, "exp10") for k in range(1, 4)]
    return cells
