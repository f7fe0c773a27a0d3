"""Command-line interface: ``paritybench solve|generate|bench|verify``.

Exit codes: 0 success, 2 parse or usage error, 3 oracle size bound exceeded,
4 I/O error, 5 disagreement (bench digests or verify mismatch).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench as _bench
from . import kernels
from .apt import solve_apt
from .arena import (MAX, MIN, ParseError, parse_game, parse_solution, serialize_solution)
from .classic import ORACLE_BOUND, OracleBoundError, solve_oracle, solve_spm, solve_zielonka, \
    strategy_sound
from .generator import FAMILIES, GenSpec, write_corpus
from .transform import preprocess_solve

EXIT_OK, EXIT_PARSE, EXIT_ORACLE, EXIT_IO, EXIT_MISMATCH = 0, 2, 3, 4, 5

SOLVE = {"apt": solve_apt, "re": solve_zielonka, "sp": solve_spm, "oracle": solve_oracle}
PREPROCESS = ("none", "loops", "scc", "compress", "all")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_text(path: str | None) -> str:
    try:
        if path is None or path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from exc


def _load_game(path, semantics):
    text = _read_text(path)
    try:
        return parse_game(text, semantics)
    except ParseError as exc:
        raise CliError(f"{path or '<stdin>'}: {exc}", EXIT_PARSE) from exc
    except ValueError as exc:
        raise CliError(f"{path or '<stdin>'}: {exc}", EXIT_PARSE) from exc


def _run(algorithm, game, preprocess="none"):
    try:
        if preprocess == "none":
            return SOLVE[algorithm](game)
        return preprocess_solve(game, SOLVE[algorithm], preprocess)
    except OracleBoundError as exc:
        raise CliError(str(exc), EXIT_ORACLE) from exc


def cmd_solve(args) -> int:
    game = _load_game(args.input, args.semantics)
    result = _run(args.algorithm, game, args.preprocess)
    _write_text(args.output, serialize_solution(game, result))
    if args.stats:
        print(f"algorithm={result.algorithm} nodes={game.node_count} edges={game.edge_count} "
              f"time_ms={result.wall_time * 1000:.3f} work={result.work} "
              f"won0={int(result.w0.sum())} won1={int(result.w1.sum())} "
              f"kernels={kernels.BACKEND}", file=sys.stderr)
    return EXIT_OK


def _degree(text):
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


def cmd_generate(args) -> int:
    try:
        spec = GenSpec(args.nodes, args.priorities, args.seed, args.count, args.family,
                       _degree(args.degree) if args.degree else None)
    except (ValueError, OverflowError) as exc:
        raise CliError(f"invalid generator spec: {exc}", EXIT_PARSE) from exc
    try:
        paths = write_corpus(spec, args.out_dir)
    except OSError as exc:
        raise CliError(f"cannot write corpus: {exc.strerror}", EXIT_IO) from exc
    for path in paths:
        print(f"{path}\tfamily={spec.family}\tn={spec.n}\tk={spec.k}\tseed={spec.seed}")
    return EXIT_OK


def _preprocess_map(items):
    out = {}
    for item in items or ():
        alg, _, flags = item.partition("=")
        if not flags:
            raise CliError(f"--preprocess expects ALG=FLAGS, got {item!r}", EXIT_PARSE)
        out[alg] = flags
    return out


def cmd_bench(args) -> int:
    degree = _degree(args.degree) if args.degree else None
    try:
        if args.paper_scale:
            cells = _bench.full_grid(args.seed, args.instances)
        elif args.family != "uniform":
            cells = [GenSpec(None, k, args.seed, args.instances, args.family, degree)
                     for k in args.priorities]
        elif args.nodes:
            cells = [GenSpec(n, k, args.seed, args.instances, "uniform", degree)
                     for k in args.priorities for n in args.nodes]
        else:
            cells = _bench.desk_grid(args.seed, args.instances)
        config = _bench.BenchConfig(
            algorithms=args.algorithms.split(","), cells=cells, timeout=args.timeout,
            preprocess=_preprocess_map(args.preprocess), dump_dir=args.dump_dir,
            threads=args.threads, max_alloc_bytes=args.max_alloc_bytes)
    except (ValueError, OverflowError) as exc:
        raise CliError(f"invalid bench configuration: {exc}", EXIT_PARSE) from exc
    try:
        records = _bench.run_bench(config)
    except _bench.DigestMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(str(exc.path), file=sys.stderr)
        return EXIT_MISMATCH
    if args.csv:
        try:
            _bench.write_csv(records, args.csv)
        except OSError as exc:
            raise CliError(f"cannot write {args.csv}: {exc.strerror}", EXIT_IO) from exc
    else:
        _bench.write_csv(records, sys.stdout)
    rows = _bench.summarize(records, timeout=args.timeout)
    out = sys.stderr if not args.csv else sys.stdout
    out.write(_bench.format_table(rows))
    if args.summary_csv:
        _write_text(args.summary_csv, _bench.summary_csv(rows))
    return EXIT_OK


def _first_difference(a, b):
    diff = np.flatnonzero(a != b)
    return int(diff[0]) if diff.size else None


def cmd_verify(args) -> int:
    game = _load_game(args.input, args.semantics)
    ids = game.ids
    algs = args.against.split(",") if args.against else ["apt"]
    unknown = [a for a in algs if a not in SOLVE]
    if unknown:
        raise CliError(f"unknown algorithms {unknown}", EXIT_PARSE)
    results = [(a, _run(a, game)) for a in algs]
    ref_name, ref = results[0]
    for name, res in results[1:]:
        v = _first_difference(ref.winners(), res.winners())
        if v is not None:
            print(f"mismatch: {ref_name} and {name} differ at node {int(ids[v])} "
                  f"({int(ref.winners()[v])} vs {int(res.winners()[v])})", file=sys.stderr)
            return EXIT_MISMATCH
    if args.solution:
        text = _read_text(args.solution)
        try:
            winner, strategy = parse_solution(text, game)
        except ParseError as exc:
            raise CliError(f"{args.solution}: {exc}", EXIT_PARSE) from exc
        v = _first_difference(ref.winners(), winner)
        if v is not None:
            print(f"mismatch: solution says node {int(ids[v])} is won by {int(winner[v])}, "
                  f"{ref_name} says {int(ref.winners()[v])}", file=sys.stderr)
            return EXIT_MISMATCH
        given = strategy >= 0
        if given.any():
            if game.node_count > ORACLE_BOUND:
                print(f"note: strategies not checked (more than {ORACLE_BOUND} nodes)",
                      file=sys.stderr)
            else:
                for player in (0, 1):
                    region = winner == player
                    mine = region & (game.owner == player)
                    if not mine.any():
                        continue
                    if not given[mine].all():
                        continue
                    if not strategy_sound(game, player, region, strategy):
                        bad = int(ids[np.flatnonzero(mine)[0]])
                        print(f"mismatch: player {player} strategy is not winning "
                              f"(region containing node {bad})", file=sys.stderr)
                        return EXIT_MISMATCH
    print(f"ok: {', '.join(algs)} agree on {game.node_count} nodes")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paritybench", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a PGSolver game file")
    s.add_argument("--input", "-i")
    s.add_argument("--algorithm", "-a", choices=sorted(SOLVE), default="apt")
    s.add_argument("--semantics", choices=(MAX, MIN), default=MAX)
    s.add_argument("--preprocess", choices=PREPROCESS, default="none")
    s.add_argument("--output", "-o")
    s.add_argument("--stats", action="store_true")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", help="write random games")
    g.add_argument("--nodes", "-n", type=int)
    g.add_argument("--priorities", "-k", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--family", choices=FAMILIES, default="uniform")
    g.add_argument("--degree", help="bounded out-degree range LO:HI")
    g.add_argument("--out-dir", default=".")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="time solvers on generated cells")
    b.add_argument("--algorithms", default="apt,re,sp")
    b.add_argument("--nodes", "-n", type=int, nargs="+")
    b.add_argument("--priorities", "-k", type=int, nargs="+", default=[2])
    b.add_argument("--family", choices=FAMILIES, default="uniform")
    b.add_argument("--instances", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--degree", help="bounded out-degree range LO:HI")
    b.add_argument("--preprocess", action="append", metavar="ALG=FLAGS",
                   help="e.g. re=scc or sp=loops+scc; repeatable")
    b.add_argument("--paper-scale", action="store_true", help="full grid: uniform n up to 14000 and every family range")
    b.add_argument("--threads", type=int)
    b.add_argument("--max-alloc-bytes", type=int)
    b.add_argument("--dump-dir")
    b.add_argument("--csv")
    b.add_argument("--summary-csv")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="cross-check solvers or a solution file")
    v.add_argument("--input", "-i", required=True)
    v.add_argument("--semantics", choices=(MAX, MIN), default=MAX)
    v.add_argument("--against")
    v.add_argument("--solution")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "verify" and not (args.against or args.solution):
        parser.error("verify needs --against or --solution")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
