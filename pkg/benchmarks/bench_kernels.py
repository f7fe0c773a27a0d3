"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--solves]

Part one times the raw kernels on the same arrays for every available
backend. Part two (``--solves``) runs whole solvers in fresh interpreters,
once normally and once with PARITYBENCH_PURE_PYTHON=1.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from paritybench import kernels
from paritybench.arena import full_set, normalize
from paritybench.classic import measure_space
from paritybench.generator import random_game


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1000.0


def _spm_once(impl, g):
    n = g.node_count
    bounds = measure_space(g)
    state = np.array([0, n, 0], dtype=np.int64)
    while not impl.spm_run(g.succ_ptr, g.succ_idx, g.pred_ptr, g.pred_idx, g.owner, g.priority,
                           bounds, np.zeros(n * bounds.shape[0], dtype=np.int32),
                           np.zeros(n, dtype=np.uint8), np.arange(n, dtype=np.int32),
                           np.ones(n, dtype=np.uint8), state, 1 << 30):
        pass


def kernel_table(repeat):
    cases = [("dense n=2000", normalize(random_game(2000, 2, 1))),
             ("sparse n=20000", normalize(random_game(20000, 6, 2, degree=(1, 4))))]
    rng = np.random.default_rng(0)
    print(f"{'kernel':<12}{'game':<18}" + "".join(f"{b:>12}" for b in kernels.available())
          + "   (best of %d, ms)" % repeat)
    for label, g in cases:
        target = rng.random(g.node_count) < 0.05
        alive = full_set(g.node_count)
        jobs = {
            "force": lambda k: k.force(g.succ_ptr, g.succ_idx, g.owner, 0, target),
            "attractor": lambda k: k.attractor(g.succ_ptr, g.succ_idx, g.pred_ptr, g.pred_idx,
                                               g.owner, 1, target, alive),
            "spm_run": lambda k: _spm_once(k, g),
        }
        for name, job in jobs.items():
            if name == "spm_run" and g.node_count > 5000:
                continue
            times = [_best(lambda: job(kernels.load(b)), repeat) for b in kernels.available()]
            print(f"{name:<12}{label:<18}" + "".join(f"{t:>12.2f}" for t in times))


SOLVE_SNIPPET = """
import time
from paritybench import KERNEL_BACKEND, solve_apt, solve_spm, solve_zielonka
from paritybench.generator import random_game
games = [random_game(1000, 3, s) for s in range(3)]
for name, fn in (("apt", solve_apt), ("re", solve_zielonka), ("sp", solve_spm)):
    t0 = time.perf_counter()
    for g in games:
        fn(g)
    print(KERNEL_BACKEND, name, round((time.perf_counter() - t0) / len(games) * 1000, 2))
"""


def solve_table():
    print("\nmean solve time, n=1000 k=3 paper-protocol games (ms)")
    for pure in ("0", "1"):
        env = dict(os.environ, PARITYBENCH_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET], env=env, check=True,
                             capture_output=True, text=True).stdout
        for line in out.splitlines():
            backend, alg, ms = line.split()
            print(f"  {backend:<8}{alg:<5}{float(ms):>10.2f}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--solves", action="store_true")
    args = p.parse_args()
    print(f"default backend: {kernels.BACKEND}")
    kernel_table(args.repeat)
    if args.solves:
        solve_table()


if __name__ == "__main__":
    main()
