"""Cooperative limits for solver runs: wall-clock deadline and allocation cap."""

import time


class SolverAbort(RuntimeError):
    status = "aborted"


class SolverTimeout(SolverAbort):
    status = "timeout"


class MemoutGuard(SolverAbort):
    status = "memout-guard"


class Budget:
    """Checked by solvers at loop boundaries.

    ``timeout`` is in seconds; ``max_alloc_bytes`` caps the cumulative bytes
    of node-set and measure allocations a solver reports via :meth:`charge`.
    """

    def __init__(self, timeout: float | None = None, max_alloc_bytes: int | None = None):
        self.timeout = timeout
        self.max_alloc_bytes = max_alloc_bytes
        self.allocated = 0
        self.start = time.perf_counter()
        self.deadline = None if timeout is None else self.start + timeout

    def check(self) -> None:
        if self.deadline is not None and time.perf_counter() >= self.deadline:
            raise SolverTimeout(f"exceeded {self.timeout:g} s")

    def charge(self, nbytes: int) -> None:
        self.allocated += nbytes
        if self.max_alloc_bytes is not None and self.allocated > self.max_alloc_bytes:
            raise MemoutGuard(f"allocation budget of {self.max_alloc_bytes} bytes exceeded")


UNLIMITED = None


def check(budget: Budget | None) -> None:
    if budget is not None:
        budget.check()


def charge(budget: Budget | None, nbytes: int) -> None:
    if budget is not None:
        budget.charge(nbytes)
