import numpy as np
import pytest

from paritybench import example_game, kernels
from paritybench.generator import random_game

# node indices of the running example
Q = {f"q{i}": i for i in range(7)}


@pytest.fixture
def example():
    return example_game()


@pytest.fixture(params=kernels.available())
def impl(request):
    return kernels.load(request.param)


def small_games(count, seed=0, max_n=7, max_k=5, degree=None):
    """Seeded stream of (index, game) with n <= max_n, k <= max_k (max-parity)."""
    rng = np.random.default_rng(seed)
    for j in range(count):
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, max_k + 1))
        yield j, random_game(n, k, seed * 100_003 + j, degree)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
