import numpy as np
import pytest

from paritybench.arena import ParityGame, parse_game, serialize_game
from paritybench.generator import (GenSpec, family_size, generate, generate_one, instance_seed,
                                   random_game, write_corpus)


@pytest.mark.parametrize("family,k,n", [("exp-e", 7, 1097), ("exp2", 10, 1024),
                                        ("exp10", 3, 1000)])
def test_family_sizes(family, k, n):
    assert family_size(family, k) == n
    assert GenSpec(None, k, family=family).n == n


def test_family_overflow_guard():
    with pytest.raises(OverflowError):
        family_size("exp10", 40)
    with pytest.raises(ValueError):
        family_size("uniform", 3)


def test_single_node_game_is_forced():
    for seed in (0, 1, 2 ** 63):
        (g,) = generate(GenSpec(1, 1, seed))
        assert g.priority.tolist() == [0] and g.successor_lists() == [[0]]


def test_determinism():
    spec = GenSpec(50, 3, seed=7, count=2)
    a = [serialize_game(g) for g in generate(spec)]
    b = [serialize_game(g) for g in generate(spec)]
    assert a == b and a[0] != a[1]
    # instance j does not depend on generating earlier instances
    assert serialize_game(generate_one(spec, 1)) == a[1]


def test_dense_instance_is_valid():
    g = generate_one(GenSpec(2000, 2, seed=3), 0)
    deg = np.diff(g.succ_ptr)
    assert deg.min() >= 1 and deg.max() <= 2000
    ParityGame.from_csr(g.owner, g.priority, g.succ_ptr, g.succ_idx, semantics=g.semantics)
    assert g.priority.min() >= 0 and g.priority.max() <= 1


def test_bounded_degree_mode():
    g = random_game(500, 4, 1, degree=(2, 5))
    deg = np.diff(g.succ_ptr)
    assert deg.min() >= 2 and deg.max() <= 5


def test_distribution_within_five_sigma():
    n, k = 10_000, 5
    g = random_game(n, k, 2024, degree=(1, 2))
    counts = np.bincount(g.priority, minlength=k)
    p = 1 / k
    sigma = np.sqrt(n * p * (1 - p))
    assert (np.abs(counts - n * p) <= 5 * sigma).all()
    assert abs(int(g.owner.sum()) - n / 2) <= 5 * np.sqrt(n / 4)
    deg = np.diff(random_game(2000, 2, 5).succ_ptr)
    assert abs(deg.mean() - 1000.5) <= 5 * np.sqrt((2000 ** 2 - 1) / 12 / 2000)


def test_spec_validation():
    for bad in (dict(n=0, k=1), dict(n=3, k=0), dict(n=3, k=1, count=0),
                dict(n=3, k=1, seed=-1), dict(n=3, k=1, seed=2 ** 64),
                dict(n=3, k=1, family="ladder"), dict(n=3, k=1, degree=(3, 2))):
        with pytest.raises(ValueError):
            GenSpec(**bad)


def test_instance_seeds_differ():
    seeds = {instance_seed(5, j) for j in range(100)}
    assert len(seeds) == 100


def test_write_corpus(tmp_path):
    spec = GenSpec(None, 3, seed=4, count=2, family="exp-e")
    paths = write_corpus(spec, tmp_path)
    assert [p.name for p in paths] == ["exp-e_n20_k3_s4_0.gm", "exp-e_n20_k3_s4_1.gm"]
    data = paths[0].read_bytes()
    assert b"\r" not in data
    assert serialize_game(parse_game(data.decode())) == serialize_game(generate_one(spec, 0))
