import numpy as np
import pytest

from paritybench.apt import (AptStats, ExtendedParityGame, solve_apt, win, win_dual, win_epg)
from paritybench.arena import (ParityGame, alpha_partition, force, full_set, members, nodeset,
                               normalize)
from paritybench.budget import Budget, MemoutGuard, SolverTimeout
from paritybench.classic import solve_oracle
from paritybench.generator import random_game

from conftest import Q, small_games


def test_base_case_is_force(example):
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = rng.random(7) < 0.4
        a = (rng.random(7) < 0.4) & ~v
        assert np.array_equal(win(0, [], v, a, example), force(example, 0, v))
        assert np.array_equal(win(1, [], a, v, example), force(example, 1, a))
    assert win(0, [], full_set(7), nodeset(7), example).all()


def _trace_of(game):
    seen = []
    res = solve_apt(game, trace=lambda depth, player, reach, avoid, out:
                    seen.append((depth, player, members(reach), members(out))))
    return res, seen


def test_running_example_innermost_trace(example):
    res, seen = _trace_of(example)
    depth, player, reach, out = seen[0]
    assert depth == 5 and player == 1
    assert reach == [Q["q0"], Q["q1"], Q["q2"], Q["q5"]]
    assert out == [Q["q0"], Q["q1"], Q["q5"], Q["q6"]]
    assert res.w0.all() and not res.w1.any()


def test_single_odd_self_loop():
    g = ParityGame.from_lists([0], [1], [[0]])
    res = solve_apt(g)
    assert members(res.w1) == [0] and not res.w0.any()


def test_single_odd_priority_no_visiting_set():
    """With only odd priorities and no special nodes, player 0 wins nowhere."""
    for owners in ([0, 0], [0, 1], [1, 1]):
        for succ in ([[0], [1]], [[1], [0]], [[0, 1], [1]], [[0, 1], [0, 1]], [[1], [0, 1]]):
            g = ParityGame.from_lists(owners, [1, 1], succ)
            alpha = alpha_partition(g)
            assert len(alpha) == 1
            got = win(0, alpha, nodeset(2), nodeset(2), g)
            assert not got.any()
            assert np.array_equal(got, solve_oracle(g).w0)


def test_version_with_zero_priority_max_semantics():
    g = ParityGame.from_lists([0], [0], [[0]], semantics="max")
    assert solve_apt(g).w0.all()


def test_matches_oracle_small():
    for j, g in small_games(300, seed=1):
        assert np.array_equal(solve_apt(g).w0, solve_oracle(g).w0), j


def test_fixpoint_chain_ascends_and_call_bound():
    for _, g in small_games(200, seed=2, max_n=20, max_k=6, degree=(1, 4)):
        res = solve_apt(g, check_chain=True)
        stats = res.stats
        assert stats.depth == len(alpha_partition(normalize(g)))
        assert stats.recursive_calls <= stats.bound(g.node_count)
        assert all(c >= 0 for c in stats.outer_fixpoint_iterations)


def test_determinacy_partition():
    for _, g in small_games(100, seed=3, max_n=30, degree=(1, 5)):
        res = solve_apt(g)
        res.check(g)


def _random_epg(g, rng):
    n = g.node_count
    pick = rng.random(n)
    visit = pick < 0.15
    avoid = (pick >= 0.15) & (pick < 0.3)
    return ExtendedParityGame(normalize(g), visit, avoid)


def test_epg_reduction_coherence():
    rng = np.random.default_rng(4)
    for _, g in small_games(300, seed=4, max_n=8, max_k=5):
        epg = _random_epg(g, rng)
        n = g.node_count
        direct = win_epg(epg)
        plain = ~(epg.visiting | epg.avoiding)
        loops = epg.reduced()
        assert np.array_equal(direct[plain], solve_apt(loops).w0[plain])
        assert np.array_equal(direct[plain], solve_oracle(loops).w0[plain])
        exact = epg.reduced_exact()
        assert np.array_equal(direct, solve_apt(exact).w0[:n])
        if exact.node_count <= 12:
            assert np.array_equal(direct, solve_oracle(exact).w0[:n])


def test_epg_special_start_node_uses_its_edges():
    # 0 is avoiding but moves straight into the visiting node 1
    g = ParityGame.from_lists([0, 0], [1, 1], [[1], [1]])
    epg = ExtendedParityGame(g, nodeset(2, [1]), nodeset(2, [0]))
    assert win_epg(epg).tolist() == [True, True]
    assert solve_apt(epg.reduced()).w0.tolist() == [False, True]


def test_epg_rejects_overlap(example):
    s = nodeset(7, [0])
    with pytest.raises(ValueError):
        ExtendedParityGame(example, s, s)


def test_dual_pseudocode_form_agrees():
    rng = np.random.default_rng(5)
    for _, g in small_games(200, seed=5, max_n=25, max_k=6, degree=(1, 5)):
        c = normalize(g)
        alpha = alpha_partition(c)
        n = c.node_count
        assert np.array_equal(win_dual(0, alpha, nodeset(n), nodeset(n), c),
                              solve_apt(c).w0)
        epg = _random_epg(g, rng)
        for player, reach, avoid in ((0, epg.visiting, epg.avoiding),
                                     (1, epg.avoiding, epg.visiting)):
            assert np.array_equal(win(player, alpha, reach, avoid, c),
                                  win_dual(player, alpha, reach, avoid, c))


def test_budget_timeout_and_memout():
    g = random_game(300, 6, 9)
    with pytest.raises(SolverTimeout):
        solve_apt(g, budget=Budget(timeout=1e-9))
    with pytest.raises(MemoutGuard):
        solve_apt(g, budget=Budget(max_alloc_bytes=10))
    assert solve_apt(g, budget=Budget(timeout=60)).w0.shape == (300,)


def test_stats_bound_helper():
    assert AptStats(depth=3).bound(5) == 343
