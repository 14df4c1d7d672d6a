"""Brute-force oracles: cross-validation and the partition checker."""

import itertools
import math

import pytest

from aircover import (
    GenConfig,
    Instance,
    OracleSizeError,
    Uav,
    bisect_order_minmax,
    bounds,
    brute_force_minmax,
    brute_force_minsum,
    continuous_order_minsum,
    distinct_orders,
    exists_order_feasible,
    fptas_minmax,
    gen_random,
    gen_shared_origin,
    has_three_partition,
    verify_coverage,
)
from aircover.minmax import sweep_order
from aircover.oracles import order_feasibility


def permutation_minmax(instance, rel_tol=1e-12):
    """Literal reference: every permutation, each bisected over the sweep
    with exact windows. Exponentially slower than the subset DP but
    written independently of it."""
    best = math.inf
    for order in itertools.permutations(instance.uavs):
        def feasible(t):
            return sweep_order(order, instance.beta, instance.d, instance.metric, t, 0.0)[0]

        hi = bounds(instance).t_u
        if not feasible(hi):
            continue
        lo = 0.0
        if feasible(0.0):
            return 0.0
        while hi - lo > rel_tol * hi:
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                hi = mid
            else:
                lo = mid
        best = min(best, hi)
    return best


class TestBruteForceMinmax:
    def test_single_agent_closed_form(self):
        inst = Instance(beta=2.0, d=0.0, uavs=(Uav(0, 1.0, 1.0, 3.0, 1.0),))
        obj, dep = brute_force_minmax(inst)
        assert obj == pytest.approx(3.0, rel=1e-9)
        assert dep.placements[0].y == pytest.approx(1.0)

    def test_subset_dp_equals_permutation_enumeration(self):
        for seed in range(8):
            inst = gen_random(GenConfig(n=4, beta=8.0, seed=seed))
            got, _ = brute_force_minmax(inst)
            want = permutation_minmax(inst)
            assert got == pytest.approx(want, rel=1e-9)

    def test_deployment_is_valid(self):
        for seed in range(8):
            inst = gen_random(GenConfig(n=5, beta=10.0, seed=20 + seed))
            obj, dep = brute_force_minmax(inst)
            assert verify_coverage(inst, dep)
            assert dep.max_delay <= obj * (1 + 1e-9)

    def test_dominated_by_order_preserving_solvers(self):
        for seed in range(8):
            inst = gen_random(GenConfig(n=6, beta=10.0, seed=40 + seed))
            ref, _ = brute_force_minmax(inst)
            assert bisect_order_minmax(inst) >= ref - 1e-9
            assert fptas_minmax(inst, 1e-3).objective >= ref - 1e-9

    def test_size_guard(self):
        inst = gen_random(GenConfig(n=9, beta=20.0, seed=1))
        with pytest.raises(OracleSizeError):
            brute_force_minmax(inst, max_n=8)


class TestOrderEnumeration:
    def test_distinct_orders_collapse_identical_agents(self):
        agents = (
            Uav(0, 0.0, 1.0, 0.0, 1.0),
            Uav(1, 0.0, 1.0, 0.0, 1.0),
            Uav(2, 1.0, 1.0, 0.0, 1.0),
        )
        orders = list(distinct_orders(agents))
        assert len(orders) == 3  # 3!/2!

    def test_order_feasibility_matches_sweep(self):
        inst = gen_random(GenConfig(n=4, beta=8.0, seed=60))
        t = bounds(inst).t_u
        ok, placed = order_feasibility(inst, inst.uavs, t)
        assert ok and placed

    def test_exists_order_beats_sorted_order(self):
        # The near-immobile agent at x=1 covers [0, 2] in place and the
        # quick wide one finishes [2, 6]; that needs their final order
        # swapped relative to x, so the sorted sweep fails but a permuted
        # order succeeds.
        quick = Uav(1, 0.0, 2.0, 0.0, 100.0)
        slow = Uav(0, 1.0, 1.0, 0.0, 0.01)
        inst = Instance(beta=6.0, d=0.0, uavs=(quick, slow))
        deadline = 1.0
        ok_sorted, _ = order_feasibility(inst, inst.uavs, deadline)
        assert not ok_sorted
        assert exists_order_feasible(inst, deadline) is not None


class TestBruteForceMinsum:
    def test_single_agent_continuous(self):
        inst = Instance(beta=2.0, d=0.0, uavs=(Uav(0, 1.7, 1.0, 1.0, 2.0),))
        res = brute_force_minsum(inst, refine_levels=6)
        want = math.hypot(1.0 - 1.7, 1.0) / 2.0
        assert res.objective == pytest.approx(want, abs=2 * res.grid_unit)

    def test_homogeneous_matches_greedy(self):
        from aircover import greedy_common_origin_minsum

        inst = gen_shared_origin(
            GenConfig(n=4, beta=8.0, h_range=(1.0, 1.0), v_range=(20.0, 20.0), seed=70),
            origin=0.0,
        )
        res = brute_force_minsum(inst, refine_levels=6)
        greedy = greedy_common_origin_minsum(inst)
        assert res.objective == pytest.approx(greedy.objective, abs=inst.n * res.grid_unit)

    def test_size_guard(self):
        inst = gen_random(GenConfig(n=7, beta=14.0, seed=2))
        with pytest.raises(OracleSizeError):
            brute_force_minsum(inst)


class TestContinuousMinsum:
    def test_matches_fine_dp(self):
        from aircover import dp_minsum

        for seed in range(5):
            inst = gen_random(GenConfig(n=3, beta=6.0, seed=80 + seed))
            cont = continuous_order_minsum(inst)
            fine = dp_minsum(inst, grid_steps=4000)
            assert cont <= fine.objective + 1e-6
            assert fine.objective <= cont + inst.n * fine.grid_unit + 1e-6


class TestThreePartition:
    def test_known_positive(self):
        part = has_three_partition([5, 4, 4, 3, 3, 3])
        assert part is not None
        assert all(sum(t) == 11 for t in part)

    def test_known_negative(self):
        assert has_three_partition([6, 4, 4, 4, 4, 4]) is None

    def test_two_triples(self):
        part = has_three_partition([5, 5, 4, 4, 4, 4])
        assert part is not None
        assert sorted(map(sum, part)) == [13, 13]

    def test_malformed(self):
        assert has_three_partition([1, 2]) is None
        assert has_three_partition([1, 1, 1, 1, 1, 2]) is None  # sum not divisible

    def test_size_guard(self):
        with pytest.raises(OracleSizeError):
            has_three_partition(list(range(1, 16)), max_m=4)
