"""Random generation determinism and the hardness gadget families."""

import pytest

from aircover import (
    GenConfig,
    InfeasibleError,
    InvalidInstanceError,
    check_feasibility,
    enumerate_partition_multisets,
    exists_order_feasible,
    gen_hard_instance,
    gen_random,
    has_three_partition,
)


class TestGenRandom:
    def test_deterministic(self):
        cfg = GenConfig(n=12, beta=20.0, seed=7)
        assert gen_random(cfg) == gen_random(cfg)

    def test_coverage_precondition_enforced(self):
        inst = gen_random(GenConfig(n=30, beta=20.0, seed=3))
        assert 2 * sum(u.r for u in inst.uavs) >= 20.0

    def test_collapsed_radius_range(self):
        inst = gen_random(GenConfig(n=8, beta=20.0, r_range=(1.5, 1.5), seed=4))
        assert {u.r for u in inst.uavs} == {1.5}

    def test_generation_failure(self):
        with pytest.raises(InfeasibleError):
            gen_random(GenConfig(n=2, beta=100.0, r_range=(0.5, 1.0), seed=5, max_retries=10))

    def test_sorted_and_ids_unique(self):
        inst = gen_random(GenConfig(n=15, beta=20.0, seed=8))
        xs = [u.x for u in inst.uavs]
        assert xs == sorted(xs)
        assert len({u.id for u in inst.uavs}) == 15

    def test_config_validation(self):
        with pytest.raises(InvalidInstanceError):
            GenConfig(n=0)
        with pytest.raises(InvalidInstanceError):
            GenConfig(n=3, r_range=(2.0, 1.0))
        with pytest.raises(InvalidInstanceError):
            GenConfig(n=3, d=4.0, r_range=(1.0, 3.0))


class TestGadgets:
    def test_minmax_geometry(self):
        g = gen_hard_instance([5, 4, 4, 3, 3, 3], variant="minmax")
        assert g.m == 2 and g.b == 11
        assert g.instance.beta == 23.0  # m*B + m - 1
        assert g.k == 23.0
        carriers = [u for u in g.instance.uavs if u.x < 0]
        blockers = [u for u in g.instance.uavs if u.x > 0]
        assert sorted(2 * u.r for u in carriers) == [3, 3, 3, 4, 4, 5]
        assert all(u.x == -u.r and u.h == 0.0 and u.v == 1.0 for u in carriers)
        assert len(blockers) == 1
        b = blockers[0]
        assert b.x == pytest.approx(11 + 0.5)
        assert b.r == 0.5 and b.h == 1.0 and b.v == pytest.approx(1 / 23.0)

    def test_minsum_geometry(self):
        g = gen_hard_instance([5, 4, 4, 3, 3, 3], variant="minsum")
        assert g.k == 3 * 11 * 2 * 3 + 3  # 3Bm(m+1) + 3(m-1)
        blocker = [u for u in g.instance.uavs if u.x > 0][0]
        assert blocker.h == 0.0
        assert blocker.v == pytest.approx(1.0 / (g.k + 1.0))

    def test_total_footprint_is_tight(self):
        g = gen_hard_instance([5, 4, 4, 3, 3, 3], variant="minmax")
        assert 2 * sum(u.r for u in g.instance.uavs) == g.instance.beta

    def test_padding_agent(self):
        g = gen_hard_instance([5, 4, 4, 3, 3, 3], variant="minmax", pad_extra=True)
        assert g.padded
        pad = g.instance.by_id(7)
        assert pad.x == -1.5 and pad.r == 1.0
        assert pad.v == pytest.approx(1.0 / (g.k + 1.0))
        assert 2 * sum(u.r for u in g.instance.uavs) > g.instance.beta

    def test_malformed_multisets_rejected(self):
        with pytest.raises(InvalidInstanceError):
            gen_hard_instance([5, 4, 3])  # B=12 but 3 <= 12/4
        with pytest.raises(InvalidInstanceError):
            gen_hard_instance([5, 4, 4, 3, 3])  # not a multiple of 3
        with pytest.raises(InvalidInstanceError):
            gen_hard_instance([5, 4, 4, 3, 3, 4])  # sum not divisible by m

    def test_blockers_emerge_pinned(self):
        # Within the deadline the blocker can only rise vertically: any
        # feasible order leaves it exactly where it started.
        g = gen_hard_instance([5, 4, 4, 3, 3, 3], variant="minmax")
        placed = exists_order_feasible(g.instance, g.k)
        assert placed is not None
        spots = {u.id: y for u, y in placed}
        blocker = [u for u in g.instance.uavs if 0 < u.x][0]
        assert spots[blocker.id] == pytest.approx(blocker.x, abs=1e-9)

    def test_sorted_order_alone_can_be_too_strict(self):
        # This multiset partitions as {5,3,3}/{4,4,3}, yet the x-sorted
        # dispatch order cannot realize any partition: the reduction needs
        # the unrestricted check.
        g = gen_hard_instance([5, 4, 4, 3, 3, 3], variant="minmax")
        assert has_three_partition(g.multiset) is not None
        assert not check_feasibility(g.instance, g.k).feasible
        assert exists_order_feasible(g.instance, g.k) is not None


class TestMultisetEnumeration:
    def test_b11(self):
        got = sorted(enumerate_partition_multisets(2, 11))
        assert got == sorted(
            [(4, 4, 4, 4, 3, 3), (5, 4, 4, 3, 3, 3), (5, 5, 3, 3, 3, 3)]
        )

    def test_b13(self):
        got = sorted(enumerate_partition_multisets(2, 13))
        assert got == sorted([(6, 4, 4, 4, 4, 4), (5, 5, 4, 4, 4, 4)])

    def test_all_satisfy_preconditions(self):
        for m, b in [(2, 11), (2, 13)]:
            for ms in enumerate_partition_multisets(m, b):
                assert len(ms) == 3 * m
                assert sum(ms) == m * b
                assert all(b / 4 < a < b / 2 for a in ms)
