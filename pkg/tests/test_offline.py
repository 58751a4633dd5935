import math
import random

import pytest

from kcover import (
    Batch,
    Instance,
    Setting,
    SettingError,
    SizeGuardError,
    brute_force_offline,
    build_predecessors,
    dp_context,
    solve_offline,
    solve_offline_unit,
    sort_instance,
    union_length,
)
from kcover.harness import gen_instance, random_nk

from conftest import al_instance, unit_instance


class TestSolveOffline:
    def test_three_items_quota_two(self):
        inst = al_instance([(0, 1), (0.5, 1.5), (2, 3)], 2)
        value, chosen = solve_offline(inst)
        assert value == pytest.approx(2.0)
        assert set(chosen) in ({0, 2}, {1, 2})

    def test_quota_covers_everything(self):
        inst = al_instance([(0, 1), (0.5, 1.5), (2, 3)], 5)
        value, chosen = solve_offline(inst)
        assert value == pytest.approx(union_length(list(inst.items)))

    def test_quota_zero(self):
        inst = al_instance([(0, 1), (2, 3)], 2)
        assert solve_offline(inst, quota=0) == (0.0, ())

    def test_nested_intervals(self):
        # the inner item must not shadow the outer one
        inst = al_instance([(0.2, 0.4), (0.0, 1.0)], 2)
        value, chosen = solve_offline(inst, quota=2)
        assert value == pytest.approx(1.0)

    def test_chosen_achieves_value(self, rng):
        for _ in range(50):
            n, k = random_nk(rng, 9)
            inst = gen_instance(rng, "AL", n, k)
            value, chosen = solve_offline(inst)
            assert len(chosen) <= k
            assert union_length([inst.items[i] for i in chosen]) == pytest.approx(
                value, abs=1e-9
            )

    def test_refuses_multi_part_batches(self):
        b1 = Batch((Batch.single(0, 0.5).parts[0], Batch.single(1, 1.5).parts[0]))
        b2 = Batch((Batch.single(2, 2.5).parts[0], Batch.single(3, 3.5).parts[0]))
        inst = Instance(5, 2, Setting("US", "AN"), (b1, b2))
        with pytest.raises(SettingError, match="brute_force_offline"):
            solve_offline(inst)


class TestPredecessors:
    def test_reference_configuration(self):
        inst = al_instance([(0, 1), (0.5, 1.5), (2, 3)], 2)
        s = sort_instance(inst)
        psi, phi = build_predecessors(s)
        assert psi[2] is None and phi[2] == 1
        assert psi[1] == 0 and phi[1] is None
        assert psi[0] is None and phi[0] is None

    def test_deep_overlap_beats_near_end(self):
        # lam-analog in the unit DP: ends 8.2, 8.5, 8.9, 9.2, 9.6, 10 -> the
        # deeper-overlapping predecessor (9.2) is picked over 9.6, and the
        # nearest disjoint one is 8.9.
        from kcover.offline import _unit_predecessors

        ends = [8.2, 8.5, 8.9, 9.2, 9.6, 10.0]
        inst = unit_instance([(e - 1, e) for e in ends], 3, count="AN", target=10)
        lam, mu = _unit_predecessors(sort_instance(inst))
        assert lam[5] == 3
        assert mu[5] == 2


class TestUnitSolver:
    def test_disjoint_chain(self):
        inst = unit_instance([(i, i + 1) for i in range(6)], 3, count="AN")
        value, chosen = solve_offline_unit(inst)
        assert value == pytest.approx(3.0)
        assert len(chosen) == 3

    def test_all_duplicates(self):
        inst = unit_instance([(0, 1)] * 4, 2, count="AN")
        value, _ = solve_offline_unit(inst)
        assert value == pytest.approx(1.0)

    def test_rejects_non_unit(self):
        inst = al_instance([(0, 1), (0, 2.5)], 2)
        with pytest.raises(SettingError):
            solve_offline_unit(inst)

    def test_matches_general_dp(self, rng):
        for _ in range(200):
            n, k = random_nk(rng, 10)
            inst = gen_instance(rng, "UL", n, k)
            assert solve_offline_unit(inst)[0] == pytest.approx(
                solve_offline(inst)[0], abs=1e-9
            )


class TestBruteForce:
    def test_single_item(self):
        inst = al_instance([(0, 1)], 2)
        assert brute_force_offline(inst, quota=1)[0] == pytest.approx(1.0)

    def test_four_items(self):
        inst = al_instance([(0, 1), (0, 1), (1, 2), (3, 4)], 2)
        assert brute_force_offline(inst)[0] == pytest.approx(2.0)

    def test_unit_sum_batches(self):
        b1 = Batch((Batch.single(0, 0.5).parts[0], Batch.single(2, 2.5).parts[0]))
        b2 = Batch((Batch.single(0.25, 0.75).parts[0], Batch.single(3, 3.5).parts[0]))
        inst = Instance(5, 2, Setting("US", "AN"), (b1, b2))
        assert brute_force_offline(inst, quota=1)[0] == pytest.approx(1.0)

    def test_size_guard(self):
        inst = unit_instance([(i * 0.1, i * 0.1 + 1) for i in range(25)], 3, count="AN")
        with pytest.raises(SizeGuardError):
            brute_force_offline(inst)
        brute_force_offline(inst, quota=1, max_n=30)


def test_oracle_equivalence_sample(rng):
    for length, m in [("UL", None), ("FL", 2.0), ("AL", None)]:
        for _ in range(150):
            n, k = random_nk(rng, 10)
            inst = gen_instance(rng, length, n, k, m)
            dp, _ = solve_offline(inst)
            bf, _ = brute_force_offline(inst)
            assert dp == pytest.approx(bf, abs=1e-9)


def test_value_table_monotonicity(rng):
    for _ in range(60):
        n, k = random_nk(rng, 9)
        inst = gen_instance(rng, "AL", n, k)
        ctx = dp_context(inst)
        chi, kappa = ctx.chi, ctx.kappa
        for i in range(n + 1):
            for j in range(k + 1):
                if j + 1 <= k:
                    assert chi[i][j] <= chi[i][j + 1] + 1e-12
                if i >= 1:
                    assert chi[i - 1][j] <= chi[i][j] + 1e-12
                assert kappa[i][j] <= chi[i][j] + 1e-9


def test_dp_cell_budget(rng):
    # the memo stays at O(k*n): two tables, one write per cell
    for _ in range(20):
        n, k = random_nk(rng, 10)
        inst = gen_instance(rng, "AL", n, k)
        ctx = dp_context(inst)
        assert ctx.cells_filled <= 2 * (n + 1) * (k + 1)


def test_quota_override_beyond_n():
    inst = al_instance([(0, 1), (2, 3)], 2)
    value, chosen = solve_offline(inst, quota=10)
    assert value == pytest.approx(2.0)
