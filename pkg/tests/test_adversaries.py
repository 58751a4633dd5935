import math

import pytest

from kcover import (
    AcceptAllPolicy,
    AnytimeThresholdPolicy,
    ConfigError,
    Decision,
    Policy,
    RejectUntilForcedPolicy,
    ThresholdPolicy,
    adv_al,
    adv_fl_an,
    adv_fl_un,
    adv_ul_un_general,
    adv_ul_un_k2,
    adv_us_un,
    chain_alpha,
    geometric_gadget,
    lb_fl_an,
    lb_fl_un,
    lb_ul_un,
    solve_offline,
)
from kcover.harness import full_policy_suite, run_game


class RejectAt(Policy):
    """Accept everything except the given positions (1-based)."""

    name = "reject-at"

    def __init__(self, quota, skip):
        super().__init__(quota)
        self.skip = set(skip)

    def _decide(self, item, position, remaining_known):
        return position not in self.skip and self.accepted_count < self.quota


def ratio_of(policy, adversary):
    record, inst = run_game(policy, adversary)
    return record.ratio_or_inf, record, inst


class TestGeometricGadget:
    def test_head_to_tail_chaining(self):
        g = geometric_gadget(6, 14)
        for i in range(g.alpha + 1, 14):
            assert sum(g.offsets[: i + 1]) == pytest.approx(
                1.0 + sum(g.offsets[:i]), abs=1e-9
            )

    def test_offsets_shapes(self):
        k = 5
        g = geometric_gadget(k, 12)
        assert g.offsets[0] == 0.0
        for i in range(1, g.alpha + 1):
            assert g.offsets[i] == pytest.approx(
                k ** (i / k) - k ** ((i - 1) / k), abs=1e-12
            )
            assert 0.0 < g.offsets[i] <= 1.0 + 1e-12
        assert all(o == 1.0 for o in g.offsets[g.alpha + 1 :])


class TestQuotaTwoAdversary:
    def test_threshold_policy_hits_sqrt2(self):
        r, record, inst = ratio_of(ThresholdPolicy(2, 10), adv_ul_un_k2(10))
        assert record.alg_value == pytest.approx(math.sqrt(2), abs=1e-12)
        assert record.opt_value == pytest.approx(2.0, abs=1e-12)
        assert r == pytest.approx(math.sqrt(2), abs=1e-9)
        assert record.trace[:2] == ["accept", "accept"]

    def test_rejecting_second_item(self):
        r, record, _ = ratio_of(RejectAt(2, {2}), adv_ul_un_k2(8))
        assert r == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_rejecting_first_item(self):
        r, _, _ = ratio_of(RejectAt(2, {1}), adv_ul_un_k2(8))
        assert r >= math.sqrt(2) - 1e-9

    def test_suite_certification(self, rng):
        for n in (5, 12):
            for name, factory in full_policy_suite("UL", 2, n, None, rng):
                adv = adv_ul_un_k2(n)
                r, _, _ = ratio_of(factory(), adv)
                assert r >= adv.declared_bound - 1e-6, (name, n)


class TestUnitChainAdversary:
    def test_accept_all_matches_formula(self):
        # with alpha <= k-1 the full-accept ratio equals the third bound term
        for k in (4, 5):
            a = chain_alpha(k)
            assert a <= k - 1
            n = a + k + 2
            r, _, _ = ratio_of(AcceptAllPolicy(k), adv_ul_un_general(k, n))
            assert r == pytest.approx(k / (k ** (a / k) + k - a - 1), abs=1e-9)

    def test_accept_all_alpha_equals_quota(self):
        # k=3 has alpha = k; the realized full-accept ratio is then k^(1/k)
        r, _, _ = ratio_of(AcceptAllPolicy(3), adv_ul_un_general(3, 10))
        assert r == pytest.approx(3 ** (1 / 3), abs=1e-9)

    def test_early_rejection_telescopes(self):
        # rejecting within the geometric prefix forces exactly k^(1/k)
        r, record, _ = ratio_of(RejectAt(5, {2}), adv_ul_un_general(5, 12))
        assert r == pytest.approx(5 ** (1 / 5), abs=1e-9)

    def test_rejecting_opening_item(self):
        r, _, _ = ratio_of(RejectAt(4, {1}), adv_ul_un_general(4, 10))
        assert r >= 2.0 - 1e-9

    def test_suite_certification(self, rng):
        for k, n in [(3, 4), (3, 10), (5, 6), (5, 12), (8, 9)]:
            for name, factory in full_policy_suite("UL", k, n, None, rng):
                adv = adv_ul_un_general(k, n)
                r, _, _ = ratio_of(factory(), adv)
                assert r >= adv.declared_bound - 1e-6, (name, k, n)

    def test_realized_instances_are_valid(self, rng):
        _, record, inst = ratio_of(AcceptAllPolicy(5), adv_ul_un_general(5, 12))
        assert inst.setting.label() == "UL-UN"
        assert inst.n == 12

    def test_domain(self):
        with pytest.raises(ConfigError):
            adv_ul_un_general(2, 10)
        with pytest.raises(ConfigError):
            adv_ul_un_general(5, 5)


class TestFlexAdversary:
    def test_accept_all_meets_formula(self):
        for k, n, m in [(4, 10, 2.0), (5, 12, 5.0)]:
            adv = adv_fl_un(k, n, m)
            r, _, _ = ratio_of(AcceptAllPolicy(k), adv)
            assert r >= 2 * k * m / (2 * k * m + (1 - m) * min(k, n - k)) - 1e-9

    def test_reject_all_probes_hits_two(self):
        # skipping every unit probe lands in the clone tail: ratio >= 2
        k, n, m = 4, 12, 2.0
        adv = adv_fl_un(k, n, m)
        tau = min(k, n - k)
        r, _, _ = ratio_of(RejectAt(k, set(range(1, tau + 1))), adv)
        assert r >= 2.0 - 1e-9
        assert r >= adv.declared_bound - 1e-6

    def test_short_horizon_corner(self, rng):
        # n = k+1 makes tau = 1; the withheld-quota policy must still lose
        for k in (3, 8):
            for m in (2.0, 5.0):
                adv = adv_fl_un(k, k + 1, m)
                r, _, _ = ratio_of(RejectUntilForcedPolicy(k, k + 1), adv)
                assert r >= adv.declared_bound - 1e-6

    def test_unknown_count_variant(self, rng):
        adv = adv_fl_an(4, 3.0, 12)
        assert adv.declared_bound == pytest.approx(1.5)
        for name, factory in full_policy_suite("FL", 4, None, 3.0, rng):
            adv = adv_fl_an(4, 3.0, 12)
            r, _, _ = ratio_of(factory(), adv)
            assert r >= lb_fl_an(3.0) - 1e-6, name

    def test_suite_certification(self, rng):
        for k, n, m in [(3, 4, 2.0), (4, 9, 2.0), (6, 14, 5.0)]:
            for name, factory in full_policy_suite("FL", k, n, m, rng):
                adv = adv_fl_un(k, n, m)
                r, _, _ = ratio_of(factory(), adv)
                assert r >= adv.declared_bound - 1e-6, (name, k, n, m)


class TestUnitSumAdversary:
    def test_single_part_matches_plain_chain(self):
        a1 = adv_us_un(5, 12, 1)
        a2 = adv_ul_un_general(5, 12)
        item1, item2 = a1.first(), a2.first()
        for pos in range(1, 13):
            assert item1 is not None and item2 is not None
            assert [(p.start, p.end) for p in item1.parts] == [
                (p.start, p.end) for p in item2.parts
            ]
            item1 = a1.react(Decision.ACCEPT, pos)
            item2 = a2.react(Decision.ACCEPT, pos)
        assert item1 is None and item2 is None

    def test_split_preserves_thresholds_trace(self):
        r1, rec1, _ = ratio_of(
            ThresholdPolicy(5, 12, setting="US"), adv_us_un(5, 12, 3)
        )
        r2, rec2, _ = ratio_of(ThresholdPolicy(5, 12), adv_ul_un_general(5, 12))
        assert rec1.trace == rec2.trace
        assert rec1.alg_value == pytest.approx(rec2.alg_value, abs=1e-9)

    def test_suite_certification(self, rng):
        for k, n, parts in [(3, 8, 3), (5, 10, 3), (4, 9, 1)]:
            for name, factory in full_policy_suite("US", k, n, None, rng):
                adv = adv_us_un(k, n, parts)
                r, _, _ = ratio_of(factory(), adv)
                assert r >= adv.declared_bound - 1e-6, (name, k, n, parts)


class TestArbitraryLengthAdversary:
    def test_accept_all_forced(self):
        adv = adv_al(1e-3, 3, 8)
        r, record, inst = ratio_of(AcceptAllPolicy(3), adv)
        assert r >= 1000.0 - 1e-6
        assert record.alg_value == pytest.approx(1e-3, rel=1e-9)

    def test_reject_first_forced(self):
        adv = adv_al(1e-3, 3, 8)
        r, _, _ = ratio_of(RejectAt(3, {1}), adv)
        assert r >= 1000.0 - 1e-6

    def test_suite_forced(self, rng):
        for k in (2, 5):
            horizon = 2 * k + 2
            for name, factory in full_policy_suite("AL", k, horizon, None, rng):
                adv = adv_al(1e-3, k, horizon)
                r, _, _ = ratio_of(factory(), adv)
                assert r >= 1000.0 - 1e-6, (name, k)

    def test_opt_checked_against_solver(self):
        adv = adv_al(1e-2, 2, 6)
        _, record, inst = ratio_of(AcceptAllPolicy(2), adv)
        assert record.opt_value == pytest.approx(solve_offline(inst)[0], abs=1e-12)


def test_adaptivity_window(rng):
    # the reaction to position p only shapes items at positions > p: two
    # runs that diverge at p share the prefix up to p
    advA = adv_ul_un_general(4, 10)
    advB = adv_ul_un_general(4, 10)
    a_items = [advA.first()]
    b_items = [advB.first()]
    for pos in range(1, 4):
        a_items.append(advA.react(Decision.ACCEPT, pos))
        b_items.append(advB.react(Decision.REJECT if pos == 3 else Decision.ACCEPT, pos))
    assert a_items[:3] == b_items[:3]
    assert a_items[3] != b_items[3]
