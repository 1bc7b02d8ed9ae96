import math

import numpy as np
import pytest

import recmatch as rm
from recmatch import model
from recmatch.model import LEFT, RIGHT

from conftest import (
    example1_instance,
    example1_sorted_policy,
    example1_uniform_policy,
    random_instance,
    random_policy,
)
from oracles import bf_cross_utility, bf_match_probability


def two_by_two_instance():
    # joint preference [[1.0, 0.5], [0.5, 1.0]] via p2 = transpose of p1
    p1 = np.array([[1.0, 0.5], [1.0, 1.0]])
    p2 = np.array([[1.0, 0.5], [1.0, 1.0]])
    return rm.Instance(p1, p2, rm.ExaminationFunction("inverse"))


class TestMatchProbability:
    def test_example1_second_agent(self):
        inst = example1_instance(0.5)
        pol = example1_sorted_policy()
        # the right agent reads its list top-down: second-ranked suitor gets v(2)
        assert rm.match_probability(inst, pol, 1, 0) == pytest.approx(0.25, abs=1e-15)

    def test_zero_preference_gives_zero(self):
        inst = rm.Instance(
            [[0.0, 1.0]], [[0.0], [1.0]], rm.ExaminationFunction("inverse")
        )
        pol = rm.uniform_policy(1, 2)
        assert rm.match_probability(inst, pol, 0, 0) == 0.0

    def test_uniform_two_by_two(self):
        inst = two_by_two_instance()
        pol = rm.uniform_policy(2, 2)
        # uniform exposure on both sides is (1 + 1/2)/2 = 0.75
        assert rm.match_probability(inst, pol, 0, 0) == pytest.approx(
            0.5625, abs=1e-15
        )

    def test_matches_brute_force_on_small_instances(self, rng):
        for _ in range(8):
            n, m = rng.integers(1, 4, size=2)
            inst = random_instance(rng, int(n), int(m))
            pol = random_policy(rng, int(n), int(m))
            for i in range(inst.n):
                for j in range(inst.m):
                    assert rm.match_probability(inst, pol, i, j) == pytest.approx(
                        bf_match_probability(inst, pol, i, j), abs=1e-12
                    )

    def test_bounded_by_joint_preference(self, rng):
        inst = random_instance(rng, 4, 5)
        pol = random_policy(rng, 4, 5)
        p = inst.joint()
        for i in range(4):
            for j in range(5):
                q = rm.match_probability(inst, pol, i, j)
                assert 0.0 <= q <= p[i, j] + 1e-15

    def test_index_errors(self):
        inst = example1_instance(0.5)
        pol = example1_uniform_policy()
        with pytest.raises(IndexError):
            rm.match_probability(inst, pol, 2, 0)
        with pytest.raises(IndexError):
            rm.match_probability(inst, pol, 0, 1)


class TestUtilityAndWelfare:
    def test_example1_utilities(self):
        inst = example1_instance(0.5)
        pol = example1_sorted_policy()
        assert rm.utility(inst, pol, LEFT, 0) == pytest.approx(1.0, abs=1e-15)
        assert rm.utility(inst, pol, LEFT, 1) == pytest.approx(0.25, abs=1e-15)
        uni = example1_uniform_policy()
        assert rm.utility(inst, uni, LEFT, 0) == pytest.approx(0.75, abs=1e-15)

    def test_single_pair_market(self):
        inst = rm.Instance([[1.0]], [[1.0]], rm.ExaminationFunction("inverse"))
        pol = rm.Policy(np.ones((1, 1, 1)), np.ones((1, 1, 1)))
        assert rm.utility(inst, pol, LEFT, 0) == 1.0
        assert rm.social_welfare(inst, pol) == 1.0

    @pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
    def test_example1_social_welfare(self, eps):
        inst = example1_instance(eps)
        assert rm.social_welfare(inst, example1_sorted_policy()) == pytest.approx(
            1.0 + (1.0 - eps) / 2.0, abs=1e-12
        )
        assert rm.social_welfare(inst, example1_uniform_policy()) == pytest.approx(
            0.75 + 3.0 * (1.0 - eps) / 4.0, abs=1e-12
        )

    def test_two_by_two_uniform_welfare(self):
        inst = two_by_two_instance()
        assert rm.social_welfare(inst, rm.uniform_policy(2, 2)) == pytest.approx(
            1.6875, abs=1e-15
        )

    def test_side_sums_agree(self, rng):
        for _ in range(10):
            n, m = int(rng.integers(1, 7)), int(rng.integers(1, 7))
            kind = "inverse" if rng.random() < 0.5 else "logarithmic"
            inst = random_instance(rng, n, m, kind=kind)
            pol = random_policy(rng, n, m)
            left = sum(rm.utility(inst, pol, LEFT, i) for i in range(n))
            right = sum(rm.utility(inst, pol, RIGHT, j) for j in range(m))
            sw = rm.social_welfare(inst, pol)
            assert left == pytest.approx(sw, abs=1e-9)
            assert right == pytest.approx(sw, abs=1e-9)


class TestLogNsw:
    def test_example1_uniform_values(self):
        inst = example1_instance(0.5)
        pol = example1_uniform_policy()
        assert rm.log_nsw(inst, pol, LEFT) == pytest.approx(
            math.log(0.75) + math.log(0.375), abs=1e-12
        )
        assert rm.log_nsw(inst, pol, RIGHT) == pytest.approx(
            math.log(1.125), abs=1e-12
        )

    def test_zero_utility_included_agent_gives_minus_inf(self):
        # K=1 truncation with both right agents ranking left agent 0 first:
        # left agent 1 sits below the cutoff everywhere, so its utility is 0
        # while its preferences are positive (it stays included).
        inst = rm.Instance(
            np.ones((2, 2)), np.ones((2, 2)), rm.ExaminationFunction("inverse", K=1)
        )
        ident = np.stack([np.eye(2), np.eye(2)])
        pol = rm.Policy(ident, ident)
        assert rm.utility(inst, pol, LEFT, 1) == 0.0
        assert rm.log_nsw(inst, pol, LEFT) == -math.inf

    def test_excluded_agents_do_not_poison_product(self):
        p1 = np.array([[0.0], [1.0]])
        p2 = np.array([[0.0, 1.0]])
        inst = rm.Instance(p1, p2, rm.ExaminationFunction("inverse"))
        pol = rm.uniform_policy(2, 1)
        assert math.isfinite(rm.log_nsw(inst, pol, LEFT))


class TestCrossUtilityAndEnvy:
    def test_example1_cross_utilities(self):
        inst = example1_instance(0.5)
        pol = example1_sorted_policy()
        assert rm.cross_utility(inst, pol, LEFT, 1, 0) == pytest.approx(0.5, abs=1e-15)
        assert rm.cross_utility(inst, pol, LEFT, 0, 1) == pytest.approx(0.5, abs=1e-15)

    def test_self_cross_equals_utility_exactly(self, rng):
        inst = random_instance(rng, 4, 3, kind="logarithmic")
        pol = random_policy(rng, 4, 3)
        for side, size in ((LEFT, 4), (RIGHT, 3)):
            for x in range(size):
                assert rm.cross_utility(inst, pol, side, x, x) == rm.utility(
                    inst, pol, side, x
                )

    def test_matches_brute_force(self, rng):
        inst = random_instance(rng, 3, 4)
        pol = random_policy(rng, 3, 4)
        for side, size in ((LEFT, 3), (RIGHT, 4)):
            for x in range(size):
                for y in range(size):
                    assert rm.cross_utility(inst, pol, side, x, y) == pytest.approx(
                        bf_cross_utility(inst, pol, side, x, y), abs=1e-12
                    )

    def test_example1_envy_audit(self):
        inst = example1_instance(0.5)
        report = rm.envy_audit(inst, example1_sorted_policy(), 1e-9)
        assert (report.left_envy_pairs, report.right_envy_pairs) == (1, 0)
        assert report.max_left_envy == pytest.approx(0.25, abs=1e-12)
        report2 = rm.envy_audit(inst, example1_uniform_policy(), 1e-9)
        assert (report2.left_envy_pairs, report2.right_envy_pairs) == (0, 0)
        assert report2.max_left_envy == 0.0

    def test_uniform_policy_envy_free_at_zero_tolerance(self, rng):
        for _ in range(20):
            n, m = int(rng.integers(1, 8)), int(rng.integers(1, 8))
            kind = "inverse" if rng.random() < 0.5 else "logarithmic"
            inst = random_instance(rng, n, m, kind=kind)
            report = rm.envy_audit(inst, rm.uniform_policy(n, m), 0.0)
            assert (report.left_envy_pairs, report.right_envy_pairs) == (0, 0)

    def test_envy_counts_bounded(self, rng):
        inst = random_instance(rng, 4, 5)
        pol = random_policy(rng, 4, 5)
        report = rm.envy_audit(inst, pol, 0.0)
        assert 0 <= report.left_envy_pairs <= 4 * 3
        assert 0 <= report.right_envy_pairs <= 5 * 4

    def test_k1_envy_is_divisible_goods_envy(self, rng):
        # With K=1 and fixed deterministic lists, left envy comparisons reduce
        # to a divisible-goods allocation: agent i values good j at
        # p(i,j) * A[i](j, 1) and receives share B[j](i, 1).
        for _ in range(6):
            n, m = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            inst = random_instance(rng, n, m, K=1)
            pol = random_policy(rng, n, m)
            # make A deterministic lists
            A = np.zeros((n, m, m))
            for i in range(n):
                perm = rng.permutation(m)
                A[i, np.arange(m), perm] = 1.0
            pol = rm.Policy(A, pol.B)
            p = inst.joint()
            values = p * pol.A[:, :, 0]          # (n, m) per-agent good values
            shares = pol.B[:, :, 0].T            # (n, m): share of good j to i
            for x in range(n):
                for y in range(n):
                    alloc_view = float(values[x] @ shares[y])
                    assert rm.cross_utility(inst, pol, LEFT, x, y) == pytest.approx(
                        alloc_view, abs=1e-12
                    )


class TestEpsilonSimilarity:
    def test_identical_rows_give_zero(self):
        p1 = np.full((3, 3), 0.6)
        p2 = np.full((3, 3), 0.5)
        inst = rm.Instance(p1, p2, rm.ExaminationFunction("inverse"))
        assert rm.epsilon_similarity(inst, 1) == 0.0

    def test_example1_left_bound(self):
        inst = example1_instance(0.5)
        # right side has a single agent, so only the left bound applies
        assert rm.epsilon_similarity(inst, 1) == pytest.approx(0.5, abs=1e-15)

    def test_three_agent_offset_rows(self):
        base = np.array([0.2, 0.4, 0.6])
        p1 = np.stack([base, base, base + 0.2])
        p2 = np.ones((3, 3))
        inst = rm.Instance(p1, p2, rm.ExaminationFunction("inverse"))
        assert rm.epsilon_similarity(inst, 1) == pytest.approx(0.2, abs=1e-12)

    def test_too_small_sides_error(self):
        inst = example1_instance(0.5)
        with pytest.raises(ValueError):
            rm.epsilon_similarity(inst, 2)


class TestPolicyValidation:
    def test_uniform_ok(self):
        inst = two_by_two_instance()
        assert rm.validate_policy(inst, rm.uniform_policy(2, 2)) == []

    def test_row_sum_violation_named(self):
        inst = two_by_two_instance()
        pol = rm.uniform_policy(2, 2)
        bad = pol.A.copy()
        bad[1, 0, 0] = 0.4  # row sums to 0.9
        violations = rm.validate_policy(inst, rm.Policy(bad, pol.B))
        assert any("A[1]" in v and "row 0" in v for v in violations)

    def test_negative_entry_flagged(self):
        inst = two_by_two_instance()
        pol = rm.uniform_policy(2, 2)
        bad = pol.B.copy()
        bad[0, 0, 0] = -0.01
        bad[0, 0, 1] = 1.01
        violations = rm.validate_policy(inst, rm.Policy(pol.A, bad))
        assert any("negative" in v for v in violations)

    def test_shape_mismatch_reported(self):
        inst = two_by_two_instance()
        pol = rm.uniform_policy(3, 2)
        violations = rm.validate_policy(inst, pol)
        assert violations and "shape" in violations[0]

    def test_convex_combination_stays_valid(self, rng):
        inst = random_instance(rng, 3, 4)
        p = random_policy(rng, 3, 4)
        q = random_policy(rng, 3, 4)
        for w in (0.0, 0.3, 1.0):
            mix = rm.Policy(w * p.A + (1 - w) * q.A, w * p.B + (1 - w) * q.B)
            assert rm.validate_policy(inst, mix) == []


class TestUniformPolicy:
    def test_two_one_market(self):
        pol = rm.uniform_policy(2, 1)
        assert pol.A.shape == (2, 1, 1)
        assert np.all(pol.A == 1.0)
        assert np.all(pol.B == 0.5)

    def test_trivial_market(self):
        pol = rm.uniform_policy(1, 1)
        assert np.all(pol.A == 1.0) and np.all(pol.B == 1.0)

    def test_three_two_market(self):
        pol = rm.uniform_policy(3, 2)
        assert np.all(pol.A == 0.5)
        assert np.all(pol.B == pytest.approx(1.0 / 3.0))


class TestOpportunityView:
    def test_left_view_rows(self, rng):
        pol = random_policy(rng, 3, 4)
        view = rm.OpportunityView.from_policy(pol, LEFT, 1)
        assert view.rows.shape == (4, 3)
        for j in range(4):
            assert np.array_equal(view.rows[j], pol.B[j, 1, :])
        assert not view.rows.flags.writeable
        assert view.rows.min() >= 0.0 and view.rows.max() <= 1.0

    def test_right_view_rows(self, rng):
        pol = random_policy(rng, 3, 4)
        view = rm.OpportunityView.from_policy(pol, RIGHT, 2)
        assert view.rows.shape == (3, 4)
        for i in range(3):
            assert np.array_equal(view.rows[i], pol.A[i, 2, :])


class TestInstanceValidation:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            rm.Instance([[1.5]], [[0.5]], rm.ExaminationFunction("inverse"))
        with pytest.raises(ValueError):
            rm.Instance([[0.5]], [[-0.1]], rm.ExaminationFunction("inverse"))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            rm.Instance(np.ones((2, 3)), np.ones((2, 3)), rm.ExaminationFunction())

    def test_joint_is_derived(self):
        inst = two_by_two_instance()
        assert np.array_equal(inst.joint(), inst.p1 * inst.p2.T)
