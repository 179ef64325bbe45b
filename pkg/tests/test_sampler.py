import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lssa.errors import ArgumentError, DimensionError, ParseError
from lssa.sampler import (
    SamplingPlan,
    lift_solution,
    lifted_matrix,
    load_plan,
    plan_from_dict,
    plan_to_dict,
    sample_subsystems,
    save_plan,
    selection_counts,
)


@st.composite
def sizes(draw):
    n = draw(st.integers(1, 40))
    g = draw(st.integers(1, n))
    s = draw(st.integers(-(-n // g), 3 * (-(-n // g)) + 3))
    return n, g, s


class TestSampling:
    def test_four_by_two(self):
        for seed in range(20):
            plan = sample_subsystems(4, 2, 4, seed)
            assert plan.n_subsystems == 4
            assert np.all(plan.counts() == 2)

    def test_full_selection(self):
        plan = sample_subsystems(7, 7, 1, seed=3)
        assert sorted(plan.selections[0]) == list(range(7))

    def test_minimum_count_sweep(self):
        for seed in range(1000):
            assert sample_subsystems(10, 3, 4, seed).counts().min() >= 1

    def test_remainder_case_keeps_floor_bound(self):
        # 10 selections of 3 over 10 variables: everyone must appear 3 times
        for seed in range(200):
            assert sample_subsystems(10, 3, 10, seed).counts().min() >= 3

    @settings(max_examples=200, deadline=None)
    @given(sizes(), st.integers(0, 2**32 - 1))
    def test_invariants(self, nsg, seed):
        n, g, s = nsg
        plan = sample_subsystems(n, g, s, seed)
        assert plan.n_subsystems == s
        assert all(len(sel) == g == len(set(sel)) for sel in plan.selections)
        counts = plan.counts()
        assert counts.min() >= max(1, (s * g) // n)
        assert counts.max() - counts.min() <= 1

    def test_exact_counts_when_divisible(self):
        plan = sample_subsystems(12, 4, 9, seed=1)
        assert np.all(plan.counts() == 3)

    def test_deterministic(self):
        assert sample_subsystems(20, 6, 9, seed=4) == sample_subsystems(20, 6, 9, seed=4)
        assert sample_subsystems(20, 6, 9, seed=4) != sample_subsystems(20, 6, 9, seed=5)

    @pytest.mark.parametrize("args", [(10, 3, 3), (10, 11, 1), (10, 0, 5), (10, 2, 0)])
    def test_invalid_sizes(self, args):
        with pytest.raises(ArgumentError):
            sample_subsystems(*args)

    def test_plan_validation(self):
        with pytest.raises(ArgumentError):
            SamplingPlan(4, 2, ((0, 0),))
        with pytest.raises(ArgumentError):
            SamplingPlan(4, 2, ((0, 1, 2),))


class TestLift:
    def test_in_order(self):
        np.testing.assert_array_equal(lift_solution([0, 1], [1, -1], 4), [1, -1, 0, 0])

    def test_order_sensitive(self):
        np.testing.assert_array_equal(lift_solution([3, 0], [1, -1], 4), [-1, 0, 0, 1])

    def test_full_selection_has_no_zeros(self):
        sel = [2, 0, 3, 1]
        out = lift_solution(sel, [1, 1, -1, -1], 4)
        assert np.all(out != 0)
        np.testing.assert_array_equal(out[sel], [1, 1, -1, -1])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000))
    def test_restriction_recovers(self, seed):
        rng = np.random.default_rng(seed)
        sel = rng.permutation(15)[:6]
        sub = rng.choice([-1, 1], size=6)
        out = lift_solution(sel, sub, 15)
        np.testing.assert_array_equal(out[sel], sub)
        assert np.count_nonzero(out) == 6

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            lift_solution([0, 1], [1], 4)

    def test_matrix(self):
        L = lifted_matrix([(0, 1), (2, 3)], [[1, -1], [-1, 1]], 4)
        np.testing.assert_array_equal(L, [[1, -1, 0, 0], [0, 0, -1, 1]])
        with pytest.raises(DimensionError):
            lifted_matrix([(0, 1)], [], 4)


class TestPersistence:
    def test_round_trip(self, tmp_path):
        plan = sample_subsystems(9, 4, 5, seed=2)
        assert plan_from_dict(plan_to_dict(plan)) == plan
        save_plan(plan, tmp_path / "plan.json")
        assert load_plan(tmp_path / "plan.json") == plan

    def test_malformed(self):
        with pytest.raises(ParseError):
            plan_from_dict({"n_vars": 3})

    def test_counts_helper(self):
        np.testing.assert_array_equal(selection_counts([(0, 1), (1, 2)], 4), [1, 2, 1, 0])
