from fractions import Fraction as F

import pytest
from hypothesis import given
import hypothesis.strategies as st

import oracles
from strategies import distributions, joints, open_unit_fractions, rational_values
from varlab import DiscreteDistribution, JointDiscreteDistribution, independent_product

BERN_3_10 = DiscreteDistribution.bernoulli(F(3, 10))


class TestFromWeightedValues:
    def test_merges_duplicates_and_normalizes(self):
        d = DiscreteDistribution.from_weighted_values([(1, 1), (1, 1), (3, 2)])
        assert d.atoms == ((F(1), F(1, 2)), (F(3), F(1, 2)))

    def test_normalization_identity(self):
        d = DiscreteDistribution.from_weighted_values([(0, 7), (1, 3)])
        assert d.atoms == ((F(0), F(7, 10)), (F(1), F(3, 10)))

    def test_point_mass(self):
        d = DiscreteDistribution.from_weighted_values([(5, 1)])
        assert d.atoms == ((F(5), F(1)),)

    def test_rejects_empty_input(self):
        with pytest.raises(ValueError):
            DiscreteDistribution.from_weighted_values([])

    def test_rejects_negative_weight(self):
        with pytest.raises(ValueError, match="nonnegative"):
            DiscreteDistribution.from_weighted_values([(0, 1), (1, -1)])

    def test_rejects_zero_total_weight(self):
        with pytest.raises(ValueError, match="positive"):
            DiscreteDistribution.from_weighted_values([(0, 0), (1, 0)])


class TestConstruction:
    def test_requires_unit_total(self):
        with pytest.raises(ValueError, match="sum to exactly 1"):
            DiscreteDistribution(((F(0), F(1, 2)), (F(1), F(1, 4))))

    def test_drops_zero_probability_atoms(self):
        d = DiscreteDistribution(((F(0), F(1, 2)), (F(1), F(1, 2)), (F(2), F(0))))
        assert d.values == (F(0), F(1))

    def test_values_strictly_increasing(self):
        d = DiscreteDistribution.from_weighted_values([(3, 1), (1, 1), (2, 1)])
        assert list(d.values) == sorted(d.values)
        assert len(set(d.values)) == len(d.values)


class TestCdf:
    def test_bernoulli_at_zero(self):
        assert BERN_3_10.cdf(0) == F(7, 10)

    def test_below_support(self):
        assert BERN_3_10.cdf(-1) == 0

    def test_full_mass(self):
        assert BERN_3_10.cdf(1) == 1


class TestQuantile:
    def test_at_breakpoint(self):
        # oracle: exact CDF enumeration, F(0) = 7/10 >= 7/10
        assert oracles.quantile_scan(BERN_3_10, F(7, 10)) == 0
        assert BERN_3_10.quantile(F(7, 10)) == 0

    def test_just_past_breakpoint(self):
        assert oracles.quantile_scan(BERN_3_10, F(71, 100)) == 1
        assert BERN_3_10.quantile(F(71, 100)) == 1

    def test_point_mass_any_level(self):
        d = DiscreteDistribution.point_mass(42)
        for alpha in (F(1, 100), F(1, 2), F(99, 100)):
            assert d.quantile(alpha) == 42

    @pytest.mark.parametrize("alpha", [F(0), F(1), F(-1, 2), F(3, 2)])
    def test_rejects_levels_outside_open_interval(self, alpha):
        with pytest.raises(ValueError):
            BERN_3_10.quantile(alpha)

    @given(distributions(), open_unit_fractions)
    def test_matches_scan_oracle(self, d, alpha):
        assert d.quantile(alpha) == oracles.quantile_scan(d, alpha)


class TestMarginal:
    def test_projection(self):
        j = JointDiscreteDistribution((((F(0), F(0)), F(1, 2)), ((F(1), F(1)), F(1, 2))))
        assert j.marginal(0).atoms == ((F(0), F(1, 2)), (F(1), F(1, 2)))

    def test_sums_collisions(self):
        j = JointDiscreteDistribution(
            (((F(0), F(0)), F(1, 4)), ((F(0), F(2)), F(1, 4)), ((F(1), F(0)), F(1, 2)))
        )
        # hand enumeration: column 2 sees 0 with mass 1/4 + 1/2 and 2 with 1/4
        assert j.marginal(1).atoms == ((F(0), F(3, 4)), (F(2), F(1, 4)))

    def test_point_mass_joint(self):
        j = JointDiscreteDistribution((((F(5), F(7)), F(1)),))
        assert j.marginal(1) == DiscreteDistribution.point_mass(7)

    def test_index_out_of_range(self):
        j = JointDiscreteDistribution((((F(5), F(7)), F(1)),))
        with pytest.raises(IndexError):
            j.marginal(2)
        with pytest.raises(IndexError):
            j.marginal(-1)


class TestSumDistribution:
    def test_independent_bernoulli_pair(self):
        # oracle: exact 2x2 product enumeration
        pts = oracles.product_points(BERN_3_10, BERN_3_10)
        j = JointDiscreteDistribution(tuple(pts))
        assert j.sum_distribution().atoms == (
            (F(0), F(49, 100)),
            (F(1), F(42, 100)),
            (F(2), F(9, 100)),
        )

    def test_diagonal_pair(self):
        j = JointDiscreteDistribution((((F(0), F(0)), F(1, 2)), ((F(1), F(1)), F(1, 2))))
        assert j.sum_distribution().atoms == ((F(0), F(1, 2)), (F(2), F(1, 2)))

    def test_point_mass(self):
        j = JointDiscreteDistribution((((F(1), F(2), F(3)), F(1)),))
        assert j.sum_distribution() == DiscreteDistribution.point_mass(6)


class TestMean:
    def test_bernoulli(self):
        assert BERN_3_10.mean() == F(3, 10)

    def test_two_point(self):
        d = DiscreteDistribution(((F(0), F(1, 2)), (F(2), F(1, 2))))
        assert d.mean() == 1

    def test_signed_values(self):
        d = DiscreteDistribution(((F(-1), F(1, 3)), (F(2), F(2, 3))))
        assert d.mean() == 1  # -1/3 + 4/3


class TestJointConstruction:
    def test_merges_duplicate_points(self):
        j = JointDiscreteDistribution(
            (((F(0), F(0)), F(1, 4)), ((F(0), F(0)), F(1, 4)), ((F(1), F(1)), F(1, 2)))
        )
        assert len(j) == 2

    def test_rejects_mixed_dimension(self):
        with pytest.raises(ValueError, match="dimension"):
            JointDiscreteDistribution((((F(0),), F(1, 2)), ((F(1), F(2)), F(1, 2))))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            JointDiscreteDistribution(())

    def test_rejects_non_unit_total(self):
        with pytest.raises(ValueError):
            JointDiscreteDistribution((((F(0), F(0)), F(1, 2)),))

    def test_size_guard(self):
        n = 100_001
        points = tuple(((F(i),), F(1, n)) for i in range(n))
        with pytest.raises(ValueError, match="guard"):
            JointDiscreteDistribution(points)


class TestInvariants:
    @given(distributions(), open_unit_fractions, rational_values)
    def test_galois_connection(self, d, alpha, x):
        assert (d.quantile(alpha) <= x) == (alpha <= d.cdf(x))

    @given(distributions(), open_unit_fractions, open_unit_fractions)
    def test_quantile_monotone(self, d, a1, a2):
        lo, hi = min(a1, a2), max(a1, a2)
        assert d.quantile(lo) <= d.quantile(hi)

    @given(distributions(), rational_values, rational_values)
    def test_cdf_monotone(self, d, x1, x2):
        lo, hi = min(x1, x2), max(x1, x2)
        assert d.cdf(lo) <= d.cdf(hi)

    @given(distributions(), rational_values)
    def test_cdf_stepwise_right_continuous(self, d, x):
        below = [v for v in d.values if v <= x]
        expected = d.cdf(below[-1]) if below else F(0)
        assert d.cdf(x) == expected

    @given(joints())
    def test_mean_of_sum_is_sum_of_marginal_means(self, j):
        total = sum(j.marginal(i).mean() for i in range(j.dimension))
        assert j.sum_distribution().mean() == total

    @given(distributions(), open_unit_fractions)
    def test_recomputation_is_identical(self, d, alpha):
        rebuilt = DiscreteDistribution(d.atoms)
        assert rebuilt == d
        assert rebuilt.quantile(alpha) == d.quantile(alpha)
        assert rebuilt.cumulative == d.cumulative

    @given(st.lists(distributions(max_atoms=3), min_size=1, max_size=3))
    def test_independent_product_marginals(self, ms):
        j = independent_product(*ms)
        for i, m in enumerate(ms):
            assert j.marginal(i) == m


class TestShiftScale:
    @given(distributions(), rational_values)
    def test_shift_moves_mean(self, d, c):
        assert d.shift(c).mean() == d.mean() + c

    @given(distributions(), rational_values)
    def test_scale_scales_mean(self, d, k):
        assert d.scale(k).mean() == d.mean() * k
