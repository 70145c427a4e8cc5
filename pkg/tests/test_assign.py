import math

import numpy as np
import pytest

from optcoding.assign import (
    Assignment,
    CostFunction,
    MagnitudeMultiset,
    RankedDistribution,
    brute_force_minimum,
    is_optimal,
    kendall_tau,
    mean_cost,
    optimal_assignment,
    pair_counts,
    pearson_r,
    unconstrained_optimum,
)

IDENTITY = CostFunction.identity()


def dist(*p):
    return RankedDistribution(np.array(p))


def asg(*l):
    return Assignment(np.array(l, dtype=float))


def pool(*v, allow_zero=False):
    return MagnitudeMultiset(np.array(v, dtype=float), allow_zero=allow_zero)


def brute_pair_counts(p, l):
    """O(V^2) reference for pair_counts."""
    n_c = n_d = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            s = np.sign(p[i] - p[j]) * np.sign(l[i] - l[j])
            if s > 0:
                n_c += 1
            elif s < 0:
                n_d += 1
    return n_c, n_d


class TestRankedDistribution:
    def test_rescales_tiny_sum_error(self):
        d = RankedDistribution(np.array([0.5, 0.3, 0.2 + 5e-10]))
        assert abs(d.probs.sum() - 1.0) < 1e-12

    def test_rejects_large_sum_error(self):
        with pytest.raises(ValueError):
            RankedDistribution(np.array([0.5, 0.3, 0.3]))

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            RankedDistribution(np.array([0.3, 0.5, 0.2]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            RankedDistribution(np.array([1.1, -0.1]))

    def test_from_weights_sorts_and_normalizes(self):
        d = RankedDistribution.from_weights([1.0, 3.0, 2.0])
        assert np.allclose(d.probs, [0.5, 1 / 3, 1 / 6])

    def test_immutability(self):
        d = dist(0.5, 0.5)
        with pytest.raises(ValueError):
            d.probs[0] = 0.9


class TestCostFunction:
    def test_kinds_evaluate(self):
        assert CostFunction.identity()(3.0) == 3.0
        assert CostFunction.power(2.0)(3.0) == 9.0
        assert CostFunction.exponential(2.0)(3.0) == 8.0

    @pytest.mark.parametrize(
        "g",
        [CostFunction.identity(), CostFunction.power(2.0), CostFunction.power(0.5),
         CostFunction.exponential(math.e)],
    )
    def test_strictly_increasing_on_positives(self, g):
        xs = np.sort(np.random.default_rng(1).uniform(0.01, 50.0, 64))
        ys = g(xs)
        assert np.all(np.diff(ys) > 0)

    def test_invalid_params_rejected(self):
        with pytest.raises(ValueError):
            CostFunction.power(0.0)
        with pytest.raises(ValueError):
            CostFunction.exponential(1.0)
        with pytest.raises(ValueError):
            CostFunction("nope")


class TestMeanCost:
    def test_uniform_equal_lengths(self):
        assert mean_cost(dist(0.5, 0.5), asg(1, 1), IDENTITY) == 1.0

    def test_direct_evaluation(self):
        assert mean_cost(dist(0.5, 0.3, 0.2), asg(1, 1, 2), IDENTITY) == pytest.approx(1.2, abs=1e-15)

    def test_power_cost(self):
        assert mean_cost(dist(0.5, 0.5), asg(1, 2), CostFunction.power(2.0)) == 2.5

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mean_cost(dist(0.5, 0.5), asg(1, 1, 1), IDENTITY)


class TestOptimalAssignment:
    def test_binary_string_lengths(self):
        # lengths of the shortest binary strings: 1,1,2,2,2,2,3,...
        ms = pool(1, 1, 2, 2, 2, 2, 3, 3, 3, 3)
        out = optimal_assignment(dist(*([1 / 6] * 6)), ms)
        assert out.magnitudes.tolist() == [1, 1, 2, 2, 2, 2]

    def test_single_smallest(self):
        out = optimal_assignment(dist(1.0), pool(5, 3, 9))
        assert out.magnitudes.tolist() == [3.0]

    def test_matches_brute_force_on_random_instance(self):
        rng = np.random.default_rng(42)
        d = RankedDistribution.from_weights(rng.random(5))
        ms = MagnitudeMultiset(rng.uniform(0.0, 10.0, 8) + 1e-6)
        for g in (IDENTITY, CostFunction.power(2.0), CostFunction.exponential(math.e)):
            assert mean_cost(d, optimal_assignment(d, ms), g) == pytest.approx(
                brute_force_minimum(d, ms, g), abs=1e-12
            )

    def test_pool_too_small(self):
        with pytest.raises(ValueError):
            optimal_assignment(dist(0.5, 0.5), pool(1.0))


class TestUnconstrainedOptimum:
    def test_zero_floor(self):
        out = unconstrained_optimum(dist(0.5, 0.3, 0.2), 0.0)
        assert out.magnitudes.tolist() == [0.0, 0.0, 0.0]
        assert mean_cost(dist(0.5, 0.3, 0.2), out, IDENTITY) == 0.0

    def test_unit_floor_matches_repeated_codes(self):
        out = unconstrained_optimum(dist(*([1 / 6] * 6)), 1.0)
        assert out.magnitudes.tolist() == [1.0] * 6

    def test_real_floor(self):
        assert unconstrained_optimum(dist(1.0), 2.5).magnitudes.tolist() == [2.5]

    def test_negative_floor_rejected(self):
        with pytest.raises(ValueError):
            unconstrained_optimum(dist(1.0), -1.0)


class TestBruteForce:
    def test_two_orderings_by_hand(self):
        assert brute_force_minimum(dist(0.7, 0.3), pool(1, 2), IDENTITY) == pytest.approx(
            1.3, abs=1e-15
        )

    def test_symmetric_ties(self):
        d = dist(1 / 3, 1 / 3, 1 / 3)
        assert brute_force_minimum(d, pool(1, 2, 3), IDENTITY) == pytest.approx(2.0, abs=1e-12)

    def test_guard(self):
        with pytest.raises(ValueError):
            brute_force_minimum(dist(*([0.1] * 10)), pool(*range(1, 12)), IDENTITY)


class TestPairCounts:
    def test_perfect_anti_order(self):
        assert pair_counts(dist(0.5, 0.3, 0.2), asg(1, 2, 3)) == (0, 3)

    def test_all_length_ties(self):
        assert pair_counts(dist(0.5, 0.3, 0.2), asg(2, 2, 2)) == (0, 0)

    def test_hand_enumeration(self):
        # pairs: (1,2) length tie, (1,3) discordant, (2,3) discordant
        assert pair_counts(dist(0.5, 0.3, 0.2), asg(1, 1, 2)) == (0, 2)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_quadratic_reference(self, seed):
        rng = np.random.default_rng(seed)
        v = int(rng.integers(2, 40))
        p = np.sort(rng.choice(np.arange(1, 8), v).astype(float))[::-1]
        p = p / p.sum()
        l = rng.choice(np.arange(1.0, 6.0), v)
        d = RankedDistribution(p)
        assert pair_counts(d, Assignment(l)) == brute_pair_counts(d.probs, l)


class TestKendallTau:
    def test_all_discordant(self):
        assert kendall_tau(dist(0.5, 0.3, 0.2), asg(1, 2, 3)) == -1.0

    def test_all_tied(self):
        assert kendall_tau(dist(0.4, 0.35, 0.25), asg(2, 2, 2)) == 0.0

    def test_partial(self):
        assert kendall_tau(dist(0.5, 0.3, 0.2), asg(1, 1, 2)) == pytest.approx(-2 / 3)

    def test_needs_two_ranks(self):
        with pytest.raises(ValueError):
            kendall_tau(dist(1.0), asg(1))


class TestPearson:
    def test_positive_affine(self):
        p = np.array([0.5, 0.3, 0.2])
        assert pearson_r(p, 2 * p + 3) == pytest.approx(1.0, abs=1e-12)

    def test_negative_affine(self):
        p = np.array([0.5, 0.3, 0.2])
        assert pearson_r(p, -p) == pytest.approx(-1.0, abs=1e-12)

    def test_hand_moments(self):
        # E[pl] = 0.4, means 1/3 and 4/3, stds sqrt(14)/30 and sqrt(2)/3
        # => r = -(2/45) / (sqrt(28)/90) = -2/sqrt(7)
        assert pearson_r([0.5, 0.3, 0.2], [1.0, 1.0, 2.0]) == pytest.approx(
            -2 / math.sqrt(7), abs=1e-12
        )

    def test_zero_deviation_rejected(self):
        with pytest.raises(ValueError):
            pearson_r([0.5, 0.3, 0.2], [1.0, 1.0, 1.0])


class TestIsOptimal:
    def test_shortest_strings_assignment(self):
        ms = pool(1, 1, 2, 2, 2, 2, 3, 3, 3, 3)
        d = dist(0.3, 0.25, 0.2, 0.1, 0.1, 0.05)
        assert is_optimal(d, asg(1, 1, 2, 2, 2, 2), ms)

    def test_self_delimiting_lengths_are_suboptimal(self):
        # lengths 1,3,3,5,5,5 drawn from the binary-string length pool
        ms = pool(*([1, 1] + [2] * 4 + [3] * 8 + [4] * 16 + [5] * 32))
        d = dist(0.3, 0.25, 0.2, 0.1, 0.1, 0.05)
        assert not is_optimal(d, asg(1, 3, 3, 5, 5, 5), ms)

    def test_reversed_order_is_suboptimal(self):
        ms = pool(1, 2, 3)
        assert not is_optimal(dist(0.5, 0.3, 0.2), asg(3, 2, 1), ms)

    def test_foreign_magnitudes_rejected(self):
        with pytest.raises(ValueError):
            is_optimal(dist(0.5, 0.5), asg(1, 7), pool(1, 2, 3))


class TestOptimalityInvariants:
    """Consequences of the sorted-smallest optimum, swept over random instances."""

    @pytest.mark.parametrize("seed", range(20))
    def test_oracle_equivalence_and_no_concordant_pairs(self, seed):
        rng = np.random.default_rng(seed)
        v = int(rng.integers(2, 8))
        ms = MagnitudeMultiset(rng.uniform(0.1, 10.0, int(rng.integers(v, 10))))
        d = RankedDistribution.from_weights(rng.random(v) + 1e-3)
        opt = optimal_assignment(d, ms)
        for g in (IDENTITY, CostFunction.power(2.0), CostFunction.exponential(math.e)):
            assert mean_cost(d, opt, g) == pytest.approx(
                brute_force_minimum(d, ms, g), abs=1e-12
            )
        n_c, n_d = pair_counts(d, opt)
        assert n_c == 0
        tau = kendall_tau(d, opt)
        assert tau <= 0
        assert (tau == 0) == (n_d == 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_exchange_property(self, seed):
        """Swapping a concordant pair lowers the cost by exactly
        (p_i - p_j) * (g(l_j) - g(l_i))."""
        rng = np.random.default_rng(100 + seed)
        v = 6
        p = np.sort(rng.random(v))[::-1]
        d = RankedDistribution(p / p.sum())
        l = rng.uniform(0.5, 9.0, v)
        g = CostFunction.power(2.0)
        base = mean_cost(d, Assignment(l), g)
        for i in range(v):
            for j in range(i + 1, v):
                if np.sign(d.probs[i] - d.probs[j]) * np.sign(l[i] - l[j]) == 1:
                    swapped = l.copy()
                    swapped[i], swapped[j] = swapped[j], swapped[i]
                    delta = (d.probs[i] - d.probs[j]) * (g(l[j]) - g(l[i]))
                    assert delta < 0
                    assert mean_cost(d, Assignment(swapped), g) == pytest.approx(
                        base + delta, rel=1e-12
                    )

    def test_tie_invariance_to_the_last_bit(self):
        # swapping magnitudes across tied probabilities changes cost by
        # (p_i - p_j)(g(l_j) - g(l_i)) = 0, exactly
        d = dist(0.4, 0.2, 0.2, 0.2)
        g = CostFunction.exponential(math.e)
        base = mean_cost(d, asg(1.0, 2.0, 3.0, 4.0), g)
        assert mean_cost(d, asg(1.0, 4.0, 3.0, 2.0), g) == base
        assert mean_cost(d, asg(1.0, 3.0, 2.0, 4.0), g) == base

    @pytest.mark.parametrize("seed", range(10))
    def test_g_invariance_of_argmin(self, seed):
        """The sorted-smallest assignment wins under every cost kind."""
        rng = np.random.default_rng(200 + seed)
        v = int(rng.integers(2, 6))
        ms = MagnitudeMultiset(rng.uniform(0.1, 10.0, int(rng.integers(v, 8))))
        d = RankedDistribution.from_weights(rng.random(v) + 1e-2)
        opt = optimal_assignment(d, ms)
        for g in (IDENTITY, CostFunction.power(2.0), CostFunction.exponential(math.e)):
            assert mean_cost(d, opt, g) <= brute_force_minimum(d, ms, g) + 1e-12

    @pytest.mark.parametrize("seed", range(10))
    def test_shrinking_a_pool_element_never_hurts(self, seed):
        rng = np.random.default_rng(300 + seed)
        v = int(rng.integers(2, 6))
        vals = rng.uniform(0.5, 10.0, int(rng.integers(v, 9)))
        d = RankedDistribution.from_weights(rng.random(v) + 1e-2)
        before = mean_cost(d, optimal_assignment(d, MagnitudeMultiset(vals)), IDENTITY)
        k = int(rng.integers(0, vals.size))
        shrunk = vals.copy()
        shrunk[k] *= rng.uniform(0.05, 0.95)
        after = mean_cost(d, optimal_assignment(d, MagnitudeMultiset(shrunk)), IDENTITY)
        assert after <= before + 1e-15


class TestZeroMagnitudes:
    def test_zero_needs_flag(self):
        with pytest.raises(ValueError):
            pool(0.0, 1.0)
        assert pool(0.0, 1.0, allow_zero=True).values.tolist() == [0.0, 1.0]

    def test_negative_always_rejected(self):
        with pytest.raises(ValueError):
            pool(-1.0, 1.0, allow_zero=True)
