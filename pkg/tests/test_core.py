import math

import numpy as np
import pytest

from ordcoreset.core import (
    Dataset,
    WeightedCoreset,
    WeightVector,
    cost_p,
    cost_p_all,
    cost_v,
    interval_stats,
    owa_decompose,
    p_grid,
    top_p,
)


def random_weighted(rng, m=20, d=2, max_weight=3):
    return Dataset(rng.normal(size=(m, d)), rng.integers(1, max_weight + 1, size=m))


def sandwich_trial(rng):
    """cost_p <= cost_p' <= (1 + eps) cost_p for p <= p' <= (1 + eps) p."""
    data = random_weighted(rng)
    centers = rng.normal(size=(2, 2))
    eps = float(rng.uniform(0.05, 1.0))
    p1 = int(rng.integers(1, data.n + 1))
    p2 = int(rng.integers(p1, min(data.n, math.floor((1 + eps) * p1)) + 1))
    c1, c2 = cost_p(data, centers, p1), cost_p(data, centers, p2)
    assert c1 <= c2 + 1e-12
    assert c2 <= (1 + eps) * c1 * (1 + 1e-12)


def owa_identity_trial(rng):
    data = random_weighted(rng, m=10)
    centers = rng.normal(size=(2, 2))
    v = WeightVector.random(data.n, rng)
    pieces = sum(c * cost_p(data, centers, p) for p, c in owa_decompose(v))
    assert pieces == pytest.approx(cost_v(data, centers, v), rel=1e-9)


def deviation_trial(rng):
    y = rng.normal(size=rng.integers(1, 12))
    z = float(rng.normal(scale=2.0))
    stats = interval_stats(y)
    lhs = np.abs(np.abs(z - y) - abs(z - stats.mean)).sum()
    assert lhs <= stats.delta + 1e-12 * (1 + np.abs(y).sum())


def outside_mean_trial(rng):
    y = rng.normal(size=rng.integers(1, 12))
    stats = interval_stats(y)
    z = stats.hi + float(rng.exponential()) if rng.random() < 0.5 else stats.lo - float(rng.exponential())
    assert np.abs(y - z).sum() == pytest.approx(y.size * abs(stats.mean - z), rel=1e-9)


def cumulative_error_trial(rng):
    y = rng.normal(size=rng.integers(1, 12))
    w = rng.uniform(0.1, 3.0, size=y.size)
    stats = interval_stats(y, w)
    side = rng.random()
    if side < 0.25:
        z = stats.lo
    elif side < 0.5:
        z = stats.hi
    elif side < 0.75:
        z = stats.lo - float(rng.exponential())
    else:
        z = stats.hi + float(rng.exponential())
    assert stats.delta <= 2 * np.dot(w, np.abs(y - z)) + 1e-12


def perturbation_trial(rng):
    n = int(rng.integers(1, 15))
    x = rng.random(n)
    y = np.clip(x + rng.normal(scale=0.1, size=n), 0.0, None)
    p = int(rng.integers(1, n + 1))
    in_s = rng.random(n) < 0.5
    diff = np.abs(x - y)
    bound = p * (diff[in_s].max() if in_s.any() else 0.0) + diff[~in_s].sum()
    assert abs(top_p(x, p) - top_p(y, p)) <= bound + 1e-12


class TestTopP:
    def test_small_example(self):
        assert top_p([3, 1, 2], 2) == 5

    def test_full_sum(self, rng):
        values = rng.random(17)
        assert top_p(values, 17) == pytest.approx(values.sum(), rel=1e-12)

    def test_matches_sort_oracle(self, rng):
        for _ in range(1000):
            values = rng.random(rng.integers(1, 30))
            p = int(rng.integers(1, values.size + 1))
            assert top_p(values, p) == float(np.sort(values)[::-1][:p].sum())

    @pytest.mark.parametrize("p", [0, 4, 1.5])
    def test_p_out_of_range(self, p):
        with pytest.raises(ValueError):
            top_p([1.0, 2.0, 3.0], p)


class TestPointSets:
    def test_one_dimensional_input_is_a_column(self):
        data = Dataset([0.0, 3.0, 4.0])
        assert data.points.shape == (3, 1)
        assert data.n == 3

    def test_weights_are_multiplicities(self):
        coreset = WeightedCoreset([[0.0], [1.0]], [2, 5])
        assert coreset.size == 2
        assert coreset.n == 7
        assert coreset.expanded().ravel().tolist() == [0.0, 0.0] + [1.0] * 5

    @pytest.mark.parametrize("weights", [[1, 0], [1, 1.5], [-1, 2]])
    def test_invalid_weights(self, weights):
        with pytest.raises(ValueError, match="positive integers"):
            WeightedCoreset([[0.0], [1.0]], weights)

    def test_rejects_empty_and_non_finite(self):
        with pytest.raises(ValueError):
            Dataset(np.empty((0, 2)))
        with pytest.raises(ValueError, match="non-finite"):
            Dataset([[0.0, np.inf]])


class TestCostP:
    def test_farthest_point(self):
        assert cost_p(Dataset([0.0, 10.0]), [0.0], 1) == 10.0

    def test_p_equal_n_is_sum_of_distances(self, rng):
        data = Dataset(rng.normal(size=(30, 3)))
        centers = rng.normal(size=(2, 3))
        dists = np.min(np.linalg.norm(data.points[:, None] - centers[None], axis=2), axis=1)
        assert cost_p(data, centers, 30) == pytest.approx(dists.sum(), rel=1e-9)

    def test_matches_expansion_oracle(self, rng, brute):
        for _ in range(200):
            data = random_weighted(rng)
            centers = rng.normal(size=(int(rng.integers(1, 4)), 2))
            p = int(rng.integers(1, data.n + 1))
            assert cost_p(data, centers, p) == pytest.approx(brute.cost_p(data, centers, p), rel=1e-9)

    def test_all_p_agrees_with_single_p(self, rng):
        data = random_weighted(rng)
        centers = rng.normal(size=(2, 2))
        everything = cost_p_all(data, centers)
        assert everything.size == data.n
        for p in range(1, data.n + 1):
            assert everything[p - 1] == pytest.approx(cost_p(data, centers, p), rel=1e-9)

    def test_monotone_with_non_increasing_increments(self, rng):
        values = cost_p_all(random_weighted(rng), rng.normal(size=(1, 2)))
        increments = np.diff(np.concatenate(([0.0], values)))
        assert np.all(increments >= 0)
        assert np.all(np.diff(increments) <= 1e-12)

    def test_sandwich_on_nearby_p(self, rng):
        for _ in range(300):
            sandwich_trial(rng)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            cost_p(Dataset([[0.0, 0.0]]), [[0.0, 0.0, 0.0]], 1)


class TestCostV:
    def test_first_entry_only_is_k_center(self, rng):
        data = Dataset(rng.normal(size=(12, 2)))
        v = np.zeros(12)
        v[0] = 1.0
        centers = rng.normal(size=(2, 2))
        assert cost_v(data, centers, v) == pytest.approx(cost_p(data, centers, 1), rel=1e-12)

    def test_ones_is_p_equal_n(self, rng):
        data = random_weighted(rng)
        centers = rng.normal(size=(2, 2))
        assert cost_v(data, centers, WeightVector.ones(data.n)) == pytest.approx(
            cost_p(data, centers, data.n), rel=1e-9
        )

    def test_matches_expansion_oracle(self, rng, brute):
        data = random_weighted(rng)
        centers = rng.normal(size=(3, 2))
        v = WeightVector.random(data.n, rng)
        assert cost_v(data, centers, v) == pytest.approx(brute.cost_v(data, centers, v.entries), rel=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            cost_v(Dataset([0.0, 1.0]), [0.0], [1.0, 1.0, 1.0])


class TestWeightVector:
    def test_increasing_entry_is_named(self):
        with pytest.raises(ValueError, match=r"v\[2\]"):
            WeightVector([3.0, 2.0, 2.5])

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            WeightVector([1.0, -0.5])

    def test_power_law(self):
        v = WeightVector.power_law(4, 1.0)
        assert v.entries.tolist() == [1.0, 0.5, 1 / 3, 0.25]

    def test_top(self):
        assert WeightVector.top(5, 2).entries.tolist() == [1.0, 1.0, 0.0, 0.0, 0.0]


class TestOwaDecompose:
    @pytest.mark.parametrize("v, expected", [
        ([1, 1, 1], [(3, 1.0)]),
        ([1, 0, 0], [(1, 1.0)]),
        ([3, 2, 1], [(1, 1.0), (2, 1.0), (3, 1.0)]),
    ])
    def test_examples(self, v, expected):
        assert owa_decompose(v) == expected

    def test_identity_on_random_instances(self, rng):
        for _ in range(300):
            owa_identity_trial(rng)


class TestIntervalStats:
    def test_unit_weights(self):
        stats = interval_stats([1.0, 3.0])
        assert (stats.mean, stats.delta, stats.lo, stats.hi) == (2.0, 2.0, 1.0, 3.0)

    def test_singleton(self):
        assert interval_stats([4.2]).delta == 0.0

    def test_weighted(self):
        stats = interval_stats([0.0, 3.0], [1.0, 2.0])
        assert stats.mean == pytest.approx(2.0)
        assert stats.delta == pytest.approx(4.0)

    def test_empty(self):
        with pytest.raises(ValueError):
            interval_stats([])

    def test_distance_to_mean_bounds_deviation(self, rng):
        for _ in range(2000):
            deviation_trial(rng)

    def test_outside_point_sees_the_mean(self, rng):
        for _ in range(2000):
            outside_mean_trial(rng)

    def test_delta_at_most_twice_distance_to_outside_point(self, rng):
        for _ in range(2000):
            cumulative_error_trial(rng)


def test_top_p_perturbation_bound(rng):
    for _ in range(2000):
        perturbation_trial(rng)


class TestPGrid:
    def test_doubling(self):
        assert p_grid(10, 1.0) == [1, 2, 4, 8, 10]

    def test_single_point(self):
        assert p_grid(1, 0.3) == [1]

    def test_covers_every_p_within_ratio(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 3000))
            eps = float(rng.uniform(0.01, 1.0))
            grid = p_grid(n, eps)
            assert grid[0] == 1 and grid[-1] == n
            assert all(b > a for a, b in zip(grid, grid[1:]))
            assert all(b <= math.ceil((1 + eps) * a) for a, b in zip(grid, grid[1:]))
            assert len(grid) <= math.ceil(math.log(n) / math.log(1 + eps)) + 2
            arr = np.array(grid)
            ps = np.arange(1, n + 1)
            nearest_above = arr[np.searchsorted(arr, ps)]
            assert np.all(nearest_above >= ps)
            assert np.all(nearest_above <= (1 + eps) * ps + 1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("trial", [
    sandwich_trial,
    owa_identity_trial,
    deviation_trial,
    outside_mean_trial,
    cumulative_error_trial,
    perturbation_trial,
])
def test_properties_hold_on_ten_thousand_trials(rng, trial):
    for _ in range(10_000):
        trial(rng)
