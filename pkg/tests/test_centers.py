import numpy as np
import pytest

from ordcoreset.centers import (
    METHOD_EXACT_1D,
    METHOD_SAMPLED,
    Exact1DCenterProvider,
    SamplingCenterProvider,
    exact_center_1d,
    sample_best_centers,
    sampling_curve,
)
from ordcoreset.core import Dataset, cost_p


def grid_minimum(x, p, resolution=100_000):
    grid = np.linspace(x.min(), x.max(), resolution + 1)
    values = np.array([np.sort(np.abs(x - y))[::-1][:p].sum() for y in grid])
    return float(values.min()), float(grid[1] - grid[0])


class TestExactCenter1D:
    def test_two_points(self):
        solution = exact_center_1d([0.0, 10.0], 1)
        assert solution.centers[0, 0] == pytest.approx(5.0)
        assert solution.objective == pytest.approx(5.0)
        assert solution.method == METHOD_EXACT_1D

    def test_median_for_p_equal_n(self):
        solution = exact_center_1d([0.0, 1.0, 2.0], 3)
        assert solution.centers[0, 0] == pytest.approx(1.0)
        assert solution.objective == pytest.approx(2.0)

    def test_identical_points(self):
        solution = exact_center_1d([3.0] * 5, 2)
        assert solution.objective == 0.0
        assert solution.centers[0, 0] == 3.0

    def test_not_worse_than_dense_grid(self, rng):
        for _ in range(5):
            x = rng.normal(size=50)
            p = int(rng.integers(1, 51))
            solution = exact_center_1d(x, p)
            best_on_grid, step = grid_minimum(x, p, resolution=20_000)
            assert solution.objective <= best_on_grid + 1e-9
            # cost_p is p-Lipschitz in the center
            assert best_on_grid - solution.objective <= p * step + 1e-9

    def test_objective_is_cost_at_center(self, rng):
        x = rng.exponential(size=300)
        solution = exact_center_1d(x, 40)
        assert solution.objective == pytest.approx(cost_p(Dataset(x), solution.centers, 40), rel=1e-9)

    def test_golden_section_agrees_with_enumeration(self, rng):
        x = rng.normal(size=400)
        exact = exact_center_1d(x, 37)
        searched = exact_center_1d(x, 37, exhaustive_limit=10)
        assert searched.objective == pytest.approx(exact.objective, rel=1e-9)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            exact_center_1d([], 1)
        with pytest.raises(ValueError):
            exact_center_1d([1.0, 2.0], 3)
        with pytest.raises(ValueError, match="1-D"):
            exact_center_1d([[0.0, 1.0]], 1)


class TestSampling:
    def test_deterministic_for_seed(self, blobs):
        a = sample_best_centers(blobs, 2, 80, num_samples=10, seed=3)
        b = sample_best_centers(blobs, 2, 80, num_samples=10, seed=3)
        assert np.array_equal(a.centers, b.centers)
        assert a.objective == b.objective
        assert a.method == METHOD_SAMPLED

    def test_centers_are_data_points(self, blobs):
        solution = sample_best_centers(blobs, 3, 50, num_samples=5, seed=1)
        for center in solution.centers:
            assert np.any(np.all(blobs.points == center, axis=1))

    def test_objective_matches_re_evaluation(self, blobs):
        solution = sample_best_centers(blobs, 2, 80, num_samples=10, seed=4)
        assert solution.objective == pytest.approx(cost_p(blobs, solution.centers, 80), rel=1e-9)

    def test_curve_is_non_increasing_and_nested(self, blobs):
        best, curve = sampling_curve(blobs, 2, 80, 25, seed=9)
        values = [value for _, value in curve]
        assert [s for s, _ in curve] == list(range(1, 26))
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert values[-1] == best.objective
        shorter, _ = sampling_curve(blobs, 2, 80, 10, seed=9)
        assert shorter.objective == values[9]

    def test_default_sample_count(self):
        assert SamplingCenterProvider().num_samples == 30

    def test_k_larger_than_n(self):
        with pytest.raises(ValueError):
            sample_best_centers(Dataset([[0.0], [1.0]]), 3, 1, num_samples=2)


class TestProviders:
    def test_sampling_provider_uses_one_stream_per_p(self, blobs):
        provider = SamplingCenterProvider(seed=5, num_samples=8)
        assert np.array_equal(provider(blobs, 2, 40).centers, provider(blobs, 2, 40).centers)

    def test_exact_provider_requires_line_and_single_center(self, blobs):
        with pytest.raises(ValueError):
            Exact1DCenterProvider()(blobs, 1, 10)
        line = Dataset(np.arange(10.0))
        with pytest.raises(ValueError):
            Exact1DCenterProvider()(line, 2, 3)
        assert Exact1DCenterProvider()(line, 1, 10).centers.shape == (1, 1)
