import math

import numpy as np
import pytest

from ordcoreset.core import Dataset, cost_p, point_distances
from ordcoreset.projection import (
    Line,
    LineBudgetError,
    build_lines,
    direction_net,
    displacement,
    displacement_bound,
    project,
    project_onto_lines,
)


def random_unit_vectors(rng, count, d):
    u = rng.normal(size=(count, d))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def assert_projected_cost_close(rng, instances, center_sets):
    """|cost_p(X', C') - cost_p(X, C')| <= 2 eps cost_p(X, C) for random C'."""
    for _ in range(instances):
        eps = float(rng.uniform(0.05, 0.5))
        data = Dataset(rng.normal(size=(400, 2)) + rng.integers(0, 5, size=(400, 1)))
        centers = rng.normal(size=(2, 2))
        proj = project(data, centers, eps)
        slack = 1e-12 * (1 + np.abs(data.points).max())
        assert np.all(displacement(data, proj) <= displacement_bound(data, proj, centers) + slack)
        p = int(rng.integers(1, 401))
        reference = cost_p(data, centers, p)
        for _ in range(center_sets):
            other = rng.uniform(-3, 6, size=(2, 2))
            change = abs(cost_p(proj.projected, other, p) - cost_p(data, other, p))
            assert change <= 2 * eps * reference + 1e-9


def covering_radius(net, vectors, chunk=1000):
    """Largest distance from a vector to the net, counting both signs."""
    worst = 0.0
    for lo in range(0, len(vectors), chunk):
        block = vectors[lo:lo + chunk]
        gaps = np.minimum(
            np.linalg.norm(block[:, None, :] - net[None, :, :], axis=2),
            np.linalg.norm(block[:, None, :] + net[None, :, :], axis=2),
        )
        worst = max(worst, float(gaps.min(axis=1).max()))
    return worst


class TestDirectionNet:
    def test_line(self):
        assert direction_net(1, 0.3).tolist() == [[1.0]]

    def test_plane_count(self):
        net = direction_net(2, 0.5)
        assert len(net) == math.ceil(math.pi / (2 * math.asin(0.25))) == 7

    @pytest.mark.parametrize("d, eps", [(2, 0.5), (2, 0.1), (3, 0.5), (3, 0.25), (3, 0.1), (4, 0.6), (5, 0.7)])
    def test_covers_sphere_up_to_sign(self, rng, d, eps):
        net = direction_net(d, eps)
        assert np.allclose(np.linalg.norm(net, axis=1), 1.0, atol=1e-12)
        assert covering_radius(net, random_unit_vectors(rng, 5000, d)) <= eps + 1e-12

    def test_no_antipodal_duplicates(self):
        net = direction_net(3, 0.3)
        for i, u in enumerate(net):
            others = np.delete(net, i, axis=0)
            assert np.min(np.linalg.norm(others - u, axis=1)) > 1e-9
            assert np.min(np.linalg.norm(others + u, axis=1)) > 1e-9

    def test_net_is_not_oversized(self):
        # about 410 directions; the sphere area alone needs well over 100
        assert 100 < len(direction_net(3, 0.1)) <= 500
        assert len(direction_net(5, 0.7)) < 5000

    def test_finer_eps_gives_more_directions(self):
        assert len(direction_net(3, 0.2)) > len(direction_net(3, 0.5))

    def test_invalid(self):
        with pytest.raises(ValueError):
            direction_net(0, 0.1)
        with pytest.raises(ValueError):
            direction_net(2, 0.0)


class TestProject:
    def test_point_on_line_stays(self):
        lines = build_lines([[0.0, 0.0]], 0.5)
        on_line = lines[3].point_at(2.5)
        proj = project_onto_lines(Dataset([on_line, [0.0, 0.0]]), lines)
        assert np.allclose(proj.points, [on_line, [0.0, 0.0]], atol=1e-12)

    def test_displacement_bound_holds_everywhere(self, rng):
        for d, eps in [(1, 0.2), (2, 0.3), (2, 0.1), (3, 0.4)]:
            data = Dataset(rng.normal(size=(500, d)))
            centers = rng.normal(size=(3, d))
            proj = project(data, centers, eps)
            slack = 1e-12 * (1 + np.abs(data.points).max())
            assert np.all(displacement(data, proj) <= displacement_bound(data, proj, centers) + slack)

    def test_layout(self, rng):
        data = Dataset(rng.normal(size=(300, 2)), rng.integers(1, 4, size=300))
        proj = project(data, rng.normal(size=(2, 2)), 0.3)
        assert len(proj.lines) <= 2 * len(direction_net(2, 0.3))
        seen = []
        for line in proj.nonempty_lines():
            coords, weights, idx = proj.line_view(line)
            assert np.all(np.diff(coords) >= 0)
            seen.extend(idx.tolist())
        assert sorted(seen) == list(range(300))
        assert proj.projected.n == data.n

    def test_idempotent(self, rng):
        data = Dataset(rng.normal(size=(200, 2)))
        proj = project(data, rng.normal(size=(2, 2)), 0.3)
        again = project_onto_lines(proj.projected, proj.lines)
        assert np.allclose(again.points, proj.points, atol=1e-9)

    def test_nearest_line_ties_to_lowest_index(self):
        lines = (
            Line(np.zeros(2), np.array([1.0, 0.0]), 0),
            Line(np.zeros(2), np.array([0.0, 1.0]), 1),
        )
        proj = project_onto_lines(Dataset([[1.0, 1.0]]), lines)
        assert proj.line_of_point.tolist() == [0]

    def test_cost_moves_by_at_most_twice_eps(self, rng):
        assert_projected_cost_close(rng, instances=10, center_sets=20)

    def test_line_budget(self, rng):
        with pytest.raises(LineBudgetError, match="cap"):
            project(Dataset(rng.normal(size=(10, 3))), rng.normal(size=(5, 3)), 0.1, max_lines=50)

    def test_duplicate_centers_share_lines(self):
        assert len(build_lines([[0.0, 0.0], [0.0, 0.0]], 0.5)) == 7

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            project(Dataset([[0.0, 0.0]]), [[0.0, 0.0, 0.0]], 0.2)


def test_point_distances_unchanged_for_points_on_their_line(rng):
    data = Dataset(rng.normal(size=(50, 2)))
    proj = project(data, [[0.0, 0.0]], 0.2)
    assert np.allclose(
        point_distances(proj.projected, [[0.0, 0.0]]), np.abs(proj.coord_of_point), atol=1e-12
    )


@pytest.mark.slow
def test_projected_cost_bound_at_full_scale(rng):
    assert_projected_cost_close(rng, instances=50, center_sets=100)
