import numpy as np
import pytest
from scipy.spatial.distance import cdist

from ordcoreset.config import Config
from ordcoreset.verify import gaussian_blobs


def brute_distances(points, weights, centers):
    """Distances of the expanded multiset, sorted non-increasing."""
    expanded = np.repeat(np.asarray(points, dtype=float), weights, axis=0)
    return np.sort(cdist(expanded, np.asarray(centers, dtype=float)).min(axis=1))[::-1]


def brute_cost_p(data, centers, p):
    return float(brute_distances(data.points, data.weights, centers)[:p].sum())


def brute_cost_v(data, centers, v):
    return float(np.dot(brute_distances(data.points, data.weights, centers), v))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def blobs():
    return gaussian_blobs(800, 2, 2, seed=7)


@pytest.fixture
def brute():
    """Expansion-and-sort reimplementation of the objectives."""

    class Brute:
        distances = staticmethod(brute_distances)
        cost_p = staticmethod(brute_cost_p)
        cost_v = staticmethod(brute_cost_v)

    return Brute


@pytest.fixture
def single_timing(monkeypatch):
    monkeypatch.setattr(Config, "TIMING_REPEATS", 1)
