"""Domain types and the ordered clustering objectives.

Points are rows of float64 arrays. A weighted point set stores each distinct
point once with its integer multiplicity; the objectives below select the p
largest distances over the expanded multiset without materializing it.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

logger = logging.getLogger(__name__)


def as_points(values, name="points"):
    """Coerce input to an (m, d) float64 array. A flat sequence is read as m 1-D points."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have shape (m, d) with d >= 1, got {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} must contain at least one point")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite coordinates")
    return arr


def as_centers(centers, dimension):
    """Coerce a center set to a (k, dimension) array.

    A flat sequence is a list of 1-D centers when dimension is 1, and a single
    center otherwise.
    """
    arr = np.asarray(centers, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        if dimension == 1:
            arr = arr.reshape(-1, 1)
        else:
            arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("centers must be a non-empty list of points")
    if arr.shape[1] != dimension:
        raise ValueError(
            f"center dimension {arr.shape[1]} does not match data dimension {dimension}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("centers contain non-finite coordinates")
    return arr


@dataclass(frozen=True, eq=False)
class WeightedPoints:
    points: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        points = as_points(self.points)
        if self.weights is None:
            weights = np.ones(points.shape[0], dtype=np.int64)
        else:
            raw = np.asarray(self.weights, dtype=np.float64).ravel()
            if raw.shape != (points.shape[0],):
                raise ValueError(
                    f"got {raw.shape[0]} weights for {points.shape[0]} points"
                )
            if not np.all(raw == np.round(raw)) or np.any(raw <= 0):
                raise ValueError("weights must be positive integers")
            weights = raw.astype(np.int64)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def dimension(self):
        return int(self.points.shape[1])

    @property
    def size(self):
        """Number of stored (distinct) points."""
        return int(self.points.shape[0])

    @property
    def n(self):
        """Total multiplicity."""
        return int(self.weights.sum())

    def expanded(self):
        """The multiset with every point repeated by its multiplicity."""
        return np.repeat(self.points, self.weights, axis=0)

    def __len__(self):
        return self.size


class Dataset(WeightedPoints):
    """Input point set; multiplicities default to 1."""


class WeightedCoreset(WeightedPoints):
    """Summary point set; weights sum to the n of the data it summarizes."""

    @classmethod
    def merged(cls, points, weights):
        """Coreset with coinciding points folded together, in order of first appearance."""
        points = as_points(points)
        weights = np.asarray(weights, dtype=np.int64)
        _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
        totals = np.bincount(np.asarray(inverse).ravel(), weights=weights).astype(np.int64)
        order = np.argsort(first)
        return cls(points[first[order]], totals[order])


@dataclass(frozen=True, eq=False)
class WeightVector:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ValueError("weight vector must be non-empty")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("weight vector entries must be finite and non-negative")
        rising = np.flatnonzero(np.diff(arr) > 0)
        if rising.size:
            i = int(rising[0])
            raise ValueError(
                f"weight vector must be non-increasing: v[{i + 1}]={arr[i + 1]!r} > v[{i}]={arr[i]!r}"
            )
        object.__setattr__(self, "entries", arr)

    def __len__(self):
        return int(self.entries.size)

    @classmethod
    def ones(cls, n):
        return cls(np.ones(n))

    @classmethod
    def top(cls, n, p):
        """The 0/1 vector whose objective is cost_p."""
        _check_p(p, n)
        v = np.zeros(n)
        v[:p] = 1.0
        return cls(v)

    @classmethod
    def power_law(cls, n, alpha):
        """w_i = 1 / i^alpha."""
        if alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {alpha}")
        return cls(1.0 / np.arange(1, n + 1, dtype=np.float64) ** alpha)

    @classmethod
    def random(cls, n, rng):
        return cls(np.sort(rng.random(n))[::-1])


def as_weight_vector(v):
    return v if isinstance(v, WeightVector) else WeightVector(v)


@dataclass(frozen=True)
class IntervalStats:
    mean: float
    delta: float
    lo: float
    hi: float

    @property
    def length(self):
        return self.hi - self.lo


def _check_p(p, n):
    if isinstance(p, bool) or int(p) != p:
        raise ValueError(f"p must be an integer, got {p!r}")
    if not 1 <= p <= n:
        raise ValueError(f"p must lie in [1, {n}], got {p}")


def top_p(values, p):
    """Sum of the p largest entries of values."""
    arr = np.asarray(values, dtype=np.float64).ravel()
    _check_p(p, arr.size)
    return float(np.sort(arr)[::-1][:p].sum())


def point_distances(data, centers):
    """d(x, C) for every stored point of data."""
    centers = as_centers(centers, data.dimension)
    return cdist(data.points, centers).min(axis=1)


def sorted_distances(data, centers):
    """Distances and weights ordered by non-increasing distance, ties by lowest index."""
    dists = point_distances(data, centers)
    order = np.argsort(-dists, kind="stable")
    return dists[order], data.weights[order]


def weighted_top_p(dists_desc, weights_desc, p):
    cum = np.cumsum(weights_desc)
    j = int(np.searchsorted(cum, p))
    before = int(cum[j - 1]) if j > 0 else 0
    full = float(np.dot(dists_desc[:j], weights_desc[:j]))
    return full + float(dists_desc[j]) * (p - before)


def cost_p(data, centers, p):
    """p-Centrum objective: sum of the p largest distances to the nearest center."""
    _check_p(p, data.n)
    dists, weights = sorted_distances(data, centers)
    return weighted_top_p(dists, weights, p)


def cost_p_all(data, centers):
    """cost_p for every p = 1..n, as an array indexed by p - 1."""
    dists, weights = sorted_distances(data, centers)
    return np.cumsum(np.repeat(dists, weights))


def cost_v(data, centers, v):
    """Ordered weighted objective: sum of v_i times the i-th largest distance."""
    v = as_weight_vector(v)
    if len(v) != data.n:
        raise ValueError(f"weight vector has length {len(v)}, data has n={data.n}")
    dists, weights = sorted_distances(data, centers)
    prefix = np.concatenate(([0.0], np.cumsum(v.entries)))
    ends = np.cumsum(weights)
    starts = ends - weights
    return float(np.dot(dists, prefix[ends] - prefix[starts]))


def owa_decompose(v):
    """Split an OWA objective into p-Centrum objectives.

    Returns (p, v_p - v_{p+1}) for every p where the difference is positive,
    with v_{n+1} = 0, so that cost_v = sum(c * cost_p).
    """
    entries = as_weight_vector(v).entries
    diffs = entries - np.append(entries[1:], 0.0)
    return [(int(i) + 1, float(diffs[i])) for i in np.flatnonzero(diffs > 0)]


def interval_stats(coords, weights=None):
    """Weighted mean, cumulative error about that mean, and the covered range."""
    y = np.asarray(coords, dtype=np.float64).ravel()
    if y.size == 0:
        raise ValueError("interval_stats needs at least one coordinate")
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=np.float64).ravel()
    if w.shape != y.shape:
        raise ValueError(f"got {w.size} weights for {y.size} coordinates")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    lo, hi = float(y.min()), float(y.max())
    if lo == hi:
        return IntervalStats(mean=lo, delta=0.0, lo=lo, hi=hi)
    mean = float(np.dot(w, y) / w.sum())
    mean = min(max(mean, lo), hi)
    delta = float(np.dot(w, np.abs(y - mean)))
    return IntervalStats(mean=mean, delta=delta, lo=lo, hi=hi)


def p_grid(n, eps):
    """Geometric grid of p values with ratio (1 + eps), from 1 to n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < eps:
        raise ValueError(f"eps must be positive, got {eps}")
    grid = [1]
    while grid[-1] < n:
        p = grid[-1]
        # shave float noise so exact products like 1.2 * 5 do not round up
        step = math.ceil((1.0 + eps) * p * (1.0 - 1e-12))
        grid.append(min(n, max(p + 1, step)))
    return grid
