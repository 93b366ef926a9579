"""Initial center sets for the coreset constructions.

Two providers: the exact single-facility 1-D p-Centrum solver, and the
best-of-random-samples heuristic used for general (k, d). Randomness always
comes from numpy's PCG64 generator seeded explicitly, so runs are
reproducible across platforms.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .config import Config
from .core import _check_p, as_points, cost_p

logger = logging.getLogger(__name__)

METHOD_EXACT_1D = "exact-1d"
METHOD_SAMPLED = "sampled"

# Cap on the size of the (candidates x points) distance block evaluated at once
_BLOCK_CELLS = 4_000_000


@dataclass(frozen=True, eq=False)
class CenterSolution:
    centers: np.ndarray
    objective: float
    p: int
    method: str


def _top_p_costs_1d(x, ys, p):
    """cost_p of sorted 1-D data x at every candidate center in ys."""
    n = x.size
    rows = max(1, _BLOCK_CELLS // n)
    out = np.empty(ys.size)
    for lo in range(0, ys.size, rows):
        block = np.abs(x[None, :] - ys[lo:lo + rows, None])
        out[lo:lo + rows] = np.partition(block, n - p, axis=1)[:, n - p:].sum(axis=1)
    return out


def exact_center_1d(coords, p, exhaustive_limit=None):
    """Optimal single center for p-Centrum on a line.

    cost_p(X, y) is the upper envelope of the p + 1 lines obtained by charging
    the a leftmost and p - a rightmost points; adjacent envelope lines meet at
    the midpoints (x_(a+1) + x_(n-p+a+1)) / 2, so the minimum is attained on
    those midpoints. Up to exhaustive_limit points every candidate is
    evaluated; above it a golden-section search runs on the convex objective.
    """
    pts = as_points(coords, name="coords")
    if pts.shape[1] != 1:
        raise ValueError(f"exact_center_1d needs 1-D coordinates, got d={pts.shape[1]}")
    x = np.sort(pts.ravel())
    n = x.size
    _check_p(p, n)
    limit = Config.EXACT_1D_LIMIT if exhaustive_limit is None else exhaustive_limit

    if x[0] == x[-1]:
        return CenterSolution(np.array([[x[0]]]), 0.0, int(p), METHOD_EXACT_1D)

    if n <= limit:
        a = np.arange(p)
        midpoints = 0.5 * (x[a] + x[n - p + a])
        candidates = np.unique(np.concatenate([x, midpoints]))
        values = _top_p_costs_1d(x, candidates, p)
        best = int(np.argmin(values))
        y = float(candidates[best])
    else:
        lo, span = float(x[0]), float(x[-1] - x[0])

        def objective(t):
            return float(_top_p_costs_1d(x, np.array([lo + t * span]), p)[0])

        result = minimize_scalar(objective, bracket=(0.0, 1.0), method="golden", tol=1e-12)
        y = float(np.clip(lo + result.x * span, x[0], x[-1]))
        logger.debug("Golden-section 1-D center: y=%r after %d evaluations", y, result.nfev)

    opt = float(_top_p_costs_1d(x, np.array([y]), p)[0])
    return CenterSolution(np.array([[y]]), opt, int(p), METHOD_EXACT_1D)


def _draw_sample(data, k, rng):
    """k distinct stored points, drawn proportionally to multiplicity."""
    m = data.size
    size = min(k, m)
    if np.all(data.weights == 1):
        idx = rng.choice(m, size=size, replace=False)
    else:
        idx = rng.choice(m, size=size, replace=False, p=data.weights / data.n)
    return data.points[np.sort(idx)]


def sampling_curve(data, k, p, num_samples, seed):
    """Best-so-far heuristic objective after each of num_samples samples.

    Returns (best CenterSolution, list of (samples drawn, best objective)).
    """
    if k < 1 or k > data.n:
        raise ValueError(f"k must lie in [1, {data.n}], got {k}")
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    _check_p(p, data.n)
    rng = np.random.default_rng(seed)

    best_centers, best_value = None, np.inf
    curve = []
    for s in range(num_samples):
        candidate = _draw_sample(data, k, rng)
        value = cost_p(data, candidate, p)
        # strict: ties keep the lowest sample index
        if value < best_value:
            best_centers, best_value = candidate, value
        curve.append((s + 1, float(best_value)))

    if best_centers.shape[0] < k:
        logger.warning("Sampled center set collapsed to %d distinct points (k=%d)",
                       best_centers.shape[0], k)
    solution = CenterSolution(best_centers, float(best_value), int(p), METHOD_SAMPLED)
    return solution, curve


def sample_best_centers(data, k, p, num_samples=None, seed=0):
    """Best of num_samples uniformly sampled k-subsets of the data points."""
    if num_samples is None:
        num_samples = Config.NUM_SAMPLES
    solution, _ = sampling_curve(data, k, p, num_samples, seed)
    return solution


@dataclass(frozen=True)
class SamplingCenterProvider:
    """Default provider: the sampling heuristic, one seed stream per p."""

    seed: int = 0
    num_samples: int = field(default_factory=lambda: Config.NUM_SAMPLES)

    def __call__(self, data, k, p):
        stream = np.random.SeedSequence([int(self.seed), int(p)])
        return sample_best_centers(data, k, p, self.num_samples, seed=stream)


@dataclass(frozen=True)
class Exact1DCenterProvider:
    """Exact provider for single-facility instances on a line."""

    exhaustive_limit: int = None

    def __call__(self, data, k, p):
        if data.dimension != 1 or k != 1:
            raise ValueError(
                f"exact 1-D centers need d=1 and k=1, got d={data.dimension}, k={k}"
            )
        return exact_center_1d(data.expanded().ravel(), p, self.exhaustive_limit)
