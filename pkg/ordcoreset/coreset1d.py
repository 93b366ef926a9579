"""p-Centrum coreset for one facility on a line.

The p points farthest from the optimal center y* are split by cumulative error
(left side scanned left to right, right side right to left); the remaining
points all lie within opt / p of y* and are split by length. Each interval is
replaced by its mean, weighted by its size.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .centers import exact_center_1d
from .config import Config
from .core import WeightedCoreset, _check_p, as_points
from .splitting import LEFT_TO_RIGHT, RIGHT_TO_LEFT, split_by_delta, split_by_length

logger = logging.getLogger(__name__)

# Threshold constants of the single-line construction
DELTA_FACTOR = 2.0 / 21.0
LENGTH_FACTOR = 1.0 / 3.0


@dataclass(frozen=True, eq=False)
class Partition1D:
    left: np.ndarray
    middle: np.ndarray
    right: np.ndarray
    left_index: np.ndarray
    middle_index: np.ndarray
    right_index: np.ndarray
    y_star: float
    opt: float
    p: int


def _coords_1d(coords):
    pts = as_points(coords, name="coords")
    if pts.shape[1] != 1:
        raise ValueError(f"expected 1-D coordinates, got d={pts.shape[1]}")
    return pts.ravel()


def _check_eps(eps):
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def partition_lqr(coords, p):
    """Split X into L, Q, R around the optimal center.

    The p points farthest from y* (ties by lowest index) form L (<= y*) and
    R (> y*); everything else is Q. Each part is returned sorted ascending
    together with the original indices of its points.
    """
    x = _coords_1d(coords)
    _check_p(p, x.size)
    solution = exact_center_1d(x, p)
    y_star = float(solution.centers[0, 0])

    order = np.argsort(-np.abs(x - y_star), kind="stable")
    chosen = np.zeros(x.size, dtype=bool)
    chosen[order[:p]] = True

    def part(mask):
        idx = np.flatnonzero(mask)
        idx = idx[np.argsort(x[idx], kind="stable")]
        return x[idx], idx

    left, left_index = part(chosen & (x <= y_star))
    right, right_index = part(chosen & (x > y_star))
    middle, middle_index = part(~chosen)
    return Partition1D(
        left=left, middle=middle, right=right,
        left_index=left_index, middle_index=middle_index, right_index=right_index,
        y_star=y_star, opt=solution.objective, p=int(p),
    )


def build_coreset_1d(coords, p, eps, slack=None):
    """Coreset D with |cost_p(D, y) - cost_p(X, y)| <= eps * opt for every y."""
    x = _coords_1d(coords)
    _check_p(p, x.size)
    _check_eps(eps)
    slack = Config.SLACK if slack is None else slack

    part = partition_lqr(x, p)
    if part.opt == 0:
        logger.warning("opt is 0 for p=%d; emitting one point per distinct coordinate", p)
        values, counts = np.unique(x, return_counts=True)
        return WeightedCoreset(values.reshape(-1, 1), counts)

    delta_threshold = slack * DELTA_FACTOR * eps * part.opt
    length_threshold = slack * LENGTH_FACTOR * eps * part.opt / p

    intervals = []
    if part.left.size:
        intervals += split_by_delta(part.left, None, delta_threshold, LEFT_TO_RIGHT)
    if part.middle.size:
        intervals += split_by_length(part.middle, None, length_threshold)
    if part.right.size:
        intervals += split_by_delta(part.right, None, delta_threshold, RIGHT_TO_LEFT)

    points = np.array([[iv.stats.mean] for iv in intervals])
    weights = np.array([iv.count for iv in intervals], dtype=np.int64)
    logger.info(
        "1-D coreset: n=%d p=%d eps=%s opt=%.6g -> %d points (|L|=%d |Q|=%d |R|=%d)",
        x.size, p, eps, part.opt, len(intervals),
        part.left.size, part.middle.size, part.right.size,
    )
    return WeightedCoreset.merged(points, weights)
