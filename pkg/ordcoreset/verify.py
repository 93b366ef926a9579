"""Coreset evaluation and the lower-bound instance.

Empirical error follows the usual protocol: draw random center sets uniformly
from the bounding box of the data and report the largest relative error
|cost(D, C) / cost(X, C) - 1| over them.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Dataset,
    WeightVector,
    _check_p,
    as_centers,
    cost_p,
    cost_p_all,
    cost_v,
    sorted_distances,
)

logger = logging.getLogger(__name__)

ALL_P = "all-p"


class ClaimPreconditionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ErrorReport:
    max_error: float
    argmax_index: int
    argmax_centers: np.ndarray
    argmax_objective: object
    num_centers: int
    description: str
    seed: object = None


@dataclass(frozen=True, eq=False)
class CostProfile:
    values: np.ndarray
    increments: np.ndarray
    pieces: int

    @property
    def n(self):
        return int(self.values.size)


@dataclass(frozen=True)
class ClaimCheck:
    p_hat: int
    violated: bool
    ratio: float


def relative_error(cost_x, cost_d):
    if cost_x == 0:
        return 0.0 if cost_d == 0 else math.inf
    return abs(cost_d / cost_x - 1.0)


def random_box_centers(data, k, num, seed):
    """num center sets of k points, uniform per axis in the bounding box of data."""
    if k < 1 or num < 1:
        raise ValueError(f"need k >= 1 and num >= 1, got k={k}, num={num}")
    rng = np.random.default_rng(seed)
    lo, hi = data.points.min(axis=0), data.points.max(axis=0)
    return rng.uniform(lo, hi, size=(num, k, data.dimension))


def _objective_errors(data, coreset, centers, objective):
    """(error, objective label) pairs for one center set."""
    if isinstance(objective, str) and objective == ALL_P:
        wx = cost_p_all(data, centers)
        wd = cost_p_all(coreset, centers)
        with np.errstate(divide="ignore", invalid="ignore"):
            errs = np.where(wx == 0, np.where(wd == 0, 0.0, np.inf), np.abs(wd / wx - 1.0))
        j = int(np.argmax(errs))
        return [(float(errs[j]), j + 1)]
    if isinstance(objective, WeightVector):
        return [(relative_error(cost_v(data, centers, objective),
                                cost_v(coreset, centers, objective)), "v")]
    if np.ndim(objective) == 0:
        p = int(objective)
        return [(relative_error(cost_p(data, centers, p), cost_p(coreset, centers, p)), p)]
    return [(relative_error(cost_p(data, centers, int(p)), cost_p(coreset, centers, int(p))), int(p))
            for p in objective]


def _describe(objective):
    if isinstance(objective, str):
        return objective
    if isinstance(objective, WeightVector):
        return f"weight vector (n={len(objective)})"
    if np.ndim(objective) == 0:
        return f"p={int(objective)}"
    return f"p in {[int(p) for p in objective]}"


def coreset_error(data, coreset, center_sets, objective, seed=None):
    """Largest relative error of coreset against data over the given center sets.

    objective is a single p, a list of p values, a WeightVector, or ALL_P for
    an exhaustive sweep over p = 1..n. Ties keep the first center set.
    """
    if data.n != coreset.n:
        raise ValueError(f"coreset weight {coreset.n} does not match data size {data.n}")
    if data.dimension != coreset.dimension:
        raise ValueError(
            f"coreset dimension {coreset.dimension} does not match data dimension {data.dimension}"
        )
    center_sets = list(center_sets)
    if not center_sets:
        raise ValueError("need at least one center set")
    if isinstance(objective, WeightVector) and len(objective) != data.n:
        raise ValueError(f"weight vector has length {len(objective)}, data has n={data.n}")
    if not isinstance(objective, (str, WeightVector)):
        for p in np.atleast_1d(objective):
            _check_p(int(p), data.n)

    best = (-1.0, 0, None)
    for i, centers in enumerate(center_sets):
        centers = as_centers(centers, data.dimension)
        for err, label in _objective_errors(data, coreset, centers, objective):
            if err > best[0]:
                best = (err, i, label)

    err, index, label = best
    return ErrorReport(
        max_error=float(err),
        argmax_index=index,
        argmax_centers=as_centers(center_sets[index], data.dimension),
        argmax_objective=label,
        num_centers=len(center_sets),
        description=f"{len(center_sets)} center sets, {_describe(objective)}",
        seed=seed,
    )


def evaluate_coreset(data, coreset, k, num_centers, seed, objective):
    """coreset_error over random bounding-box centers drawn from seed."""
    centers = random_box_centers(data, k, num_centers, seed)
    report = coreset_error(data, coreset, centers, objective, seed=seed)
    logger.info("Empirical error %.4g over %d centers (%s)",
                report.max_error, num_centers, report.description)
    return report


def gaussian_blobs(n, d, k, seed, spread=0.05):
    """Synthetic clustered data in the unit cube: k Gaussian blobs of similar size."""
    rng = np.random.default_rng(seed)
    means = rng.uniform(0.0, 1.0, size=(k, d))
    labels = rng.integers(0, k, size=n)
    return Dataset(means[labels] + rng.normal(0.0, spread, size=(n, d)))


def kahan_prefix_sums(values):
    """Prefix sums with compensated (Kahan) accumulation."""
    out = np.empty(len(values))
    total = 0.0
    carry = 0.0
    for i, value in enumerate(np.asarray(values, dtype=np.float64).tolist()):
        y = value - carry
        t = total + y
        carry = (t - total) - y
        total = t
        out[i] = total
    return out


def sqrt_instance(n):
    """1-D points whose prefix sums are sqrt(i), so W_X(p) = sqrt(p) at center 0.

    x_i = sqrt(i) - sqrt(i - 1), evaluated as 1 / (sqrt(i) + sqrt(i - 1)) to
    avoid cancellation.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    i = np.arange(1, n + 1, dtype=np.float64)
    return Dataset((1.0 / (np.sqrt(i) + np.sqrt(i - 1.0))).reshape(-1, 1))


def profile_pieces(data, center):
    """W(p) = cost_p(data, center) for p = 1..n and its number of linear pieces.

    The increment W(p) - W(p-1) is the p-th largest distance, so the pieces
    are the runs of equal distance in the sorted order.
    """
    dists, weights = sorted_distances(data, as_centers(center, data.dimension))
    increments = np.repeat(dists, weights)
    pieces = 1 + int(np.count_nonzero(dists[1:] != dists[:-1]))
    return CostProfile(values=np.cumsum(increments), increments=increments, pieces=pieces)


def profile_errors(profile_x, profile_d):
    """Relative error of W_D against W_X at every p."""
    if profile_x.n != profile_d.n:
        raise ValueError(f"profiles cover n={profile_x.n} and n={profile_d.n}")
    wx, wd = profile_x.values, profile_d.values
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(wx == 0, np.where(wd == 0, 0.0, np.inf), np.abs(wd / wx - 1.0))


def claim_check(a, b, eps):
    """Check that no linear g within (1 +- eps) sqrt at a and b stays close at p_hat.

    The worst admissible g takes the upper ends (1 + eps) sqrt(a) and
    (1 + eps) sqrt(b), since g(p_hat) is a non-negative combination of g(a)
    and g(b). Reports p_hat = floor(sqrt(ab)), whether g(p_hat) < (1 - eps)
    sqrt(p_hat), and the ratio g(p_hat) / sqrt(p_hat).
    """
    if not 0 < eps < 1:
        raise ClaimPreconditionError(f"eps must lie in (0, 1), got {eps}")
    if a < 1:
        raise ClaimPreconditionError(f"a >= 1 fails: a={a}")
    floor_b = (1.0 + 1.0 / eps) ** 2
    if b < floor_b:
        raise ClaimPreconditionError(f"b >= (1 + 1/eps)^2 fails: b={b} < {floor_b:.6g}")
    ratio_floor = (1.0 + 12.0 * math.sqrt(eps)) ** 4
    if b / a < ratio_floor:
        raise ClaimPreconditionError(
            f"b/a >= (1 + 12 sqrt(eps))^4 fails: b/a={b / a:.6g} < {ratio_floor:.6g}"
        )

    p_hat = math.isqrt(int(a) * int(b))
    g_a = (1.0 + eps) * math.sqrt(a)
    g_b = (1.0 + eps) * math.sqrt(b)
    g_hat = ((p_hat - a) * g_b + (b - p_hat) * g_a) / (b - a)
    ratio = g_hat / math.sqrt(p_hat)
    return ClaimCheck(p_hat=int(p_hat), violated=bool(ratio < 1.0 - eps), ratio=float(ratio))


def claim_interval(n, eps):
    """Smallest admissible (a, b) for claim_check, or None when b would exceed n."""
    a = max(1, math.ceil((1.0 + 1.0 / eps) ** 2))
    b = math.ceil(a * (1.0 + 12.0 * math.sqrt(eps)) ** 4)
    return (a, b) if b <= n else None


def piece_lower_bound(n, eps):
    """Reference piece count log(eps^2 n) / (2 log(1 + 12 sqrt(eps)))."""
    scale = eps * eps * n
    if scale <= 1:
        return 0.0
    return math.log(scale) / (2.0 * math.log(1.0 + 12.0 * math.sqrt(eps)))
