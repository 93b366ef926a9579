"""p-Centrum and simultaneous ordered-weighted coresets in R^d.

Both constructions project the data onto lines through an initial center set,
split every line's points into contiguous intervals that are either short
(length <= eps * apx / (3p)) or tight (delta <= 2 eps * apx_l / (21k)), and
replace each interval by its mean. The simultaneous variant builds one plan per
p on a geometric grid and keeps the common refinement of all plans.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .centers import SamplingCenterProvider
from .config import Config
from .core import WeightedCoreset, _check_p, as_centers, p_grid, point_distances
from .coreset1d import DELTA_FACTOR, LENGTH_FACTOR
from .projection import project, unique_centers
from .splitting import (
    LEFT_TO_RIGHT,
    RIGHT_TO_LEFT,
    RULE_DELTA,
    RULE_EXACT,
    RULE_LENGTH,
    RULE_REFINED,
    delta_bounds,
    exact_bounds,
    length_bounds,
    make_interval_set,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LineSplitPlan:
    interval_sets: dict
    apx: float
    line_apx: np.ndarray
    p: int
    k: int
    eps: float
    slack: float

    @property
    def size(self):
        return sum(len(s) for s in self.interval_sets.values())


def _check_params(k, eps):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def top_p_membership(dists, weights, p):
    """Weight of each point that falls inside the top-p set (ties by lowest index)."""
    order = np.argsort(-dists, kind="stable")
    w = weights[order]
    before = np.cumsum(w) - w
    taken = np.clip(p - before, 0, w)
    out = np.zeros(dists.size)
    out[order] = taken
    return out


def _line_bounds(coords, weights, in_top, delta_threshold, length_threshold):
    """Cut one line into intervals.

    Runs of top-p points are split by cumulative error, the part at or left of
    the anchor left to right and the part right of it right to left; runs of
    the remaining points are split by length. Zero thresholds fall back to one
    interval per distinct coordinate.

    Only the line's own center, at coordinate 0, cuts a top-p run. Projections
    of the other centers onto the line are not cut points.
    """
    n = coords.size
    run_starts = np.concatenate(([0], np.flatnonzero(np.diff(in_top.astype(np.int8))) + 1))
    run_stops = np.concatenate((run_starts[1:], [n]))

    bounds, rules = [], []

    def extend(offset, local, rule):
        bounds.extend((offset + a, offset + b) for a, b in local)
        rules.extend([rule] * len(local))

    for a, b in zip(run_starts, run_stops):
        y, w = coords[a:b], weights[a:b]
        if not in_top[a]:
            if length_threshold > 0:
                extend(a, length_bounds(y, w, length_threshold), RULE_LENGTH)
            else:
                extend(a, exact_bounds(y), RULE_EXACT)
            continue
        mid = int(np.searchsorted(y, 0.0, side="right"))
        if mid > 0:
            extend(a, delta_bounds(y[:mid], w[:mid], delta_threshold, LEFT_TO_RIGHT), RULE_DELTA)
        if mid < y.size:
            extend(a + mid, delta_bounds(y[mid:], w[mid:], delta_threshold, RIGHT_TO_LEFT),
                   RULE_DELTA)
    return bounds, rules


def split_lines_for_p(proj, centers, p, k, eps, slack=None):
    """Per-line interval sets for one p, with apx = cost_p(X', C)."""
    _check_params(k, eps)
    slack = Config.SLACK if slack is None else slack
    projected = proj.projected
    _check_p(p, projected.n)
    centers = as_centers(centers, projected.dimension)

    dists = point_distances(projected, centers)
    taken = top_p_membership(dists, projected.weights, p)
    contribution = dists * taken
    apx = float(contribution.sum())
    line_apx = np.bincount(proj.line_of_point, weights=contribution, minlength=len(proj.lines))
    length_threshold = slack * LENGTH_FACTOR * eps * apx / p
    if apx == 0:
        logger.warning("apx is 0 for p=%d; lines fall back to exact grouping", p)

    interval_sets = {}
    for line in proj.nonempty_lines():
        coords, weights, idx = proj.line_view(line)
        delta_threshold = slack * DELTA_FACTOR * eps * float(line_apx[line]) / k
        bounds, rules = _line_bounds(coords, weights, taken[idx] > 0,
                                     delta_threshold, length_threshold)
        interval_sets[line] = make_interval_set(
            coords, weights, bounds, rules,
            thresholds=[{"p": int(p), "delta": delta_threshold, "length": length_threshold}],
        )

    plan = LineSplitPlan(interval_sets=interval_sets, apx=apx, line_apx=line_apx,
                         p=int(p), k=int(k), eps=float(eps), slack=float(slack))
    logger.debug("p=%d: apx=%.6g, %d intervals over %d lines",
                 p, apx, plan.size, len(interval_sets))
    return plan


def combine_interval_sets(sets):
    """Common refinement of several partitions of the same line.

    The union of all interval starts cuts the line; every resulting interval
    sits inside one interval of each parent, so no parent's length or
    cumulative-error bound can be exceeded.
    """
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one interval set")
    first = sets[0]
    for other in sets[1:]:
        if (other.coords.shape != first.coords.shape
                or not np.array_equal(other.coords, first.coords)
                or not np.array_equal(other.weights, first.weights)):
            raise ValueError("interval sets partition different point sets")

    n = first.coords.size
    starts = np.unique(np.concatenate([s.starts for s in sets]))
    stops = np.append(starts[1:], n)
    bounds = list(zip(starts.tolist(), stops.tolist()))

    rules = []
    for start in starts:
        parent_rules = set()
        for s in sets:
            slot = int(np.searchsorted(s.starts, start, side="right")) - 1
            parent_rules.add(s.intervals[slot].rule)
        rules.append(parent_rules.pop() if len(parent_rules) == 1 else RULE_REFINED)

    thresholds = [t for s in sets for t in s.thresholds]
    return make_interval_set(first.coords, first.weights, bounds, rules, thresholds)


def emit_coreset(proj, interval_sets):
    """Interval means mapped back to R^d, weighted by interval multiplicity."""
    points, weights = [], []
    for line_index in sorted(interval_sets):
        line = proj.lines[line_index]
        for iv in interval_sets[line_index].intervals:
            points.append(line.point_at(iv.stats.mean))
            weights.append(int(round(iv.weight)))
    return WeightedCoreset.merged(np.array(points), np.array(weights, dtype=np.int64))


def _provider_or_default(center_provider):
    return SamplingCenterProvider() if center_provider is None else center_provider


def build_pcentrum_coreset(data, k, p, eps, center_provider=None, eps_net=None,
                           slack=None, max_lines=None):
    """Strong eps-coreset for k-facility p-Centrum."""
    _check_params(k, eps)
    _check_p(p, data.n)
    provider = _provider_or_default(center_provider)

    solution = provider(data, k, p)
    logger.info("Initial centers for p=%d: %d centers, objective %.6g (%s)",
                p, len(solution.centers), solution.objective, solution.method)
    proj = project(data, solution.centers, eps if eps_net is None else eps_net, max_lines)
    plan = split_lines_for_p(proj, solution.centers, p, k, eps, slack)
    coreset = emit_coreset(proj, plan.interval_sets)
    logger.info("p-Centrum coreset: n=%d k=%d p=%d eps=%s -> %d points",
                data.n, k, p, eps, coreset.size)
    return coreset


def build_simultaneous_coreset(data, k, eps, center_provider=None, eps_net=None,
                               slack=None, max_lines=None):
    """Coreset preserving cost_v for every center set and every weight vector v."""
    _check_params(k, eps)
    if data.n == 1:
        return WeightedCoreset(data.points.copy(), data.weights.copy())
    provider = _provider_or_default(center_provider)

    grid = p_grid(data.n, eps)
    center_sets = [provider(data, k, p).centers for p in grid]
    centers = unique_centers(np.vstack(center_sets))
    logger.info("Simultaneous coreset: %d grid values of p, %d distinct centers",
                len(grid), len(centers))

    proj = project(data, centers, eps if eps_net is None else eps_net, max_lines)
    plans = [split_lines_for_p(proj, centers, p, k, eps, slack) for p in grid]

    combined = {
        line: combine_interval_sets(plan.interval_sets[line] for plan in plans)
        for line in proj.nonempty_lines()
    }
    coreset = emit_coreset(proj, combined)
    logger.info("Simultaneous coreset: n=%d k=%d eps=%s -> %d points",
                data.n, k, eps, coreset.size)
    return coreset
