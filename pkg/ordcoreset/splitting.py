"""Greedy 1-D interval splitting.

All functions work on coordinates sorted ascending (one line at a time) and
return intervals as half-open index ranges [start, stop) into that order, so
every interval is contiguous and a list of them is a partition.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import interval_stats

logger = logging.getLogger(__name__)

RULE_DELTA = "delta"
RULE_LENGTH = "length"
RULE_EXACT = "exact"
RULE_REFINED = "refined"

LEFT_TO_RIGHT = "left-to-right"
RIGHT_TO_LEFT = "right-to-left"


@dataclass(frozen=True, eq=False)
class Interval:
    start: int
    stop: int
    weight: float
    stats: object
    rule: str
    members: np.ndarray
    member_weights: np.ndarray

    @property
    def count(self):
        return self.stop - self.start


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """A partition of one line's sorted points into contiguous intervals.

    thresholds holds one {"delta": ..., "length": ...} record per plan that
    shaped the partition, for re-validation downstream.
    """

    coords: np.ndarray
    weights: np.ndarray
    intervals: tuple
    thresholds: tuple

    @property
    def starts(self):
        return np.array([iv.start for iv in self.intervals], dtype=np.int64)

    def __len__(self):
        return len(self.intervals)

    def check_partition(self):
        expected = 0
        for iv in self.intervals:
            if iv.start != expected or iv.stop <= iv.start:
                raise ValueError(f"intervals are not a contiguous partition at index {expected}")
            expected = iv.stop
        if expected != self.coords.size:
            raise ValueError(f"intervals cover {expected} of {self.coords.size} points")


def _prepare(coords, weights):
    y = np.asarray(coords, dtype=np.float64).ravel()
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=np.float64).ravel()
    if w.shape != y.shape:
        raise ValueError(f"got {w.size} weights for {y.size} coordinates")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    if np.any(np.diff(y) < 0):
        raise ValueError("coords must be sorted ascending")
    return y, w


def make_interval(coords, weights, start, stop, rule):
    members = coords[start:stop]
    member_weights = weights[start:stop]
    return Interval(
        start=int(start),
        stop=int(stop),
        weight=float(member_weights.sum()),
        stats=interval_stats(members, member_weights),
        rule=rule,
        members=members,
        member_weights=member_weights,
    )


def make_interval_set(coords, weights, bounds, rules, thresholds):
    y, w = _prepare(coords, weights)
    intervals = tuple(
        make_interval(y, w, start, stop, rule) for (start, stop), rule in zip(bounds, rules)
    )
    return IntervalSet(coords=y, weights=w, intervals=intervals, thresholds=tuple(thresholds))


def _delta_bounds_forward(y, w, threshold):
    """Greedy left-to-right packing under a cumulative-error budget.

    delta of [start, stop) is evaluated in O(1) from prefix sums of w and w*y,
    split at the first member above the running mean; that split index only
    moves right while an interval grows, so a sweep is linear.
    """
    n = y.size
    y = y - y[0]
    cw = np.concatenate(([0.0], np.cumsum(w)))
    cy = np.concatenate(([0.0], np.cumsum(w * y)))
    bounds = []
    start = 0
    while start < n:
        stop = start + 1
        split = start
        while stop < n:
            grown = stop + 1
            mean = (cy[grown] - cy[start]) / (cw[grown] - cw[start])
            while split < grown and y[split] <= mean:
                split += 1
            below = mean * (cw[split] - cw[start]) - (cy[split] - cy[start])
            above = (cy[grown] - cy[split]) - mean * (cw[grown] - cw[split])
            if below + above > threshold:
                break
            stop = grown
        bounds.append((start, stop))
        start = stop
    return bounds


def delta_bounds(coords, weights, threshold, direction=LEFT_TO_RIGHT):
    """Index ranges of split_by_delta, listed in ascending coordinate order."""
    y, w = _prepare(coords, weights)
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    if y.size == 0:
        return []
    if direction == LEFT_TO_RIGHT:
        return _delta_bounds_forward(y, w, threshold)
    if direction == RIGHT_TO_LEFT:
        n = y.size
        mirrored = _delta_bounds_forward(-y[::-1], w[::-1], threshold)
        return [(n - stop, n - start) for start, stop in reversed(mirrored)]
    raise ValueError(f"unknown direction {direction!r}")


def split_by_delta(coords, weights, threshold, direction=LEFT_TO_RIGHT):
    """Maximal greedy intervals whose cumulative error stays within threshold.

    The scan starts at the left end or (right-to-left) at the right end;
    each interval except the last in scan order cannot absorb its next point.
    """
    y, w = _prepare(coords, weights)
    bounds = delta_bounds(y, w, threshold, direction)
    return [make_interval(y, w, start, stop, RULE_DELTA) for start, stop in bounds]


def length_bounds(coords, weights, max_len):
    y, _ = _prepare(coords, weights)
    if not max_len > 0:
        raise ValueError(f"max_len must be positive, got {max_len}")
    bounds = []
    start = 0
    while start < y.size:
        stop = int(np.searchsorted(y, y[start] + max_len, side="right"))
        bounds.append((start, stop))
        start = stop
    return bounds


def split_by_length(coords, weights, max_len):
    """Maximal greedy left-to-right intervals of length at most max_len."""
    y, w = _prepare(coords, weights)
    return [make_interval(y, w, start, stop, RULE_LENGTH)
            for start, stop in length_bounds(y, w, max_len)]


def exact_bounds(coords):
    """One interval per distinct coordinate; replacing them by means is lossless."""
    y = np.asarray(coords, dtype=np.float64).ravel()
    if y.size == 0:
        return []
    cuts = np.flatnonzero(np.diff(y) != 0) + 1
    starts = np.concatenate(([0], cuts))
    stops = np.concatenate((cuts, [y.size]))
    return [(int(a), int(b)) for a, b in zip(starts, stops)]


def _fractional_delta(y, masses):
    mean = np.dot(masses, y) / masses.sum()
    return float(np.dot(masses, np.abs(y - mean)))


def fractional_split_count(coords, weights, threshold, rel_tol=1e-12):
    """Number of intervals when points may be divided between neighbours.

    Every interval but the last is filled until its cumulative error equals
    threshold exactly; the point that crosses the budget is cut at the root of
    delta(mass) = threshold and its remainder opens the next interval.
    """
    y, w = _prepare(coords, weights)
    if not threshold > 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    n = y.size
    if n == 0:
        return 0

    count = 1
    start = 0
    first_mass = w[0]
    i = 1
    while i < n:
        masses = w[start:i + 1].copy()
        masses[0] = first_mass
        members = y[start:i + 1]
        if _fractional_delta(members, masses) <= threshold:
            i += 1
            continue

        def excess(mass):
            trial = masses.copy()
            trial[-1] = mass
            return _fractional_delta(members, trial) - threshold

        cut = brentq(excess, 0.0, w[i], xtol=rel_tol * w[i], rtol=4 * np.finfo(float).eps)
        count += 1
        start = i
        first_mass = w[i] - cut
        i += 1
    return count
