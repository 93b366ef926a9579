"""Reduction from R^d to lines.

Every center gets one line per direction of an eps-net on the unit sphere;
each data point moves to its nearest line. With a net whose chord error is at
most eps, a point x moves by at most eps * d(x, C).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import Config
from .core import Dataset, as_centers, point_distances

logger = logging.getLogger(__name__)

# Cap on (points x lines x d) cells materialized per block in nearest-line search
_BLOCK_CELLS = 8_000_000


class LineBudgetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Line:
    anchor: np.ndarray
    direction: np.ndarray
    index: int

    def point_at(self, t):
        return self.anchor + t * self.direction


def _step_for_chord(chord):
    """Largest angle whose chord on the unit circle is at most chord."""
    return 2.0 * math.asin(min(1.0, chord / 2.0))


def _angle_grid(extent, max_gap):
    """Grid on [0, extent] including both ends with spacing at most max_gap."""
    count = max(1, math.ceil(extent / max_gap))
    return np.linspace(0.0, extent, count + 1)


def _circle_net(chord):
    """Full-circle net: every unit vector within chord of a member."""
    if chord >= 2.0:
        return np.array([[1.0, 0.0]])
    count = max(1, math.ceil(math.pi / _step_for_chord(chord)))
    angles = 2.0 * math.pi * np.arange(count) / count
    return np.column_stack([np.cos(angles), np.sin(angles)])


def _sphere_net(dim, chord, half):
    """Net on the unit sphere of R^dim in hyperspherical coordinates.

    For u = (cos phi, sin phi w) and a member v = (cos phi', sin phi' w'),
    |u - v|^2 = (2 sin(|phi - phi'| / 2))^2 + sin phi sin phi' |w - w'|^2, so
    the squared chord budget is split evenly: rings in phi are spaced so the
    first term is at most chord^2 / 2, and each ring carries a sub-sphere net
    whose chord keeps the second term there too. With half set only phi in
    [0, pi/2] is covered, which suffices up to sign.
    """
    if dim == 1:
        return np.array([[1.0]]) if half else np.array([[1.0], [-1.0]])
    if chord >= 2.0 and not half:
        return np.eye(dim)[:1]
    if dim == 2 and not half:
        return _circle_net(chord)

    share = chord / math.sqrt(2.0)
    # nearest ring is at most half a gap away, chord 2 sin(gap / 4)
    gap = 4.0 * math.asin(min(1.0, share / 2.0))
    extent = math.pi / 2.0 if half else math.pi
    directions = []
    for phi in _angle_grid(extent, gap):
        # bounds both sin(phi) and sin of any angle within gap / 2 of it
        reach = min(1.0, math.sin(phi) + gap / 2.0)
        sub_chord = share / reach if reach > 0 else 2.0
        sub = _sphere_net(dim - 1, sub_chord, half=False)
        ring = np.column_stack([np.full(len(sub), math.cos(phi)), math.sin(phi) * sub])
        directions.append(ring)
    return np.vstack(directions)


def _canonical_directions(directions):
    """Normalize, flip so the first non-zero coordinate is positive, drop duplicates."""
    directions = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    lead = np.argmax(np.abs(directions) > 1e-12, axis=1)
    signs = np.sign(directions[np.arange(len(directions)), lead])
    directions = directions * signs[:, None]
    _, keep = np.unique(np.round(directions, 12), axis=0, return_index=True)
    return directions[np.sort(keep)]


def direction_net(d, eps):
    """Unit directions covering the sphere up to sign with chord error <= eps."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if d == 1:
        return np.array([[1.0]])
    if d == 2:
        theta = _step_for_chord(eps)
        count = math.ceil(math.pi / theta)
        angles = math.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    return _canonical_directions(_sphere_net(d, eps, half=True))


def unique_centers(centers):
    """Distinct center rows in order of first appearance."""
    _, first = np.unique(centers, axis=0, return_index=True)
    return centers[np.sort(first)]


def build_lines(centers, eps, max_lines=None):
    centers = unique_centers(np.asarray(centers, dtype=np.float64))
    net = direction_net(centers.shape[1], eps)
    cap = Config.MAX_LINES if max_lines is None else max_lines
    total = len(centers) * len(net)
    if total > cap:
        raise LineBudgetError(
            f"projection needs {total} lines ({len(centers)} centers x {len(net)} directions), cap is {cap}"
        )
    lines = []
    for anchor in centers:
        for direction in net:
            lines.append(Line(anchor=anchor.copy(), direction=direction.copy(), index=len(lines)))
    return tuple(lines)


@dataclass(frozen=True, eq=False)
class ProjectedInstance:
    lines: tuple
    line_of_point: np.ndarray
    coord_of_point: np.ndarray
    weights: np.ndarray
    eps_net: float

    def __post_init__(self):
        m = self.line_of_point.size
        order = np.lexsort((np.arange(m), self.coord_of_point, self.line_of_point))
        offsets = np.searchsorted(self.line_of_point[order], np.arange(len(self.lines) + 1))
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_offsets", offsets)

    @property
    def anchors(self):
        return np.array([line.anchor for line in self.lines])

    @property
    def directions(self):
        return np.array([line.direction for line in self.lines])

    @property
    def points(self):
        """The projected points sigma(x), one row per original point."""
        return (self.anchors[self.line_of_point]
                + self.coord_of_point[:, None] * self.directions[self.line_of_point])

    @property
    def projected(self):
        return Dataset(self.points, self.weights)

    def members(self, line_index):
        """Original point indices on a line, sorted by coordinate (ties by index)."""
        lo, hi = self._offsets[line_index], self._offsets[line_index + 1]
        return self._order[lo:hi]

    def line_view(self, line_index):
        idx = self.members(line_index)
        return self.coord_of_point[idx], self.weights[idx], idx

    def nonempty_lines(self):
        return [int(l) for l in np.flatnonzero(np.diff(self._offsets) > 0)]


def project_onto_lines(data, lines, eps_net=float("nan")):
    """Move each point to its nearest line (ties to the lowest line index)."""
    if not lines:
        raise ValueError("need at least one line")
    anchors = np.array([line.anchor for line in lines])
    directions = np.array([line.direction for line in lines])
    if anchors.shape[1] != data.dimension:
        raise ValueError(
            f"line dimension {anchors.shape[1]} does not match data dimension {data.dimension}"
        )
    x = data.points
    m, d = x.shape
    best_dist = np.full(m, np.inf)
    best_line = np.zeros(m, dtype=np.int64)
    best_coord = np.zeros(m)

    distinct, group_of_line = np.unique(anchors, axis=0, return_inverse=True)
    group_of_line = np.asarray(group_of_line).ravel()
    for g, anchor in enumerate(distinct):
        line_ids = np.flatnonzero(group_of_line == g)
        diff = x - anchor
        block = max(1, _BLOCK_CELLS // max(1, m * d))
        for lo in range(0, line_ids.size, block):
            ids = line_ids[lo:lo + block]
            units = directions[ids]
            t = diff @ units.T
            resid = diff[:, None, :] - t[:, :, None] * units[None, :, :]
            dist2 = np.einsum("mld,mld->ml", resid, resid)
            j = np.argmin(dist2, axis=1)
            cand = dist2[np.arange(m), j]
            cand_line = ids[j]
            better = (cand < best_dist) | ((cand == best_dist) & (cand_line < best_line))
            best_dist = np.where(better, cand, best_dist)
            best_line = np.where(better, cand_line, best_line)
            best_coord = np.where(better, t[np.arange(m), j], best_coord)

    return ProjectedInstance(
        lines=tuple(lines),
        line_of_point=best_line,
        coord_of_point=best_coord,
        weights=data.weights.copy(),
        eps_net=float(eps_net),
    )


def project(data, centers, eps, max_lines=None):
    """Project data onto the lines through centers in eps-net directions."""
    centers = as_centers(centers, data.dimension)
    lines = build_lines(centers, eps, max_lines)
    proj = project_onto_lines(data, lines, eps)
    logger.info(
        "Projected %d points onto %d lines (%d non-empty, eps_net=%s)",
        data.size, len(lines), len(proj.nonempty_lines()), eps,
    )
    return proj


def displacement(data, proj):
    """d(x, sigma(x)) per point."""
    return np.linalg.norm(data.points - proj.points, axis=1)


def displacement_bound(data, proj, centers):
    """eps_net * d(x, C) per point, the bound displacement must respect."""
    return proj.eps_net * point_distances(data, centers)
