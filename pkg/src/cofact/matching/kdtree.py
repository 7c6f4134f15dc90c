"""Exact nearest-neighbor queries over a kd-tree, scan-equivalent by construction.

The tree (scipy cKDTree) is only trusted to find a nearby neighbor; its
distance is then inflated into a search radius, every point inside the ball
is re-scored with the shared distance routine, and the minimum of those
re-scored values is returned. Since the ball provably contains the true
nearest neighbor, the result is bit-identical to a linear scan using the
same routine — regardless of tree topology or query order.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ComputationError
from .distances import squared_distances_to_set

# Ball radius slack: ~1e6 ulps, dwarfing any float64 distance discrepancy
# between the tree's arithmetic and ours, while keeping balls tiny.
_RADIUS_SLACK = 1e-9
_RADIUS_FLOOR = 1e-12


class NNIndex:
    """Immutable exact nearest-neighbor index over a fixed point set."""

    def __init__(self, points: np.ndarray):
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[0] == 0:
            raise ComputationError("cannot index an empty point set")
        if not np.all(np.isfinite(points)):
            raise ComputationError("cannot index non-finite points")
        self.points = points.copy()
        self.points.setflags(write=False)
        self._tree = cKDTree(self.points)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    def _candidate_lists(self, queries: np.ndarray) -> list[list[int]]:
        approx, _ = self._tree.query(queries, k=1)
        radius = approx * (1.0 + _RADIUS_SLACK) + _RADIUS_FLOOR
        return self._tree.query_ball_point(queries, radius)

    def query(self, point: np.ndarray) -> tuple[float, int]:
        """Nearest neighbor of one point: (distance, index), ties to lowest index."""
        point = np.asarray(point, dtype=np.float64)
        if point.shape != (self.dimension,):
            raise ComputationError(
                f"query dimension {point.shape} does not match index ({self.dimension},)"
            )
        candidates = self._candidate_lists(point[None, :])[0]
        if not candidates:  # ulp-pathological radius; fall back to a scan
            candidates = list(range(len(self.points)))
        ids = np.asarray(sorted(candidates), dtype=np.intp)
        sq = squared_distances_to_set(point[None, :], self.points[ids])[0]
        best = int(np.argmin(sq))  # first occurrence wins = lowest index
        return float(np.sqrt(sq[best])), int(ids[best])

    def min_distances(self, queries: np.ndarray) -> np.ndarray:
        """Nearest-neighbor distance for every query row (no indices)."""
        queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
        if queries.shape[1] != self.dimension:
            raise ComputationError(
                f"query dimension {queries.shape[1]} does not match index "
                f"({self.dimension})"
            )
        if queries.shape[0] == 0:
            return np.empty(0, dtype=np.float64)
        lists = self._candidate_lists(queries)
        lengths = np.asarray([len(lst) for lst in lists], dtype=np.intp)
        out = np.empty(len(queries), dtype=np.float64)

        thin = np.flatnonzero(lengths == 0)
        if thin.size:  # see query(): degrade those rows to a full scan
            for i in thin:
                sq = squared_distances_to_set(queries[i][None, :], self.points)[0]
                out[i] = np.sqrt(sq.min())

        filled = np.flatnonzero(lengths > 0)
        if filled.size:
            flat_ids = np.concatenate([lists[i] for i in filled]).astype(np.intp)
            flat_queries = np.repeat(queries[filled], lengths[filled], axis=0)
            diff = flat_queries - self.points[flat_ids]
            sq = (diff * diff).sum(axis=1)
            starts = np.zeros(filled.size, dtype=np.intp)
            np.cumsum(lengths[filled][:-1], out=starts[1:])
            out[filled] = np.sqrt(np.minimum.reduceat(sq, starts))
        return out


def linear_scan_min_distances(
    queries: np.ndarray, points: np.ndarray, chunk: int = 256
) -> np.ndarray:
    """Brute-force nearest-neighbor distances, chunked to bound memory."""
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    out = np.empty(len(queries), dtype=np.float64)
    for start in range(0, len(queries), chunk):
        block = queries[start : start + chunk]
        sq = squared_distances_to_set(block, points)
        out[start : start + len(block)] = np.sqrt(sq.min(axis=1))
    return out
