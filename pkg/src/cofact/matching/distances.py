"""Distance primitives shared by every matching backend.

All selection paths (brute force and spatial index) funnel through
squared_distances_to_set so candidate scores are computed by one routine
and stay bit-identical regardless of how candidates were found.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ComputationError

# Relative ridge added to the covariance diagonal before inversion.
RIDGE_FACTOR = 1e-6


def squared_distances_to_set(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Exact pairwise squared Euclidean distances, shape (len(queries), len(points)).

    Computed as sum((q - p)^2) directly (no norm expansion), so the same
    (query, point) pair always yields the same float64 value.
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if queries.shape[1] != points.shape[1]:
        raise ComputationError(
            f"dimension mismatch: {queries.shape[1]} vs {points.shape[1]}"
        )
    diff = queries[:, None, :] - points[None, :, :]
    return (diff * diff).sum(axis=2)


def point_to_set_distance(point: np.ndarray, points: np.ndarray) -> float:
    """Distance from a point to its nearest neighbor in a nonempty set."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[0] == 0:
        raise ComputationError("point_to_set_distance: the set is empty")
    sq = squared_distances_to_set(np.asarray(point, dtype=np.float64)[None, :], points)
    return float(np.sqrt(sq.min()))


@dataclass(frozen=True)
class CovarianceRecord:
    """Sample covariance, its (ridged) inverse, and the ridge that was added."""

    matrix: np.ndarray
    inverse: np.ndarray
    ridge: float

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.inverse.setflags(write=False)


def fit_covariance(encoded: np.ndarray, ridge_factor: float = RIDGE_FACTOR) -> CovarianceRecord:
    """Sample covariance (ddof=1) of encoded rows, inverted after ridging.

    ridge = ridge_factor * trace / d keeps collinear covariates invertible.
    """
    encoded = np.atleast_2d(np.asarray(encoded, dtype=np.float64))
    n, d = encoded.shape
    if n < 2:
        raise ComputationError("covariance needs at least two rows")
    centered = encoded - encoded.mean(axis=0)
    matrix = (centered.T @ centered) / (n - 1)
    matrix = (matrix + matrix.T) / 2.0
    ridge = ridge_factor * float(np.trace(matrix)) / d
    try:
        inverse = np.linalg.inv(matrix + ridge * np.eye(d))
    except np.linalg.LinAlgError as exc:
        raise ComputationError(
            f"covariance is singular even after ridge {ridge:g}; "
            "increase the ridge factor"
        ) from exc
    inverse = (inverse + inverse.T) / 2.0
    if not np.all(np.isfinite(inverse)):
        raise ComputationError(
            f"covariance inverse is non-finite at ridge {ridge:g}; "
            "increase the ridge factor"
        )
    return CovarianceRecord(matrix=matrix, inverse=inverse, ridge=ridge)


def mahalanobis_distance(x: np.ndarray, y: np.ndarray, cov: CovarianceRecord) -> float:
    """sqrt((x-y)' inverse (x-y)); errors on non-finite results."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.shape[0] != cov.inverse.shape[0]:
        raise ComputationError("mahalanobis_distance: dimension mismatch")
    diff = x - y
    quad = float(diff @ cov.inverse @ diff)
    if not np.isfinite(quad):
        raise ComputationError(
            "mahalanobis distance is non-finite; refit the covariance "
            "with a larger ridge"
        )
    if quad < 0:
        # The symmetrized inverse can produce a tiny negative on identical
        # points; anything materially negative means a broken inverse.
        if quad < -1e-9:
            raise ComputationError(
                "mahalanobis quadratic form is negative; refit the covariance "
                "with a larger ridge"
            )
        quad = 0.0
    return float(np.sqrt(quad))


def whitening_transform(cov: CovarianceRecord) -> np.ndarray:
    """Matrix L with inverse = L L'; Euclidean distance between x@L and y@L
    equals the Mahalanobis distance between x and y."""
    try:
        lower = np.linalg.cholesky(cov.inverse)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(
            "covariance inverse is not positive definite; "
            "refit with a larger ridge"
        ) from exc
    return lower
