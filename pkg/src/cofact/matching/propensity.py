"""Propensity scores: penalized logistic regression of inclusion on covariates.

Fit by damped Newton with step halving on the penalized negative
log-likelihood. The L2 penalty applies to the weights only, never the
intercept; any lambda > 0 makes the objective strictly convex, so the
optimum is unique and refits from any start agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ComputationError, EmptySubsetError
from ..filtering import SubsetPartition
from ..tabular import Dataset, fit_standardizer

DEFAULT_L2 = 1e-3
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100
_MAX_HALVINGS = 40


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class PropensityModel:
    weights: np.ndarray
    intercept: float
    regularization: float
    converged: bool
    iterations: int

    def __post_init__(self):
        self.weights.setflags(write=False)

    def predict(self, encoded: np.ndarray) -> np.ndarray:
        """P(included = 1 | x) for encoded covariate rows; always in (0, 1)."""
        encoded = np.atleast_2d(np.asarray(encoded, dtype=np.float64))
        scores = sigmoid(encoded @ self.weights + self.intercept)
        # exp underflow can round to exactly 0/1; nudge back into the open
        # interval so downstream score gaps stay well-defined.
        tiny = np.finfo(np.float64).tiny
        return np.clip(scores, tiny, 1.0 - np.finfo(np.float64).epsneg)


def objective_and_gradient(
    theta: np.ndarray, encoded: np.ndarray, labels: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Penalized negative log-likelihood and its gradient.

    theta = (weights..., intercept); the penalty (l2/2)*||weights||^2 leaves
    the intercept free. Exposed separately so the gradient can be checked
    against finite differences.
    """
    theta = np.asarray(theta, dtype=np.float64)
    weights, intercept = theta[:-1], theta[-1]
    z = encoded @ weights + intercept
    # log(1 + exp(±z)) without overflow
    nll = float(np.sum(np.logaddexp(0.0, z) - labels * z))
    objective = nll + 0.5 * l2 * float(weights @ weights)
    residual = sigmoid(z) - labels
    gradient = np.empty_like(theta)
    gradient[:-1] = encoded.T @ residual + l2 * weights
    gradient[-1] = residual.sum()
    return objective, gradient


def fit_logistic(
    encoded: np.ndarray,
    labels: np.ndarray,
    l2: float = DEFAULT_L2,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    start: np.ndarray | None = None,
) -> PropensityModel:
    encoded = np.atleast_2d(np.asarray(encoded, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.float64)
    if encoded.shape[0] != labels.shape[0]:
        raise ComputationError("labels and rows must align")
    if l2 < 0:
        raise ComputationError("L2 strength must be nonnegative")
    n, d = encoded.shape

    theta = np.zeros(d + 1) if start is None else np.asarray(start, dtype=np.float64).copy()
    objective, gradient = objective_and_gradient(theta, encoded, labels, l2)
    converged = False
    iterations = 0
    penalty_diag = np.append(np.full(d, l2), 0.0)

    for iterations in range(1, max_iter + 1):
        if np.max(np.abs(gradient)) < tol:
            converged = True
            iterations -= 1
            break
        z = encoded @ theta[:-1] + theta[-1]
        p = sigmoid(z)
        curvature = p * (1.0 - p)
        design = np.hstack([encoded, np.ones((n, 1))])
        hessian = design.T @ (design * curvature[:, None]) + np.diag(penalty_diag)
        try:
            step = np.linalg.solve(hessian, -gradient)
        except np.linalg.LinAlgError:
            step = -gradient  # singular Hessian (l2=0, flat data): gradient descent
        scale = 1.0
        moved = False
        # Near the optimum the true decrease can round to a one-ulp rise;
        # allow that much slack so the final polish step is not rejected.
        ceiling = objective + 1e-12 * (1.0 + abs(objective))
        for _ in range(_MAX_HALVINGS):
            candidate = theta + scale * step
            cand_obj, cand_grad = objective_and_gradient(candidate, encoded, labels, l2)
            if np.isfinite(cand_obj) and cand_obj <= ceiling:
                moved = not np.array_equal(candidate, theta)
                theta, objective, gradient = candidate, cand_obj, cand_grad
                break
            scale *= 0.5
        else:
            break  # no acceptable step found; report non-convergence
        if not moved:
            break  # step underflowed against theta; no further progress possible
    else:
        iterations = max_iter

    if np.max(np.abs(gradient)) < tol:
        converged = True
    return PropensityModel(
        weights=theta[:-1].copy(),
        intercept=float(theta[-1]),
        regularization=float(l2),
        converged=converged,
        iterations=iterations,
    )


def fit_propensity(
    dataset: Dataset,
    partition: SubsetPartition,
    covariates: list[str] | tuple[str, ...],
    l2: float = DEFAULT_L2,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    standardize: bool = True,
) -> PropensityModel:
    """Fit P(included | covariates) over the whole partitioned dataset."""
    if not partition.included or not partition.excluded:
        raise EmptySubsetError("propensity fit needs both subsets nonempty")
    view = fit_standardizer(dataset, list(covariates), standardize=standardize)
    encoded = view.transform()
    labels = np.zeros(dataset.row_count, dtype=np.float64)
    labels[partition.included_array] = 1.0
    return fit_logistic(encoded, labels, l2=l2, max_iter=max_iter, tol=tol)
