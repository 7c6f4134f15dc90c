from .counterfactual import (
    CounterfactualResult,
    MatchConfig,
    METHOD_EUCLIDEAN,
    METHOD_MAHALANOBIS,
    METHOD_PROPENSITY,
    METHODS,
    POLICIES,
    POLICY_AUTO,
    POLICY_BRUTE,
    POLICY_SPATIAL,
    compute_counterfactual,
    default_cf_size,
)
from .distances import (
    CovarianceRecord,
    fit_covariance,
    mahalanobis_distance,
    point_to_set_distance,
    squared_distances_to_set,
    whitening_transform,
)
from .kdtree import NNIndex, linear_scan_min_distances
from .propensity import (
    PropensityModel,
    fit_logistic,
    fit_propensity,
    objective_and_gradient,
    sigmoid,
)

__all__ = [
    "CounterfactualResult",
    "CovarianceRecord",
    "MatchConfig",
    "METHOD_EUCLIDEAN",
    "METHOD_MAHALANOBIS",
    "METHOD_PROPENSITY",
    "METHODS",
    "NNIndex",
    "POLICIES",
    "POLICY_AUTO",
    "POLICY_BRUTE",
    "POLICY_SPATIAL",
    "PropensityModel",
    "compute_counterfactual",
    "default_cf_size",
    "fit_covariance",
    "fit_logistic",
    "fit_propensity",
    "linear_scan_min_distances",
    "mahalanobis_distance",
    "objective_and_gradient",
    "point_to_set_distance",
    "sigmoid",
    "squared_distances_to_set",
    "whitening_transform",
]
