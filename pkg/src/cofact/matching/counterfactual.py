"""Counterfactual subset selection: the excluded rows most similar to the
included subset.

Every excluded row gets a similarity score -- its distance to the nearest
included row (Euclidean or Mahalanobis over standardized covariates), or
the smallest propensity-score gap to any included row. The counterfactual
is the cf_size lowest-scoring rows, ties broken by lowest row index. The
index_policy only changes how the scores are computed, never their values,
so the selection is identical under every policy.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Union

import numpy as np

from ..errors import ConfigError, EmptySubsetError
from ..filtering import SubsetPartition
from ..tabular import Dataset, fit_standardizer
from .distances import CovarianceRecord, fit_covariance, whitening_transform
from .kdtree import NNIndex, linear_scan_min_distances
from .propensity import (
    DEFAULT_L2,
    PropensityModel,
    fit_logistic,
)

METHOD_EUCLIDEAN = "euclidean_nn"
METHOD_MAHALANOBIS = "mahalanobis"
METHOD_PROPENSITY = "propensity"
METHODS = (METHOD_EUCLIDEAN, METHOD_MAHALANOBIS, METHOD_PROPENSITY)

POLICY_AUTO = "auto"
POLICY_BRUTE = "brute_force"
POLICY_SPATIAL = "spatial_index"
POLICIES = (POLICY_AUTO, POLICY_BRUTE, POLICY_SPATIAL)

# auto picks the kd-tree only where it beats a scan: low dimension and a
# large enough included set to amortize the build.
SPATIAL_MAX_DIM = 16
SPATIAL_MIN_INCLUDED = 256


def default_cf_size(n_included: int, n_excluded: int) -> int:
    """Default counterfactual cardinality: min(|included|, |excluded| / 4).

    Taking (nearly) all excluded rows would reproduce the excluded set
    itself and collapse the counterfactual comparison into the naive one;
    a quarter keeps the selection genuinely similarity-driven while staying
    large enough for stable group statistics, and one match per included
    row is the natural upper bound. Calibrated against brute-force runs on
    the synthetic confounder/direct-cause fixtures (see tools/).
    """
    return max(1, min(n_included, n_excluded // 4))


@dataclass(frozen=True)
class MatchConfig:
    covariates: tuple[str, ...]
    method: str = METHOD_EUCLIDEAN
    cf_size: int | None = None  # None -> default_cf_size at compute time
    index_policy: str = POLICY_AUTO
    standardize: bool = True
    allow_outcome_covariate: bool = False
    l2: float = DEFAULT_L2

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.index_policy not in POLICIES:
            raise ConfigError(f"unknown index policy {self.index_policy!r}")
        if not self.covariates:
            raise ConfigError("at least one covariate is required")
        if len(set(self.covariates)) != len(self.covariates):
            raise ConfigError("duplicate covariates")
        if self.cf_size is not None and self.cf_size < 1:
            raise ConfigError("cfSize must be at least 1")

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "method": self.method,
            "covariates": list(self.covariates),
            "cfSize": self.cf_size,
            "indexPolicy": self.index_policy,
        }
        if not self.standardize:
            doc["standardize"] = False
        if self.allow_outcome_covariate:
            doc["allowOutcomeCovariate"] = True
        if self.l2 != DEFAULT_L2:
            doc["l2"] = self.l2
        return doc

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "MatchConfig":
        if not isinstance(doc, Mapping):
            raise ConfigError("match config must be a JSON object")
        unknown = set(doc) - {
            "method", "covariates", "cfSize", "indexPolicy",
            "standardize", "allowOutcomeCovariate", "l2",
        }
        if unknown:
            raise ConfigError(f"unknown match config fields: {sorted(unknown)}")
        covariates = doc.get("covariates")
        if not isinstance(covariates, (list, tuple)):
            raise ConfigError('match config needs a "covariates" list')
        size = doc.get("cfSize")
        if size is not None:
            if not isinstance(size, int) or isinstance(size, bool):
                raise ConfigError("cfSize must be an integer")
        return cls(
            covariates=tuple(str(c) for c in covariates),
            method=doc.get("method", METHOD_EUCLIDEAN),
            cf_size=size,
            index_policy=doc.get("indexPolicy", POLICY_AUTO),
            standardize=bool(doc.get("standardize", True)),
            allow_outcome_covariate=bool(doc.get("allowOutcomeCovariate", False)),
            l2=float(doc.get("l2", DEFAULT_L2)),
        )


@dataclass(frozen=True)
class CounterfactualResult:
    counterfactual: tuple[int, ...]  # sorted row indices, subset of excluded
    score_per_row: dict[int, float]  # every excluded row -> similarity score
    config: MatchConfig  # with cf_size resolved
    method_artifacts: Optional[Union[PropensityModel, CovarianceRecord]] = None


def _use_spatial(policy: str, dimension: int, n_included: int) -> bool:
    if policy == POLICY_BRUTE:
        return False
    if policy == POLICY_SPATIAL:
        return True
    return dimension <= SPATIAL_MAX_DIM and n_included >= SPATIAL_MIN_INCLUDED


def _nn_scores(included: np.ndarray, excluded: np.ndarray, spatial: bool) -> np.ndarray:
    if spatial:
        return NNIndex(included).min_distances(excluded)
    return linear_scan_min_distances(excluded, included)


def _propensity_gap_scores(
    scores_included: np.ndarray, scores_excluded: np.ndarray, spatial: bool
) -> np.ndarray:
    """Min |propensity(excluded) - propensity(included)| per excluded row.

    The 1-d minimum is always attained at one of the two order-neighbors of
    the query in the sorted included scores, so the searchsorted path and a
    full pairwise scan give the same values.
    """
    if spatial:
        ordered = np.sort(scores_included)
        right = np.searchsorted(ordered, scores_excluded)
        left = np.clip(right - 1, 0, len(ordered) - 1)
        right = np.clip(right, 0, len(ordered) - 1)
        return np.minimum(
            np.abs(scores_excluded - ordered[left]),
            np.abs(scores_excluded - ordered[right]),
        )
    gaps = np.abs(scores_excluded[:, None] - scores_included[None, :])
    return gaps.min(axis=1)


def compute_counterfactual(
    dataset: Dataset,
    partition: SubsetPartition,
    config: MatchConfig,
    outcome: str | None = None,
) -> CounterfactualResult:
    """Score every excluded row and select the cf_size most similar.

    Covariates must not overlap the filter's features (the dimensions the
    subsets differ on by construction) and must not include the outcome
    unless explicitly allowed.
    """
    if not partition.included or not partition.excluded:
        raise EmptySubsetError("counterfactual undefined without both subsets")

    filter_features = set(partition.filter.feature_names)
    for name in config.covariates:
        dataset.feature(name)  # raises on unknown
        if name in filter_features:
            raise ConfigError(
                f"covariate {name!r} is a filter feature; the subsets differ "
                "on it by construction"
            )
        if outcome is not None and name == outcome and not config.allow_outcome_covariate:
            raise ConfigError(
                f"covariate {name!r} is the outcome; matching on it would "
                "erase the effect under study (set allowOutcomeCovariate to "
                "override)"
            )

    n_included = len(partition.included)
    n_excluded = len(partition.excluded)
    k = config.cf_size
    if k is None:
        k = default_cf_size(n_included, n_excluded)
    if not 1 <= k <= n_excluded:
        raise ConfigError(
            f"cfSize {k} out of range: must be between 1 and |excluded| = {n_excluded}"
        )

    view = fit_standardizer(dataset, list(config.covariates), standardize=config.standardize)
    included = view.transform(partition.included_array)
    excluded = view.transform(partition.excluded_array)
    spatial = _use_spatial(config.index_policy, view.encoded_width, n_included)

    artifacts: Optional[Union[PropensityModel, CovarianceRecord]] = None
    if config.method == METHOD_EUCLIDEAN:
        scores = _nn_scores(included, excluded, spatial)
    elif config.method == METHOD_MAHALANOBIS:
        cov = fit_covariance(view.transform())
        whiten = whitening_transform(cov)
        scores = _nn_scores(included @ whiten, excluded @ whiten, spatial)
        artifacts = cov
    else:
        labels = np.zeros(dataset.row_count, dtype=np.float64)
        labels[partition.included_array] = 1.0
        model = fit_logistic(view.transform(), labels, l2=config.l2)
        propensity = model.predict(view.transform())
        scores = _propensity_gap_scores(
            propensity[partition.included_array],
            propensity[partition.excluded_array],
            spatial,
        )
        artifacts = model

    order = np.lexsort((np.arange(n_excluded), scores))
    excluded_ids = partition.excluded_array
    chosen = np.sort(excluded_ids[order[:k]])
    return CounterfactualResult(
        counterfactual=tuple(int(i) for i in chosen),
        score_per_row={int(r): float(s) for r, s in zip(excluded_ids, scores)},
        config=dataclasses.replace(config, cf_size=k),
        method_artifacts=artifacts,
    )
