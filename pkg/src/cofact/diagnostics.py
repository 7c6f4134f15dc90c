"""Outcome comparisons and covariate balance for a counterfactual analysis.

The report pairs two views of the same outcome: the naive comparison
(included vs. excluded) and the counterfactual comparison (included vs. the
matched counterfactual rows). If removing the filter's effect via matching
shrinks the outcome gap, the naive association was carried by the matched
covariates; if the gap survives, the association is supported. The
weakened/preserved thresholds are this tool's own convention and are
reported alongside the numbers, never applied silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import ConfigError, EmptySubsetError
from .filtering import SubsetPartition
from .matching.counterfactual import CounterfactualResult
from .tabular import CategoryEncoder, Dataset, NUMERIC, fit_standardizer

REPORT_VERSION = 1

SUPPORT_WEAKENED = "weakened"
SUPPORT_PRESERVED = "preserved"
SUPPORT_INDETERMINATE = "indeterminate"

DEFAULT_BINS = 20


@dataclass(frozen=True)
class SupportThresholds:
    """weakened iff ratio < weakened_below; preserved iff ratio >= preserved_at_least;
    naive gaps under gap_epsilon pooled-sd units are treated as negligible."""

    weakened_below: float = 0.5
    preserved_at_least: float = 0.7
    gap_epsilon: float = 0.05

    def to_json(self) -> dict[str, float]:
        return {
            "weakenedBelow": self.weakened_below,
            "preservedAtLeast": self.preserved_at_least,
            "gapEpsilon": self.gap_epsilon,
        }


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts_a: np.ndarray
    counts_b: np.ndarray

    def to_json(self) -> dict[str, list]:
        return {
            "binEdges": [float(e) for e in self.bin_edges],
            "countsA": [int(c) for c in self.counts_a],
            "countsB": [int(c) for c in self.counts_b],
        }


@dataclass(frozen=True)
class GroupComparison:
    outcome: str
    group_a_mean: float
    group_b_mean: float
    mean_difference: float  # a - b
    cohens_d: float  # signed; +/-inf when pooled sd is 0 with unequal means
    ks_statistic: float
    histogram: Histogram
    group_a_size: int
    group_b_size: int

    def to_json(self) -> dict[str, Any]:
        return {
            "outcome": self.outcome,
            "groupAMean": self.group_a_mean,
            "groupBMean": self.group_b_mean,
            "meanDifference": self.mean_difference,
            "cohensD": _finite_or_none(self.cohens_d),
            "cohensDDefined": bool(math.isfinite(self.cohens_d)),
            "ksStatistic": self.ks_statistic,
            "groupASize": self.group_a_size,
            "groupBSize": self.group_b_size,
            "histogram": self.histogram.to_json(),
        }


@dataclass(frozen=True)
class CovariateBalance:
    feature: str
    smd_naive: float
    smd_counterfactual: float

    def to_json(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "smdNaive": _finite_or_none(self.smd_naive),
            "smdCounterfactual": _finite_or_none(self.smd_counterfactual),
        }


@dataclass(frozen=True)
class BalanceReport:
    per_covariate: tuple[CovariateBalance, ...]
    max_smd_naive: float
    max_smd_cf: float

    def to_json(self) -> dict[str, Any]:
        return {
            "perCovariate": [b.to_json() for b in self.per_covariate],
            "maxSmdNaive": _finite_or_none(self.max_smd_naive),
            "maxSmdCf": _finite_or_none(self.max_smd_cf),
            "smdDefined": bool(
                math.isfinite(self.max_smd_naive) and math.isfinite(self.max_smd_cf)
            ),
        }


@dataclass(frozen=True)
class AnalysisReport:
    outcome: str
    partition: SubsetPartition
    cf_result: CounterfactualResult
    naive: GroupComparison
    counterfactual: GroupComparison
    balance: BalanceReport
    support_ratio: Optional[float]  # None when the naive gap is exactly 0
    support_class: str
    naive_gap_negligible: bool
    thresholds: SupportThresholds = field(default_factory=SupportThresholds)

    def to_json(self) -> dict[str, Any]:
        return {
            "reportVersion": REPORT_VERSION,
            "outcome": self.outcome,
            "filter": self.partition.filter.to_json(),
            "match": self.cf_result.config.to_json(),
            "partition": {
                "includedCount": len(self.partition.included),
                "excludedCount": len(self.partition.excluded),
                "counterfactualCount": len(self.cf_result.counterfactual),
            },
            "naive": self.naive.to_json(),
            "counterfactual": self.counterfactual.to_json(),
            "balance": self.balance.to_json(),
            "support": {
                "ratio": _finite_or_none(self.support_ratio),
                "class": self.support_class,
                "naiveGapNegligible": self.naive_gap_negligible,
                "thresholds": self.thresholds.to_json(),
            },
        }


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def standardized_mean_difference(values_a: np.ndarray, values_b: np.ndarray) -> float:
    """|mean_a - mean_b| / sqrt((var_a + var_b) / 2), sample variances.

    0 when both groups are constant with equal means; +inf when they are
    constant (or jointly zero-variance) with unequal means.
    """
    a = np.asarray(values_a, dtype=np.float64)
    b = np.asarray(values_b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise EmptySubsetError("standardized mean difference needs nonempty samples")
    gap = abs(float(np.mean(a)) - float(np.mean(b)))
    var_a = float(np.var(a, ddof=1)) if a.size > 1 else 0.0
    var_b = float(np.var(b, ddof=1)) if b.size > 1 else 0.0
    denominator = math.sqrt((var_a + var_b) / 2.0)
    if denominator == 0.0:
        return 0.0 if gap == 0.0 else math.inf
    return gap / denominator


def ks_statistic(values_a: np.ndarray, values_b: np.ndarray) -> float:
    """Exact two-sample Kolmogorov-Smirnov statistic (max CDF gap)."""
    a = np.sort(np.asarray(values_a, dtype=np.float64))
    b = np.sort(np.asarray(values_b, dtype=np.float64))
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def pooled_sd(values_a: np.ndarray, values_b: np.ndarray) -> float:
    """Bessel-corrected pooled standard deviation of two samples."""
    a = np.asarray(values_a, dtype=np.float64)
    b = np.asarray(values_b, dtype=np.float64)
    dof = a.size + b.size - 2
    if dof <= 0:
        return 0.0
    ss_a = float(np.var(a, ddof=1)) * (a.size - 1) if a.size > 1 else 0.0
    ss_b = float(np.var(b, ddof=1)) * (b.size - 1) if b.size > 1 else 0.0
    return math.sqrt((ss_a + ss_b) / dof)


def _shared_edges(values: np.ndarray, bins: int) -> np.ndarray:
    low = float(np.min(values))
    high = float(np.max(values))
    if low == high:  # degenerate range: one centered unit-wide span
        low, high = low - 0.5, high + 0.5
    return np.linspace(low, high, bins + 1)


def compare_groups(
    dataset: Dataset,
    rows_a: Sequence[int],
    rows_b: Sequence[int],
    outcome: str,
    bins: int = DEFAULT_BINS,
    bin_edges: np.ndarray | None = None,
) -> GroupComparison:
    """Compare one numeric outcome across two row sets.

    Histograms share equal-width bins spanning the union range of both
    groups, unless explicit edges are passed (the report uses this to put
    naive and counterfactual histograms on identical axes).
    """
    if len(rows_a) == 0 or len(rows_b) == 0:
        raise EmptySubsetError("group comparison needs two nonempty row sets")
    feature = dataset.feature(outcome)
    if feature.kind != NUMERIC:
        raise ConfigError(f"outcome {outcome!r} must be numeric")
    if bins < 1:
        raise ConfigError("bin count must be at least 1")
    column = dataset.column(outcome)
    a = column[np.asarray(rows_a, dtype=np.intp)]
    b = column[np.asarray(rows_b, dtype=np.intp)]

    mean_a = float(np.mean(a))
    mean_b = float(np.mean(b))
    difference = mean_a - mean_b
    sd = pooled_sd(a, b)
    if difference == 0.0:
        d = 0.0
    elif sd == 0.0:
        d = math.copysign(math.inf, difference)
    else:
        d = difference / sd

    if bin_edges is None:
        bin_edges = _shared_edges(np.concatenate([a, b]), bins)
    else:
        bin_edges = np.asarray(bin_edges, dtype=np.float64)
    counts_a, _ = np.histogram(a, bins=bin_edges)
    counts_b, _ = np.histogram(b, bins=bin_edges)

    return GroupComparison(
        outcome=outcome,
        group_a_mean=mean_a,
        group_b_mean=mean_b,
        mean_difference=difference,
        cohens_d=d,
        ks_statistic=ks_statistic(a, b),
        histogram=Histogram(bin_edges=bin_edges, counts_a=counts_a, counts_b=counts_b),
        group_a_size=int(a.size),
        group_b_size=int(b.size),
    )


def _balance(
    dataset: Dataset,
    included: np.ndarray,
    excluded: np.ndarray,
    counterfactual: np.ndarray,
    covariates: Sequence[str],
) -> BalanceReport:
    """Per-covariate SMD for included-vs-excluded and included-vs-counterfactual.

    Categorical covariates are measured on their one-hot indicator columns;
    the reported value is the worst (largest) indicator SMD.
    """
    view = fit_standardizer(dataset, list(covariates), standardize=False)
    enc_inc = view.transform(included)
    enc_exc = view.transform(excluded)
    enc_cf = view.transform(counterfactual)
    entries = []
    position = 0
    for encoder in view.encoders:
        width = len(encoder.categories) if isinstance(encoder, CategoryEncoder) else 1
        naive = max(
            standardized_mean_difference(enc_inc[:, position + j], enc_exc[:, position + j])
            for j in range(width)
        )
        matched = max(
            standardized_mean_difference(enc_inc[:, position + j], enc_cf[:, position + j])
            for j in range(width)
        )
        entries.append(
            CovariateBalance(
                feature=encoder.name, smd_naive=naive, smd_counterfactual=matched
            )
        )
        position += width
    return BalanceReport(
        per_covariate=tuple(entries),
        max_smd_naive=max(e.smd_naive for e in entries),
        max_smd_cf=max(e.smd_counterfactual for e in entries),
    )


def build_report(
    dataset: Dataset,
    partition: SubsetPartition,
    cf_result: CounterfactualResult,
    outcome: str,
    bins: int = DEFAULT_BINS,
    thresholds: SupportThresholds = SupportThresholds(),
) -> AnalysisReport:
    """Assemble the full analysis: both comparisons, balance, support class."""
    if not cf_result.counterfactual:
        raise EmptySubsetError("counterfactual is empty")
    included = partition.included_array
    excluded = partition.excluded_array
    cf_rows = np.asarray(cf_result.counterfactual, dtype=np.intp)

    if dataset.feature(outcome).kind != NUMERIC:
        raise ConfigError(f"outcome {outcome!r} must be numeric")
    if bins < 1:
        raise ConfigError("bin count must be at least 1")
    # One set of bin edges spanning included+excluded covers the
    # counterfactual too (it is a subset of excluded), so all three
    # histogram series line up.
    column = dataset.column(outcome)
    edges = _shared_edges(np.concatenate([column[included], column[excluded]]), bins)

    naive = compare_groups(dataset, included, excluded, outcome, bins, bin_edges=edges)
    matched = compare_groups(dataset, included, cf_rows, outcome, bins, bin_edges=edges)

    naive_gap = abs(naive.mean_difference)
    spread = pooled_sd(column[included], column[excluded])
    negligible = naive_gap < thresholds.gap_epsilon * spread
    ratio = None if naive_gap == 0.0 else abs(matched.mean_difference) / naive_gap

    if negligible or ratio is None:
        support = SUPPORT_INDETERMINATE
    elif ratio < thresholds.weakened_below:
        support = SUPPORT_WEAKENED
    elif ratio >= thresholds.preserved_at_least:
        support = SUPPORT_PRESERVED
    else:
        support = SUPPORT_INDETERMINATE

    return AnalysisReport(
        outcome=outcome,
        partition=partition,
        cf_result=cf_result,
        naive=naive,
        counterfactual=matched,
        balance=_balance(
            dataset, included, excluded, cf_rows, cf_result.config.covariates
        ),
        support_ratio=ratio,
        support_class=support,
        naive_gap_negligible=negligible,
        thresholds=thresholds,
    )
