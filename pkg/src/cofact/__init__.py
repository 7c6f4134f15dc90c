"""cofact: counterfactual subset comparison for tabular data.

Filter a dataset into included/excluded subsets, find the excluded rows
most similar to the included ones (the counterfactual subset), and compare
the outcome across both cuts to see whether the naive gap survives.
"""

from .diagnostics import (
    AnalysisReport,
    BalanceReport,
    GroupComparison,
    SupportThresholds,
    build_report,
    compare_groups,
    standardized_mean_difference,
)
from .errors import (
    CofactError,
    ComputationError,
    ConfigError,
    DataFormatError,
    EmptySubsetError,
    FilterError,
    GraphError,
    MissingValueError,
    UnknownFeatureError,
)
from .filtering import FilterSpec, SubsetPartition, parse_filter, partition
from .matching import MatchConfig, CounterfactualResult, compute_counterfactual
from .tabular import (
    Dataset,
    Feature,
    FeatureSummary,
    StandardizedView,
    dataset_to_csv_bytes,
    fit_standardizer,
    load_csv,
    summarize_feature,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BalanceReport",
    "CofactError",
    "ComputationError",
    "ConfigError",
    "CounterfactualResult",
    "DataFormatError",
    "Dataset",
    "EmptySubsetError",
    "Feature",
    "FeatureSummary",
    "FilterError",
    "FilterSpec",
    "GraphError",
    "GroupComparison",
    "MatchConfig",
    "MissingValueError",
    "StandardizedView",
    "SubsetPartition",
    "SupportThresholds",
    "UnknownFeatureError",
    "build_report",
    "compare_groups",
    "compute_counterfactual",
    "dataset_to_csv_bytes",
    "fit_standardizer",
    "load_csv",
    "parse_filter",
    "partition",
    "standardized_mean_difference",
    "summarize_feature",
]
