"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the HTTP layer and
the CLI can map failures without string matching.
"""


class CofactError(Exception):
    """Base class for all package errors."""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DataFormatError(CofactError):
    """Malformed input data (CSV structure, unparseable values)."""

    code = "DATA_FORMAT"


class MissingValueError(DataFormatError):
    """A cell is empty and the load policy is to reject."""

    code = "MISSING_VALUE"


class UnknownFeatureError(CofactError):
    """A referenced feature name does not exist in the dataset."""

    code = "UNKNOWN_FEATURE"


class FilterError(CofactError):
    """Invalid filter expression or filter specification.

    ``position`` is the 0-based character offset of the offending token when
    the error came from the expression parser, else None.
    """

    code = "FILTER_INVALID"

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class ConfigError(CofactError):
    """Invalid matching or report configuration."""

    code = "CONFIG_INVALID"


class EmptySubsetError(CofactError):
    """Included or excluded subset is empty; counterfactual is undefined."""

    code = "EMPTY_SUBSET"


class ComputationError(CofactError):
    """A numeric computation produced an unusable result."""

    code = "COMPUTATION"


class GraphError(CofactError):
    """Invalid causal graph or generation specification."""

    code = "GRAPH_INVALID"
