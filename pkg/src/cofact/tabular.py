"""Immutable tabular datasets: loading, typing, summaries, standardization.

A Dataset is column-major: numeric features are float64 arrays, categorical
features are string arrays. Row index is the permanent identity of a record;
all downstream subsets are index lists into one shared Dataset.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Mapping, Sequence

import numpy as np

from .errors import DataFormatError, MissingValueError, UnknownFeatureError

NUMERIC = "numeric"
CATEGORICAL = "categorical"

REJECT_MISSING = "reject"
DROP_MISSING = "drop"

# Decimal or scientific notation; deliberately excludes nan/inf/underscores.
_NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

# One-hot indicators are scaled so that two rows differing in one category
# are exactly distance 1 apart (two coordinates differ by 1/sqrt(2) each).
ONE_HOT_SCALE = 1.0 / math.sqrt(2.0)


def parse_number(token: str) -> float | None:
    """Parse a finite decimal/scientific literal; None when not numeric."""
    if not _NUMBER_RE.match(token):
        return None
    value = float(token)
    if not math.isfinite(value):
        return None
    return value


@dataclass(frozen=True)
class Feature:
    """A typed column. ``index`` is the 0-based column position."""

    name: str
    kind: str
    index: int


@dataclass(frozen=True)
class FeatureSummary:
    feature: Feature
    count: int
    minimum: float | None = None
    maximum: float | None = None
    mean: float | None = None
    std: float | None = None
    categories: dict[str, int] | None = None


class Dataset:
    """Immutable typed table. Construct via load_csv or from_columns."""

    def __init__(
        self,
        features: Sequence[Feature],
        columns: Sequence[np.ndarray],
        dropped_row_count: int = 0,
    ):
        if len(features) != len(columns):
            raise ValueError("features and columns must align")
        names = [f.name for f in features]
        if len(set(names)) != len(names):
            raise DataFormatError("duplicate feature names")
        lengths = {len(c) for c in columns}
        if len(lengths) > 1:
            raise ValueError("all columns must have the same length")
        self._features = tuple(features)
        self._columns = tuple(columns)
        for col in self._columns:
            col.setflags(write=False)
        self._by_name = {f.name: f for f in self._features}
        self._row_count = len(columns[0]) if columns else 0
        self.dropped_row_count = dropped_row_count

    @property
    def features(self) -> tuple[Feature, ...]:
        return self._features

    @property
    def row_count(self) -> int:
        return self._row_count

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self._features]

    def has_feature(self, name: str) -> bool:
        return name in self._by_name

    def feature(self, name: str) -> Feature:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownFeatureError(f"unknown feature {name!r}") from None

    def column(self, name: str) -> np.ndarray:
        return self._columns[self.feature(name).index]

    def numeric_features(self) -> list[Feature]:
        return [f for f in self._features if f.kind == NUMERIC]

    def row(self, index: int) -> dict[str, float | str]:
        """Row as a plain mapping (floats for numeric, strings otherwise)."""
        out: dict[str, float | str] = {}
        for f, col in zip(self._features, self._columns):
            value = col[index]
            out[f.name] = float(value) if f.kind == NUMERIC else str(value)
        return out

    def equals(self, other: "Dataset") -> bool:
        if self._features != other._features or self.row_count != other.row_count:
            return False
        for mine, theirs in zip(self._columns, other._columns):
            if not np.array_equal(mine, theirs):
                return False
        return True

    @classmethod
    def from_columns(
        cls,
        columns: Mapping[str, Sequence],
        kinds: Mapping[str, str] | None = None,
    ) -> "Dataset":
        """Build a dataset from in-memory columns.

        Without an explicit kind, float-convertible columns become numeric
        and everything else categorical.
        """
        kinds = dict(kinds or {})
        features: list[Feature] = []
        arrays: list[np.ndarray] = []
        for index, (name, values) in enumerate(columns.items()):
            kind = kinds.get(name)
            if kind is None:
                try:
                    arr = np.asarray(values, dtype=np.float64)
                    kind = NUMERIC
                except (TypeError, ValueError):
                    kind = CATEGORICAL
            if kind == NUMERIC:
                arr = np.asarray(values, dtype=np.float64)
                if arr.size and not np.all(np.isfinite(arr)):
                    raise DataFormatError(f"column {name!r} has non-finite values")
            elif kind == CATEGORICAL:
                arr = np.asarray([str(v) for v in values], dtype=object)
            else:
                raise DataFormatError(f"unknown kind {kind!r} for column {name!r}")
            features.append(Feature(name=name, kind=kind, index=index))
            arrays.append(arr)
        return cls(features, arrays)


def _decode_source(source: bytes | str | BinaryIO) -> str:
    if isinstance(source, bytes):
        raw = source
    elif isinstance(source, str):
        return source
    else:
        raw = source.read()
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise DataFormatError(f"source is not valid UTF-8: {exc}") from exc


def load_csv(
    source: bytes | str | BinaryIO,
    type_hints: Mapping[str, str] | None = None,
    missing_policy: str = REJECT_MISSING,
) -> Dataset:
    """Load an RFC-4180-style CSV (comma delimiter, mandatory header).

    Column kinds are inferred -- numeric iff every value parses as a finite
    decimal -- unless overridden by ``type_hints``. Missing (empty) cells
    either abort the load (default) or drop the whole row, depending on
    ``missing_policy``; the dataset records how many rows were dropped.
    """
    if missing_policy not in (REJECT_MISSING, DROP_MISSING):
        raise ValueError(f"unknown missing policy {missing_policy!r}")
    text = _decode_source(source)
    reader = csv.reader(io.StringIO(text))

    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("empty input: no header row") from None
    if not header or all(name.strip() == "" for name in header):
        raise DataFormatError("empty header row")
    for pos, name in enumerate(header):
        if name == "":
            raise DataFormatError(f"empty feature name at header column {pos + 1}")
    if len(set(header)) != len(header):
        raise DataFormatError("duplicate feature names in header")

    width = len(header)
    rows: list[list[str]] = []
    dropped = 0
    for record in reader:
        if not record:
            continue  # blank trailing line
        line = reader.line_num
        if len(record) != width:
            raise DataFormatError(
                f"line {line}: expected {width} fields, got {len(record)}"
            )
        missing_at = [i for i, cell in enumerate(record) if cell == ""]
        if missing_at:
            if missing_policy == REJECT_MISSING:
                raise MissingValueError(
                    f"line {line}: missing value in column {header[missing_at[0]]!r}"
                )
            dropped += 1
            continue
        rows.append(record)

    hints = dict(type_hints or {})
    for name, kind in hints.items():
        if name not in header:
            raise UnknownFeatureError(f"type hint for unknown feature {name!r}")
        if kind not in (NUMERIC, CATEGORICAL):
            raise DataFormatError(f"type hint for {name!r} must be numeric|categorical")

    features: list[Feature] = []
    columns: list[np.ndarray] = []
    for index, name in enumerate(header):
        cells = [r[index] for r in rows]
        hinted = hints.get(name)
        if hinted == CATEGORICAL:
            kind = CATEGORICAL
        elif hinted == NUMERIC:
            kind = NUMERIC
        else:
            kind = NUMERIC if all(parse_number(c) is not None for c in cells) else CATEGORICAL
        if kind == NUMERIC:
            values = np.empty(len(cells), dtype=np.float64)
            for i, cell in enumerate(cells):
                number = parse_number(cell)
                if number is None:
                    raise DataFormatError(
                        f"column {name!r}, row {i + 1}: {cell!r} is not a finite number"
                    )
                values[i] = number
            columns.append(values)
        else:
            columns.append(np.asarray(cells, dtype=object))
        features.append(Feature(name=name, kind=kind, index=index))

    return Dataset(features, columns, dropped_row_count=dropped)


def dataset_to_csv_bytes(dataset: Dataset) -> bytes:
    """Serialize back to CSV. Floats use repr, so reloading round-trips."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(dataset.feature_names)
    numeric = [f.kind == NUMERIC for f in dataset.features]
    raw_columns = [dataset.column(f.name) for f in dataset.features]
    for i in range(dataset.row_count):
        writer.writerow(
            [
                repr(float(col[i])) if is_num else str(col[i])
                for col, is_num in zip(raw_columns, numeric)
            ]
        )
    return buffer.getvalue().encode("utf-8")


def summarize_feature(dataset: Dataset, name: str) -> FeatureSummary:
    """Exact summary statistics over all rows (sample sd, ddof=1)."""
    feature = dataset.feature(name)
    column = dataset.column(name)
    count = int(len(column))
    if feature.kind == CATEGORICAL:
        counts: dict[str, int] = {}
        for value in column:
            counts[value] = counts.get(value, 0) + 1
        return FeatureSummary(feature=feature, count=count, categories=counts)
    if count == 0:
        return FeatureSummary(feature=feature, count=0)
    std = float(np.std(column, ddof=1)) if count > 1 else 0.0
    return FeatureSummary(
        feature=feature,
        count=count,
        minimum=float(np.min(column)),
        maximum=float(np.max(column)),
        mean=float(np.mean(column)),
        std=std,
    )


@dataclass(frozen=True)
class NumericScaler:
    name: str
    mean: float
    std: float
    zero_variance: bool


@dataclass(frozen=True)
class CategoryEncoder:
    name: str
    categories: tuple[str, ...]


class StandardizedView:
    """Fitted encoding of selected features into one numeric matrix.

    Numeric features are z-scored against the fit population (sample sd);
    zero-variance columns map to constant 0 and are flagged. Categorical
    features are one-hot encoded with indicators scaled by 1/sqrt(2). With
    ``standardize=False`` numeric features pass through untouched (the raw
    distance switch); the categorical encoding is unchanged.
    """

    def __init__(
        self,
        source: Dataset,
        encoders: Sequence[NumericScaler | CategoryEncoder],
        standardize: bool,
    ):
        self.source = source
        self.encoders = tuple(encoders)
        self.standardize = standardize
        self.feature_names = [e.name for e in self.encoders]
        width = 0
        labels: list[str] = []
        for enc in self.encoders:
            if isinstance(enc, NumericScaler):
                width += 1
                labels.append(enc.name)
            else:
                width += len(enc.categories)
                labels.extend(f"{enc.name}={c}" for c in enc.categories)
        self.encoded_width = width
        self.column_labels = labels

    @property
    def zero_variance_features(self) -> list[str]:
        return [
            e.name
            for e in self.encoders
            if isinstance(e, NumericScaler) and e.zero_variance
        ]

    def transform(self, row_indices: Iterable[int] | None = None) -> np.ndarray:
        """Encode the given rows (default: all) into an (n, width) matrix."""
        if row_indices is None:
            take = None
            n = self.source.row_count
        else:
            take = np.asarray(list(row_indices), dtype=np.intp)
            n = len(take)
        out = np.zeros((n, self.encoded_width), dtype=np.float64)
        pos = 0
        for enc in self.encoders:
            column = self.source.column(enc.name)
            if take is not None:
                column = column[take]
            if isinstance(enc, NumericScaler):
                if not self.standardize:
                    out[:, pos] = column
                elif enc.zero_variance:
                    out[:, pos] = 0.0
                else:
                    out[:, pos] = (column - enc.mean) / enc.std
                pos += 1
            else:
                for category in enc.categories:
                    out[:, pos] = (column == category) * ONE_HOT_SCALE
                    pos += 1
        return out


def fit_standardizer(
    dataset: Dataset,
    features: Sequence[str],
    standardize: bool = True,
) -> StandardizedView:
    """Fit scaling/encoding parameters on the full dataset."""
    if not features:
        raise ValueError("at least one feature is required")
    if dataset.row_count == 0:
        raise DataFormatError("cannot fit a standardizer on an empty dataset")
    encoders: list[NumericScaler | CategoryEncoder] = []
    for name in features:
        feature = dataset.feature(name)
        column = dataset.column(name)
        if feature.kind == NUMERIC:
            mean = float(np.mean(column))
            std = float(np.std(column, ddof=1)) if len(column) > 1 else 0.0
            encoders.append(
                NumericScaler(
                    name=name, mean=mean, std=std, zero_variance=(std == 0.0)
                )
            )
        else:
            categories = tuple(sorted(set(column)))
            encoders.append(CategoryEncoder(name=name, categories=categories))
    return StandardizedView(dataset, encoders, standardize=standardize)
