"""Inclusion filters: a small conjunctive expression language plus partition.

Grammar:  clause ("AND" clause)*
  numeric clause      name OP number        OP in  < <= > >= =
  numeric interval    name IN [lo, hi]      both bounds inclusive
  categorical clause  name IN {v1, v2, ...}
  categorical sugar   name = value          (single-member set)

OR is reserved and rejected. Errors carry the character position of the
offending token. A filter partitions rows into included (all clauses hold)
and excluded (at least one fails): two disjoint, exhaustive index lists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import FilterError, UnknownFeatureError
from .tabular import CATEGORICAL, Dataset, NUMERIC, parse_number


@dataclass(frozen=True)
class RangeClause:
    """Numeric bound(s); a missing bound means unbounded on that side."""

    feature: str
    min: float | None = None
    max: float | None = None
    min_inclusive: bool = True
    max_inclusive: bool = True

    def __post_init__(self):
        if self.min is None and self.max is None:
            raise FilterError(f"clause on {self.feature!r} has no bounds")
        if self.min is not None and self.max is not None and self.min > self.max:
            raise FilterError(
                f"clause on {self.feature!r}: lower bound {self.min} "
                f"exceeds upper bound {self.max}"
            )

    def mask(self, column: np.ndarray) -> np.ndarray:
        keep = np.ones(len(column), dtype=bool)
        if self.min is not None:
            keep &= column >= self.min if self.min_inclusive else column > self.min
        if self.max is not None:
            keep &= column <= self.max if self.max_inclusive else column < self.max
        return keep

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"feature": self.feature, "type": "range"}
        if self.min is not None:
            doc["min"] = self.min
            doc["minInclusive"] = self.min_inclusive
        if self.max is not None:
            doc["max"] = self.max
            doc["maxInclusive"] = self.max_inclusive
        return doc


@dataclass(frozen=True)
class SetClause:
    feature: str
    values: tuple[str, ...]

    def __post_init__(self):
        if not self.values:
            raise FilterError(f"clause on {self.feature!r} has an empty value set")

    def mask(self, column: np.ndarray) -> np.ndarray:
        return np.isin(column, np.asarray(self.values, dtype=object))

    def to_json(self) -> dict[str, Any]:
        return {"feature": self.feature, "type": "set", "values": list(self.values)}


Clause = Union[RangeClause, SetClause]


@dataclass(frozen=True)
class FilterSpec:
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if not self.clauses:
            raise FilterError("a filter needs at least one clause")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(c.feature for c in self.clauses)

    def validate(self, dataset: Dataset) -> None:
        """Check every clause against the dataset's features and kinds."""
        for clause in self.clauses:
            feature = dataset.feature(clause.feature)
            if isinstance(clause, RangeClause) and feature.kind != NUMERIC:
                raise FilterError(
                    f"range clause on categorical feature {clause.feature!r}"
                )
            if isinstance(clause, SetClause) and feature.kind != CATEGORICAL:
                raise FilterError(f"set clause on numeric feature {clause.feature!r}")

    def row_mask(self, dataset: Dataset) -> np.ndarray:
        self.validate(dataset)
        keep = np.ones(dataset.row_count, dtype=bool)
        for clause in self.clauses:
            keep &= clause.mask(dataset.column(clause.feature))
        return keep

    def matches_row(self, row: Mapping[str, float | str]) -> bool:
        """Scalar predicate; slow path used by tests and row inspection."""
        for clause in self.clauses:
            value = row[clause.feature]
            if isinstance(clause, RangeClause):
                ok = True
                if clause.min is not None:
                    ok = value >= clause.min if clause.min_inclusive else value > clause.min
                if ok and clause.max is not None:
                    ok = value <= clause.max if clause.max_inclusive else value < clause.max
            else:
                ok = str(value) in clause.values
            if not ok:
                return False
        return True

    def to_json(self) -> dict[str, Any]:
        return {"clauses": [c.to_json() for c in self.clauses]}

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "FilterSpec":
        if not isinstance(doc, Mapping) or "clauses" not in doc:
            raise FilterError('filter JSON must be an object with a "clauses" list')
        clauses: list[Clause] = []
        for i, raw in enumerate(doc["clauses"]):
            kind = raw.get("type")
            feature = raw.get("feature")
            if not isinstance(feature, str) or not feature:
                raise FilterError(f"clause {i}: missing feature name")
            if kind == "range":
                clauses.append(
                    RangeClause(
                        feature=feature,
                        min=None if raw.get("min") is None else float(raw["min"]),
                        max=None if raw.get("max") is None else float(raw["max"]),
                        min_inclusive=bool(raw.get("minInclusive", True)),
                        max_inclusive=bool(raw.get("maxInclusive", True)),
                    )
                )
            elif kind == "set":
                values = raw.get("values")
                if not isinstance(values, (list, tuple)):
                    raise FilterError(f"clause {i}: set clause needs a values list")
                clauses.append(SetClause(feature=feature, values=tuple(str(v) for v in values)))
            else:
                raise FilterError(f'clause {i}: type must be "range" or "set"')
        return cls(tuple(clauses))


@dataclass(frozen=True)
class SubsetPartition:
    filter: FilterSpec
    included: tuple[int, ...]
    excluded: tuple[int, ...]

    @property
    def included_array(self) -> np.ndarray:
        return np.asarray(self.included, dtype=np.intp)

    @property
    def excluded_array(self) -> np.ndarray:
        return np.asarray(self.excluded, dtype=np.intp)


def partition(dataset: Dataset, spec: FilterSpec) -> SubsetPartition:
    """Split all row indices by the filter predicate. Either side may be empty."""
    keep = spec.row_mask(dataset)
    indices = np.arange(dataset.row_count)
    return SubsetPartition(
        filter=spec,
        included=tuple(int(i) for i in indices[keep]),
        excluded=tuple(int(i) for i in indices[~keep]),
    )


# --- expression parsing ---

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><=|>=|<|>|=)
  | (?P<punct>[\[\]{},])
  | (?P<word>[^\s<>=\[\]{},]+)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"AND", "IN", "OR"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "op" | "punct" | "word" | "end"
    text: str
    position: int


def _tokenize(expression: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(expression):
        match = _TOKEN_RE.match(expression, pos)
        if match is None:  # pragma: no cover - the word class is a catch-all
            raise FilterError(f"cannot read filter at position {pos}", position=pos)
        if match.lastgroup != "ws":
            tokens.append(_Token(match.lastgroup, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("end", "", len(expression)))
    return tokens


class _Parser:
    def __init__(self, expression: str, dataset: Dataset):
        self.tokens = _tokenize(expression)
        self.at = 0
        self.dataset = dataset

    def peek(self) -> _Token:
        return self.tokens[self.at]

    def advance(self) -> _Token:
        token = self.tokens[self.at]
        self.at += 1
        return token

    def fail(self, message: str, token: _Token):
        raise FilterError(f"{message} at position {token.position}", position=token.position)

    def expect_punct(self, text: str) -> _Token:
        token = self.advance()
        if token.kind != "punct" or token.text != text:
            self.fail(f"expected {text!r}, found {token.text!r}", token)
        return token

    def number(self) -> float:
        token = self.advance()
        value = parse_number(token.text) if token.kind == "word" else None
        if value is None:
            self.fail(f"expected a number, found {token.text!r}", token)
        return value

    def parse(self) -> FilterSpec:
        clauses = [self.clause()]
        while True:
            token = self.peek()
            if token.kind == "end":
                break
            if token.kind == "word" and token.text == "AND":
                self.advance()
                clauses.append(self.clause())
            elif token.kind == "word" and token.text == "OR":
                self.fail("OR is reserved and not supported", token)
            else:
                self.fail(f"expected AND or end of filter, found {token.text!r}", token)
        return FilterSpec(tuple(clauses))

    def clause(self) -> Clause:
        name_token = self.advance()
        if name_token.kind != "word" or name_token.text in _KEYWORDS:
            self.fail("expected a feature name", name_token)
        name = name_token.text
        if not self.dataset.has_feature(name):
            raise UnknownFeatureError(
                f"unknown feature {name!r} at position {name_token.position}"
            )
        kind = self.dataset.feature(name).kind

        token = self.advance()
        if token.kind == "op":
            return self.comparison(name, kind, token)
        if token.kind == "word" and token.text == "IN":
            opener = self.advance()
            if opener.kind == "punct" and opener.text == "[":
                return self.interval(name, kind, opener)
            if opener.kind == "punct" and opener.text == "{":
                return self.value_set(name, kind, opener)
            self.fail("expected [ or { after IN", opener)
        self.fail(f"expected an operator or IN, found {token.text!r}", token)

    def comparison(self, name: str, kind: str, op: _Token) -> Clause:
        if kind == CATEGORICAL:
            # Equality on a categorical feature means single-value membership.
            if op.text != "=":
                self.fail(f"ordering comparison on categorical feature {name!r}", op)
            token = self.advance()
            if token.kind != "word" or token.text in _KEYWORDS:
                self.fail("expected a category value", token)
            return SetClause(feature=name, values=(token.text,))
        value = self.number()
        if op.text == "<":
            return RangeClause(feature=name, max=value, max_inclusive=False)
        if op.text == "<=":
            return RangeClause(feature=name, max=value)
        if op.text == ">":
            return RangeClause(feature=name, min=value, min_inclusive=False)
        if op.text == ">=":
            return RangeClause(feature=name, min=value)
        return RangeClause(feature=name, min=value, max=value)

    def interval(self, name: str, kind: str, opener: _Token) -> Clause:
        if kind != NUMERIC:
            self.fail(f"interval clause on categorical feature {name!r}", opener)
        low = self.number()
        self.expect_punct(",")
        high_token = self.peek()
        high = self.number()
        self.expect_punct("]")
        if low > high:
            self.fail(f"interval bounds out of order ({low} > {high})", high_token)
        return RangeClause(feature=name, min=low, max=high)

    def value_set(self, name: str, kind: str, opener: _Token) -> Clause:
        if kind != CATEGORICAL:
            self.fail(f"set clause on numeric feature {name!r}", opener)
        values: list[str] = []
        while True:
            token = self.advance()
            if token.kind != "word" or token.text in _KEYWORDS:
                self.fail("expected a category value", token)
            values.append(token.text)
            token = self.advance()
            if token.kind == "punct" and token.text == "}":
                break
            if not (token.kind == "punct" and token.text == ","):
                self.fail(f"expected , or }} in value set, found {token.text!r}", token)
        return SetClause(feature=name, values=tuple(values))


def parse_filter(expression: str, dataset: Dataset) -> FilterSpec:
    """Parse and validate a filter expression against a dataset."""
    if not expression or not expression.strip():
        raise FilterError("empty filter expression", position=0)
    spec = _Parser(expression, dataset).parse()
    spec.validate(dataset)
    return spec
