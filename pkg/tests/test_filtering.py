import numpy as np
import pytest

from cofact.errors import FilterError, UnknownFeatureError
from cofact.filtering import (
    FilterSpec,
    RangeClause,
    SetClause,
    parse_filter,
    partition,
)
from cofact.tabular import Dataset

from conftest import csv_dataset


@pytest.fixture
def shop():
    return csv_dataset(
        "price,size,city\n"
        "10,1,austin\n"
        "20,2,boston\n"
        "30,3,austin\n"
        "40,4,chicago\n"
    )


# ---------------------------------------------------------------- grammar


def test_parse_single_comparison(shop):
    spec = parse_filter("price >= 20", shop)
    assert spec.clauses == (RangeClause(feature="price", min=20.0),)


def test_parse_conjunction_and_set(shop):
    spec = parse_filter("price >= 20 AND city IN {austin, boston}", shop)
    assert len(spec.clauses) == 2
    assert spec.clauses[0] == RangeClause(feature="price", min=20.0)
    assert spec.clauses[1] == SetClause(feature="city", values=("austin", "boston"))


def test_parse_interval(shop):
    spec = parse_filter("size IN [2, 3]", shop)
    assert spec.clauses == (RangeClause(feature="size", min=2.0, max=3.0),)


@pytest.mark.parametrize(
    "expr,expected",
    [
        ("price < 30", {0, 1}),
        ("price <= 30", {0, 1, 2}),
        ("price > 30", {3}),
        ("price >= 30", {2, 3}),
        ("price = 30", {2}),
        ("size IN [2, 3]", {1, 2}),
        ("city IN {austin}", {0, 2}),
        ("city = austin", {0, 2}),
        ("price > 10 AND city IN {austin, chicago}", {2, 3}),
    ],
)
def test_operator_semantics(shop, expr, expected):
    parts = partition(shop, parse_filter(expr, shop))
    assert set(parts.included) == expected
    assert set(parts.excluded) == set(range(4)) - expected


def test_categorical_equality_is_single_value_membership(shop):
    sugar = parse_filter("city = austin", shop)
    explicit = parse_filter("city IN {austin}", shop)
    assert sugar == explicit


def test_numbers_allow_sign_and_exponent(shop):
    spec = parse_filter("price >= -1.5e1", shop)
    assert spec.clauses[0].min == -15.0


def test_partition_trivial_example():
    ds = Dataset.from_columns({"x": [1.0, 2.0, 3.0, 4.0]})
    parts = partition(ds, parse_filter("x >= 3", ds))
    assert parts.included == (2, 3)
    assert parts.excluded == (0, 1)


# ---------------------------------------------------------------- errors


def test_or_is_reserved(shop):
    with pytest.raises(FilterError, match="OR is reserved.*position 11") as info:
        parse_filter("price >= 3 OR size >= 2", shop)
    assert info.value.position == 11


def test_unknown_feature(shop):
    with pytest.raises(UnknownFeatureError, match="'sqft'"):
        parse_filter("sqft >= 3", shop)


def test_ordering_comparison_on_categorical(shop):
    with pytest.raises(FilterError, match="categorical feature 'city'"):
        parse_filter("city >= austin", shop)


def test_interval_on_categorical(shop):
    with pytest.raises(FilterError, match="interval clause on categorical"):
        parse_filter("city IN [1, 2]", shop)


def test_value_set_on_numeric(shop):
    with pytest.raises(FilterError, match="set clause on numeric feature 'price'"):
        parse_filter("price IN {10, 20}", shop)


def test_interval_bounds_out_of_order(shop):
    with pytest.raises(FilterError, match=r"bounds out of order \(100.0 > 50.0\)"):
        parse_filter("price IN [100, 50]", shop)


def test_double_equals_is_a_syntax_error(shop):
    with pytest.raises(FilterError, match="expected a number, found '='") as info:
        parse_filter("price == 30", shop)
    assert info.value.position == 7


def test_missing_value_reports_position(shop):
    with pytest.raises(FilterError) as info:
        parse_filter("price >=", shop)
    assert info.value.position == len("price >=")


def test_unclosed_set(shop):
    with pytest.raises(FilterError, match="expected , or }"):
        parse_filter("city IN {austin, boston", shop)


def test_trailing_garbage(shop):
    with pytest.raises(FilterError, match="expected AND or end"):
        parse_filter("price >= 3 size >= 2", shop)


def test_empty_expression(shop):
    for expr in ("", "   "):
        with pytest.raises(FilterError, match="empty filter"):
            parse_filter(expr, shop)


def test_clause_constructors_reject_bad_bounds():
    with pytest.raises(FilterError, match="no bounds"):
        RangeClause(feature="x")
    with pytest.raises(FilterError, match="exceeds upper"):
        RangeClause(feature="x", min=5.0, max=1.0)
    with pytest.raises(FilterError, match="empty value set"):
        SetClause(feature="g", values=())
    with pytest.raises(FilterError, match="at least one clause"):
        FilterSpec(clauses=())


# ---------------------------------------------------------------- partition laws


def test_partition_is_a_disjoint_cover(housing):
    spec = parse_filter("sqft >= 1500 AND price < 400000", housing)
    parts = partition(housing, spec)
    merged = sorted(parts.included + parts.excluded)
    assert merged == list(range(housing.row_count))
    assert not set(parts.included) & set(parts.excluded)


def test_complement_filters_swap_sides(housing):
    ge = partition(housing, parse_filter("sqft >= 1500", housing))
    lt = partition(housing, parse_filter("sqft < 1500", housing))
    assert ge.included == lt.excluded
    assert ge.excluded == lt.included


def test_housing_sqft_partition_matches_independent_count(housing):
    # frozen from a line-by-line scan of the committed csv
    parts = partition(housing, parse_filter("sqft >= 1500", housing))
    assert len(parts.included) == 335
    assert len(parts.excluded) == 171


def test_partition_agrees_with_scalar_predicate(housing):
    expressions = [
        "sqft >= 1500",
        "price IN [200000, 400000]",
        "sqft < 1500 AND beds >= 3",
        "year_built > 1990 AND price <= 350000 AND garage_spaces >= 1",
    ]
    for expr in expressions:
        spec = parse_filter(expr, housing)
        included = set(partition(housing, spec).included)
        for i in range(housing.row_count):
            assert (i in included) == spec.matches_row(housing.row(i)), (expr, i)


def test_random_threshold_partitions_match_bruteforce(housing):
    rng = np.random.default_rng(2024)
    sqft = housing.column("sqft")
    for _ in range(20):
        cut = float(rng.uniform(sqft.min(), sqft.max()))
        parts = partition(housing, parse_filter(f"sqft >= {cut!r}", housing))
        expected = np.flatnonzero(sqft >= cut)
        np.testing.assert_array_equal(parts.included_array, expected)


def test_either_side_may_be_empty(shop):
    all_in = partition(shop, parse_filter("price >= 0", shop))
    assert all_in.excluded == ()
    none_in = partition(shop, parse_filter("price > 1000", shop))
    assert none_in.included == ()


# ---------------------------------------------------------------- json


def test_filter_json_shape(shop):
    spec = parse_filter("price >= 20 AND price < 40 AND city IN {austin}", shop)
    assert spec.to_json() == {
        "clauses": [
            {"feature": "price", "type": "range", "min": 20.0, "minInclusive": True},
            {"feature": "price", "type": "range", "max": 40.0, "maxInclusive": False},
            {"feature": "city", "type": "set", "values": ["austin"]},
        ]
    }


def test_filter_json_round_trip(shop):
    spec = parse_filter("size IN [1, 3] AND city IN {austin, boston}", shop)
    assert FilterSpec.from_json(spec.to_json()) == spec


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"clauses": [{"type": "range", "min": 1}]},
        {"clauses": [{"feature": "x", "type": "glob"}]},
        {"clauses": [{"feature": "x", "type": "set", "values": "abc"}]},
        {"clauses": [{"feature": "x", "type": "range"}]},
    ],
)
def test_filter_from_json_rejects_malformed(doc):
    with pytest.raises(FilterError):
        FilterSpec.from_json(doc)


def test_validate_checks_kinds_against_dataset(shop):
    spec = FilterSpec((SetClause(feature="price", values=("10",)),))
    with pytest.raises(FilterError, match="set clause on numeric"):
        spec.validate(shop)
    spec = FilterSpec((RangeClause(feature="city", min=1.0),))
    with pytest.raises(FilterError, match="range clause on categorical"):
        spec.validate(shop)
