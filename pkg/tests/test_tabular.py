import math

import numpy as np
import pytest

from cofact.errors import (
    DataFormatError,
    MissingValueError,
    UnknownFeatureError,
)
from cofact.tabular import (
    CATEGORICAL,
    DROP_MISSING,
    NUMERIC,
    ONE_HOT_SCALE,
    Dataset,
    dataset_to_csv_bytes,
    fit_standardizer,
    load_csv,
    parse_number,
    summarize_feature,
)

from conftest import csv_dataset


# ---------------------------------------------------------------- parsing


def test_parse_number_accepts_decimals_and_scientific():
    assert parse_number("3") == 3.0
    assert parse_number("-2.5") == -2.5
    assert parse_number("+.5") == 0.5
    assert parse_number("1e-05") == 1e-05
    assert parse_number("6.25E+2") == 625.0


@pytest.mark.parametrize("token", ["", " 3", "3 ", "nan", "NaN", "inf", "-inf",
                                   "0x10", "1_000", "1,5", "--3", "1e", "."])
def test_parse_number_rejects_non_decimal_tokens(token):
    assert parse_number(token) is None


def test_kind_inference():
    ds = csv_dataset("x,city\n1,austin\n2.5,boston\n-3e2,austin\n")
    assert ds.feature("x").kind == NUMERIC
    assert ds.feature("city").kind == CATEGORICAL
    assert ds.row_count == 3
    np.testing.assert_array_equal(ds.column("x"), [1.0, 2.5, -300.0])
    assert list(ds.column("city")) == ["austin", "boston", "austin"]


def test_mixed_column_falls_back_to_categorical():
    ds = csv_dataset("x\n1\ntwo\n3\n")
    assert ds.feature("x").kind == CATEGORICAL
    assert list(ds.column("x")) == ["1", "two", "3"]


def test_nan_and_inf_tokens_are_not_numeric():
    ds = csv_dataset("x\n1\nnan\ninf\n")
    assert ds.feature("x").kind == CATEGORICAL


def test_type_hint_forces_categorical():
    ds = load_csv(b"t,y\n0,1.5\n1,2.5\n", type_hints={"t": "categorical"})
    assert ds.feature("t").kind == CATEGORICAL
    assert ds.feature("y").kind == NUMERIC
    assert list(ds.column("t")) == ["0", "1"]


def test_type_hint_numeric_on_text_column_is_an_error():
    with pytest.raises(DataFormatError, match="not a finite number"):
        load_csv(b"x\n1\ntwo\n", type_hints={"x": "numeric"})


def test_type_hint_for_unknown_feature():
    with pytest.raises(UnknownFeatureError, match="nope"):
        load_csv(b"x\n1\n", type_hints={"nope": "numeric"})


def test_type_hint_with_bad_kind():
    with pytest.raises(DataFormatError, match="numeric|categorical"):
        load_csv(b"x\n1\n", type_hints={"x": "float"})


# ---------------------------------------------------------------- malformed input


def test_empty_input():
    with pytest.raises(DataFormatError, match="no header"):
        load_csv(b"")


def test_duplicate_header_names():
    with pytest.raises(DataFormatError, match="duplicate"):
        load_csv(b"x,x\n1,2\n")


def test_empty_header_cell():
    with pytest.raises(DataFormatError, match="header column 2"):
        load_csv(b"x,,z\n1,2,3\n")


def test_ragged_row_reports_line_number():
    with pytest.raises(DataFormatError, match="line 3: expected 2 fields, got 3"):
        load_csv(b"a,b\n1,2\n1,2,3\n")


def test_non_utf8_input():
    with pytest.raises(DataFormatError, match="UTF-8"):
        load_csv(b"x\n\xff\xfe\n")


def test_utf8_bom_is_stripped():
    ds = load_csv(b"\xef\xbb\xbfx\n1\n")
    assert ds.feature_names == ["x"]


def test_missing_value_rejected_by_default():
    with pytest.raises(MissingValueError, match="line 3.*'b'"):
        load_csv(b"a,b\n1,2\n3,\n")


def test_missing_policy_drop_counts_rows():
    ds = load_csv(b"a,b\n1,2\n3,\n,4\n5,6\n", missing_policy=DROP_MISSING)
    assert ds.row_count == 2
    assert ds.dropped_row_count == 2
    np.testing.assert_array_equal(ds.column("a"), [1.0, 5.0])


def test_unknown_missing_policy():
    with pytest.raises(ValueError):
        load_csv(b"a\n1\n", missing_policy="impute")


def test_quoted_fields_with_commas_and_newlines():
    ds = csv_dataset('x,label\n1,"a,b"\n2,"two\nlines"\n')
    assert ds.row_count == 2
    assert list(ds.column("label")) == ["a,b", "two\nlines"]


# ---------------------------------------------------------------- dataset basics


def test_columns_are_immutable():
    ds = csv_dataset("x\n1\n2\n")
    with pytest.raises(ValueError):
        ds.column("x")[0] = 99.0


def test_row_accessor_types(tiny):
    row = tiny.row(3)
    assert row == {"x": 50.0, "t": "0", "y": 20.0}
    assert isinstance(row["x"], float)
    assert isinstance(row["t"], str)


def test_unknown_feature_lookup(tiny):
    with pytest.raises(UnknownFeatureError):
        tiny.column("z")


def test_from_columns_kind_inference():
    ds = Dataset.from_columns({"a": [1, 2], "b": ["x", "y"]})
    assert ds.feature("a").kind == NUMERIC
    assert ds.feature("b").kind == CATEGORICAL


def test_from_columns_rejects_non_finite():
    with pytest.raises(DataFormatError, match="non-finite"):
        Dataset.from_columns({"a": [1.0, math.inf]})


def test_equals_distinguishes_values_and_kinds():
    a = Dataset.from_columns({"x": [1.0, 2.0]})
    b = Dataset.from_columns({"x": [1.0, 2.0]})
    c = Dataset.from_columns({"x": [1.0, 3.0]})
    d = Dataset.from_columns({"x": ["1.0", "2.0"]}, kinds={"x": CATEGORICAL})
    assert a.equals(b)
    assert not a.equals(c)
    assert not a.equals(d)


# ---------------------------------------------------------------- round trip


def test_csv_round_trip_is_exact():
    rng = np.random.default_rng(7301)
    ds = Dataset.from_columns(
        {
            "u": rng.normal(size=40),
            "v": rng.uniform(-1e6, 1e6, size=40),
            "tag": [f"g{i % 3}" for i in range(40)],
        },
        kinds={"tag": CATEGORICAL},
    )
    reloaded = load_csv(dataset_to_csv_bytes(ds))
    assert reloaded.equals(ds)


def test_round_trip_preserves_tiny_and_huge_floats():
    ds = Dataset.from_columns({"x": [1e-300, 1e300, 0.1, -0.1, 128057.0]})
    reloaded = load_csv(dataset_to_csv_bytes(ds))
    np.testing.assert_array_equal(reloaded.column("x"), ds.column("x"))


def test_double_round_trip_is_stable():
    ds = csv_dataset("x,s\n0.1,a\n2,b\n")
    once = dataset_to_csv_bytes(ds)
    twice = dataset_to_csv_bytes(load_csv(once))
    assert once == twice


# ---------------------------------------------------------------- summaries


def test_numeric_summary_hand_values():
    ds = csv_dataset("x\n1\n2\n3\n")
    s = summarize_feature(ds, "x")
    assert s.count == 3
    assert s.minimum == 1.0
    assert s.maximum == 3.0
    assert s.mean == 2.0
    assert s.std == 1.0  # sample sd of {1,2,3}


def test_categorical_summary_counts():
    ds = csv_dataset("g\na\nb\na\na\n")
    s = summarize_feature(ds, "g")
    assert s.categories == {"a": 3, "b": 1}
    assert s.minimum is None


def test_single_row_summary_has_zero_std():
    ds = csv_dataset("x\n5\n")
    assert summarize_feature(ds, "x").std == 0.0


def test_housing_price_summary_matches_independent_scan(housing):
    # frozen from a line-by-line scan of the committed csv (two-pass sd)
    s = summarize_feature(housing, "price")
    assert s.count == 506
    assert s.minimum == 128057.0
    assert s.maximum == 617701.0
    assert abs(s.mean - 348782.4743083004) < 1e-6
    assert abs(s.std - 112510.6969061576) < 1e-6


# ---------------------------------------------------------------- standardizer


def test_zscore_hand_example():
    ds = Dataset.from_columns({"x": [2.0, 4.0]})
    view = fit_standardizer(ds, ["x"])
    got = view.transform()[:, 0]
    expected = 1.0 / math.sqrt(2.0)  # (4-3)/sqrt(2)
    np.testing.assert_allclose(got, [-expected, expected], rtol=0, atol=1e-15)


def test_zscore_population_is_centered_and_unit():
    rng = np.random.default_rng(515)
    ds = Dataset.from_columns({"x": rng.normal(3.0, 7.0, size=400)})
    z = fit_standardizer(ds, ["x"]).transform()[:, 0]
    assert abs(z.mean()) < 1e-12
    assert abs(z.std(ddof=1) - 1.0) < 1e-12


def test_zero_variance_column_maps_to_zero_and_is_flagged():
    ds = Dataset.from_columns({"x": [4.0, 4.0, 4.0], "y": [1.0, 2.0, 3.0]})
    view = fit_standardizer(ds, ["x", "y"])
    assert view.zero_variance_features == ["x"]
    np.testing.assert_array_equal(view.transform()[:, 0], [0.0, 0.0, 0.0])


def test_one_hot_distance_between_distinct_categories_is_one():
    ds = Dataset.from_columns({"g": ["a", "b"]}, kinds={"g": CATEGORICAL})
    enc = fit_standardizer(ds, ["g"]).transform()
    # rows (s, 0) and (0, s) with s = 1/sqrt(2) -> euclidean distance 1
    assert enc.shape == (2, 2)
    dist = np.linalg.norm(enc[0] - enc[1])
    assert abs(dist - 1.0) < 1e-15
    assert np.all(enc[enc != 0] == ONE_HOT_SCALE)


def test_single_category_column_encodes_constant():
    ds = Dataset.from_columns({"g": ["a", "a"]}, kinds={"g": CATEGORICAL})
    enc = fit_standardizer(ds, ["g"]).transform()
    np.testing.assert_array_equal(enc, [[ONE_HOT_SCALE], [ONE_HOT_SCALE]])


def test_column_labels_expand_categories():
    ds = Dataset.from_columns(
        {"x": [1.0, 2.0], "g": ["b", "a"]}, kinds={"g": CATEGORICAL}
    )
    view = fit_standardizer(ds, ["x", "g"])
    assert view.column_labels == ["x", "g=a", "g=b"]
    assert view.encoded_width == 3


def test_raw_switch_passes_numeric_through():
    ds = Dataset.from_columns({"x": [10.0, 30.0]})
    raw = fit_standardizer(ds, ["x"], standardize=False).transform()
    np.testing.assert_array_equal(raw[:, 0], [10.0, 30.0])


def test_transform_row_subset_matches_full():
    rng = np.random.default_rng(99)
    ds = Dataset.from_columns(
        {"x": rng.normal(size=30), "g": [f"c{i % 4}" for i in range(30)]},
        kinds={"g": CATEGORICAL},
    )
    view = fit_standardizer(ds, ["x", "g"])
    full = view.transform()
    pick = [3, 0, 17, 17, 29]
    np.testing.assert_array_equal(view.transform(pick), full[pick])


def test_fit_requires_features_and_rows():
    ds = Dataset.from_columns({"x": [1.0]})
    with pytest.raises(ValueError):
        fit_standardizer(ds, [])
    empty = Dataset.from_columns({"x": np.array([], dtype=float)})
    with pytest.raises(DataFormatError):
        fit_standardizer(empty, ["x"])
