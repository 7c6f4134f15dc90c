import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

from cofact.service import create_app
from cofact.service.app import (
    AnalysisRequestBody,
    analysis_response_bytes,
    default_covariates,
    run_analysis,
)
from cofact.filtering import parse_filter
from cofact.fixtures import get_fixture

CSV = b"sqft,city,price\n1000,austin,200\n2000,boston,400\n1500,austin,300\n900,boston,180\n"

T1_FILTER = {"clauses": [{"feature": "T", "type": "set", "values": ["1"]}]}


@pytest.fixture
def client():
    with TestClient(create_app(session_cap=4)) as c:
        yield c


def make_session(client, fixture="fig1b_confounded"):
    response = client.post("/sessions", json={"fixture": fixture})
    assert response.status_code == 201, response.text
    return response.json()["sessionId"]


def run_default_analysis(client, session_id):
    return client.post(
        f"/sessions/{session_id}/analysis",
        json={"filter": T1_FILTER, "outcome": "H"},
    )


# ---------------------------------------------------------------- sessions


def test_create_session_from_fixture(client):
    response = client.post("/sessions", json={"fixture": "fig1b_confounded"})
    assert response.status_code == 201
    doc = response.json()
    assert doc["rowCount"] == 2000
    assert doc["droppedRowCount"] == 0
    assert isinstance(doc["createdAt"], str)
    by_name = {f["name"]: f for f in doc["features"]}
    assert by_name["T"]["kind"] == "categorical"
    assert set(by_name["T"]["categories"]) == {"0", "1"}
    assert by_name["H"]["kind"] == "numeric"
    assert "mean" in by_name["H"]


def test_create_session_from_csv_upload(client):
    response = client.post("/sessions", files={"file": ("data.csv", CSV, "text/csv")})
    assert response.status_code == 201
    doc = response.json()
    assert doc["rowCount"] == 4
    kinds = {f["name"]: f["kind"] for f in doc["features"]}
    assert kinds == {"sqft": "numeric", "city": "categorical", "price": "numeric"}


def test_upload_with_type_hints_and_missing_policy(client):
    csv = b"t,y\n0,1.5\n1,\n1,2.5\n"
    response = client.post(
        "/sessions",
        files={"file": ("d.csv", csv, "text/csv")},
        data={"typeHints": json.dumps({"t": "categorical"}), "missingPolicy": "drop"},
    )
    assert response.status_code == 201
    doc = response.json()
    assert doc["rowCount"] == 2
    assert doc["droppedRowCount"] == 1
    assert {f["name"]: f["kind"] for f in doc["features"]}["t"] == "categorical"


def test_malformed_csv_names_the_line(client):
    bad = b"a,b\n1,2\n3\n"
    response = client.post("/sessions", files={"file": ("d.csv", bad, "text/csv")})
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["code"] == "DATA_FORMAT"
    assert "line 3" in detail["message"]


def test_missing_value_rejected_with_code(client):
    bad = b"a,b\n1,\n"
    response = client.post("/sessions", files={"file": ("d.csv", bad, "text/csv")})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "MISSING_VALUE"


def test_create_session_rejects_unknown_fixture(client):
    response = client.post("/sessions", json={"fixture": "nope"})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "CONFIG_INVALID"


def test_create_session_rejects_bad_payloads(client):
    assert client.post("/sessions", json={"dataset": "x"}).status_code == 400
    assert client.post(
        "/sessions", content=b"zzz", headers={"content-type": "application/json"}
    ).status_code == 400
    assert client.post(
        "/sessions", content=b"", headers={"content-type": "text/plain"}
    ).status_code == 400


def test_fixture_listing(client):
    doc = client.get("/fixtures").json()
    names = [f["name"] for f in doc["fixtures"]]
    assert names == sorted(names)
    assert "fig1b_confounded" in names
    assert "housing" in names


def test_features_endpoint(client):
    session_id = make_session(client, "housing")
    doc = client.get(f"/sessions/{session_id}/features").json()
    assert doc["sessionId"] == session_id
    assert doc["rowCount"] == 506
    assert len(doc["features"]) == 14


def test_delete_session(client):
    session_id = make_session(client)
    assert client.delete(f"/sessions/{session_id}").status_code == 204
    assert client.get(f"/sessions/{session_id}/features").status_code == 404
    assert client.delete(f"/sessions/{session_id}").status_code == 404


def test_unknown_session_is_404(client):
    assert client.get("/sessions/zzz/features").status_code == 404
    assert client.post(
        "/sessions/zzz/analysis", json={"filter": T1_FILTER, "outcome": "H"}
    ).status_code == 404
    assert client.get("/sessions/zzz/rows", params={"subset": "included"}).status_code == 404
    detail = client.delete("/sessions/zzz").json()["detail"]
    assert detail["code"] == "SESSION_NOT_FOUND"


def test_lru_eviction_drops_oldest(client):
    first = make_session(client)
    others = [make_session(client) for _ in range(4)]  # cap is 4
    assert client.get(f"/sessions/{first}/features").status_code == 404
    for session_id in others:
        assert client.get(f"/sessions/{session_id}/features").status_code == 200


def test_recently_used_session_survives_eviction(client):
    first = make_session(client)
    for _ in range(3):
        make_session(client)
    client.get(f"/sessions/{first}/features")  # refresh
    make_session(client)  # evicts the oldest, which is no longer `first`
    assert client.get(f"/sessions/{first}/features").status_code == 200


# ---------------------------------------------------------------- analysis


def test_analysis_happy_path(client):
    session_id = make_session(client)
    response = run_default_analysis(client, session_id)
    assert response.status_code == 200
    doc = response.json()
    assert doc["reportVersion"] == 1
    assert doc["outcome"] == "H"
    assert doc["support"]["class"] == "weakened"
    assert doc["match"]["covariates"] == ["C"]  # defaulted: all but T and H
    assert doc["partition"]["includedCount"] + doc["partition"]["excludedCount"] == 2000


def test_analysis_is_byte_deterministic(client):
    session_id = make_session(client)
    first = run_default_analysis(client, session_id)
    second = run_default_analysis(client, session_id)
    assert first.content == second.content
    assert b'"nan"' not in first.content.lower()


def test_analysis_matches_module_composition(client):
    # the HTTP body must be exactly the serialized module-level pipeline
    session_id = make_session(client)
    response = run_default_analysis(client, session_id)
    body = AnalysisRequestBody(filter=T1_FILTER, outcome="H")
    doc, _, _ = run_analysis(get_fixture("fig1b_confounded"), body)
    assert response.content == analysis_response_bytes(doc)


def test_analysis_with_explicit_match_config(client):
    session_id = make_session(client)
    response = client.post(
        f"/sessions/{session_id}/analysis",
        json={
            "filter": T1_FILTER,
            "outcome": "H",
            "match": {"covariates": ["C"], "method": "mahalanobis", "cfSize": 100},
            "bins": 10,
        },
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["match"]["method"] == "mahalanobis"
    assert doc["partition"]["counterfactualCount"] == 100
    assert len(doc["naive"]["histogram"]["binEdges"]) == 11


def test_analysis_error_codes(client):
    session_id = make_session(client)

    def post(body):
        return client.post(f"/sessions/{session_id}/analysis", json=body)

    no_rows = {"clauses": [{"feature": "H", "type": "range", "min": 1e9}]}
    response = post({"filter": no_rows, "outcome": "C"})
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "EMPTY_SUBSET"

    all_rows = {"clauses": [{"feature": "H", "type": "range", "min": -1e9}]}
    assert post({"filter": all_rows, "outcome": "C"}).status_code == 422

    response = post({"filter": T1_FILTER, "outcome": "Z"})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "CONFIG_INVALID"

    response = post({"filter": {"clauses": []}, "outcome": "H"})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "FILTER_INVALID"

    response = post(
        {"filter": T1_FILTER, "outcome": "H", "match": {"covariates": ["T"]}}
    )
    assert response.status_code == 400
    assert "filter feature" in response.json()["detail"]["message"]

    response = post(
        {"filter": T1_FILTER, "outcome": "H", "match": {"covariates": ["C"], "cfSize": 100000}}
    )
    assert response.status_code == 400

    assert post({"outcome": "H"}).status_code == 422  # missing filter field


def test_analysis_rejects_outcome_only_dataset(client):
    csv = b"flag,y\n1,2\n0,3\n"
    response = client.post("/sessions", files={"file": ("d.csv", csv, "text/csv")})
    session_id = response.json()["sessionId"]
    response = client.post(
        f"/sessions/{session_id}/analysis",
        json={
            "filter": {"clauses": [{"feature": "flag", "type": "range", "min": 1}]},
            "outcome": "y",
        },
    )
    assert response.status_code == 400
    assert "no covariates left" in response.json()["detail"]["message"]


def test_default_covariates_helper(client):
    ds = get_fixture("fig1b_confounded")
    spec = parse_filter("T = 1", ds)
    assert default_covariates(ds, spec, "H") == ["C"]
    assert default_covariates(ds, spec, "C") == ["H"]


# ---------------------------------------------------------------- rows


def test_rows_pagination(client):
    session_id = make_session(client)
    run_default_analysis(client, session_id)
    first = client.get(
        f"/sessions/{session_id}/rows",
        params={"subset": "counterfactual", "page": 0, "pageSize": 100},
    ).json()
    assert first["totalRows"] == 244
    assert len(first["rows"]) == 100
    last = client.get(
        f"/sessions/{session_id}/rows",
        params={"subset": "counterfactual", "page": 2, "pageSize": 100},
    ).json()
    assert len(last["rows"]) == 44
    beyond = client.get(
        f"/sessions/{session_id}/rows",
        params={"subset": "counterfactual", "page": 9, "pageSize": 100},
    ).json()
    assert beyond["rows"] == []

    row = first["rows"][0]
    assert set(row["values"]) == {"C", "T", "H"}
    assert row["values"]["T"] == "0"  # counterfactual rows come from excluded


def test_rows_cover_the_partition(client):
    session_id = make_session(client)
    run_default_analysis(client, session_id)
    included = client.get(
        f"/sessions/{session_id}/rows",
        params={"subset": "included", "pageSize": 500},
    ).json()
    excluded = client.get(
        f"/sessions/{session_id}/rows",
        params={"subset": "excluded", "pageSize": 500},
    ).json()
    assert included["totalRows"] + excluded["totalRows"] == 2000


def test_rows_before_analysis_is_conflict(client):
    session_id = make_session(client)
    response = client.get(
        f"/sessions/{session_id}/rows", params={"subset": "included"}
    )
    assert response.status_code == 409
    assert response.json()["detail"]["code"] == "NO_ANALYSIS"


def test_rows_validation(client):
    session_id = make_session(client)
    run_default_analysis(client, session_id)
    base = f"/sessions/{session_id}/rows"
    assert client.get(base, params={"subset": "all"}).status_code == 400
    assert client.get(base, params={"subset": "included", "page": -1}).status_code == 400
    assert client.get(
        base, params={"subset": "included", "pageSize": 0}
    ).status_code == 400
    assert client.get(
        base, params={"subset": "included", "pageSize": 10000}
    ).status_code == 400


def test_rows_reflect_latest_analysis(client):
    session_id = make_session(client)
    run_default_analysis(client, session_id)
    first = client.get(
        f"/sessions/{session_id}/rows", params={"subset": "counterfactual"}
    ).json()["totalRows"]
    client.post(
        f"/sessions/{session_id}/analysis",
        json={
            "filter": T1_FILTER,
            "outcome": "H",
            "match": {"covariates": ["C"], "cfSize": 7},
        },
    )
    second = client.get(
        f"/sessions/{session_id}/rows", params={"subset": "counterfactual"}
    ).json()["totalRows"]
    assert (first, second) == (244, 7)
