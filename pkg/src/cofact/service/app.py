"""HTTP API over the analysis pipeline.

Endpoints:
  POST   /sessions                create from an uploaded CSV (multipart) or
                                  a named fixture (JSON {"fixture": ...})
  GET    /sessions/{id}/features  feature catalog with summaries
  POST   /sessions/{id}/analysis  filter -> match -> report, deterministic body
  GET    /sessions/{id}/rows      page through included/excluded/counterfactual
  DELETE /sessions/{id}

Analysis responses contain no timestamps or other per-request state, so an
identical request yields a byte-identical body. Errors use
{"detail": {"code", "message"}} with stable machine-readable codes.
"""

from __future__ import annotations

import json
import os
from typing import Any, Mapping, Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from .. import diagnostics
from ..errors import CofactError, ConfigError
from ..filtering import FilterSpec, SubsetPartition, partition
from ..fixtures import get_fixture, list_fixtures
from ..matching import MatchConfig, compute_counterfactual
from ..tabular import CATEGORICAL, Dataset, load_csv, summarize_feature
from .store import DEFAULT_SESSION_CAP, Session, SessionStore

ENV_PORT = "COFACT_PORT"
ENV_SESSION_CAP = "COFACT_SESSION_CAP"
DEFAULT_PORT = 8080

_STATUS_BY_CODE = {
    "EMPTY_SUBSET": 422,
    "SESSION_NOT_FOUND": 404,
}

_PAGE_SIZE_DEFAULT = 50
_PAGE_SIZE_MAX = 500


class AnalysisRequestBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    filter: dict[str, Any]
    outcome: str
    match: Optional[dict[str, Any]] = None
    bins: Optional[int] = Field(default=None, ge=1)


def default_covariates(dataset: Dataset, filter_spec: FilterSpec, outcome: str) -> list[str]:
    """Every feature that is neither filtered on nor the outcome."""
    blocked = set(filter_spec.feature_names) | {outcome}
    return [f.name for f in dataset.features if f.name not in blocked]


def run_analysis(
    dataset: Dataset, body: AnalysisRequestBody
) -> tuple[dict[str, Any], SubsetPartition, tuple[int, ...]]:
    """The deterministic pipeline shared by the API and the CLI.

    Returns the report JSON document plus the partition and counterfactual
    row list backing it (for row paging).
    """
    if not dataset.has_feature(body.outcome):
        raise ConfigError(f"unknown outcome feature {body.outcome!r}")
    filter_spec = FilterSpec.from_json(body.filter)
    filter_spec.validate(dataset)

    match_doc: dict[str, Any] = dict(body.match or {})
    if not match_doc.get("covariates"):
        match_doc["covariates"] = default_covariates(dataset, filter_spec, body.outcome)
        if not match_doc["covariates"]:
            raise ConfigError(
                "no covariates left after removing filter features and the "
                "outcome; pass covariates explicitly"
            )
    config = MatchConfig.from_json(match_doc)

    parts = partition(dataset, filter_spec)
    result = compute_counterfactual(dataset, parts, config, outcome=body.outcome)
    report = diagnostics.build_report(
        dataset, parts, result, body.outcome,
        bins=body.bins or diagnostics.DEFAULT_BINS,
    )
    return report.to_json(), parts, result.counterfactual


def analysis_response_bytes(doc: Mapping[str, Any]) -> bytes:
    # compact separators + allow_nan=False: the payload is the determinism
    # contract, so no NaN/Infinity literals and no formatting drift.
    return json.dumps(doc, separators=(",", ":"), allow_nan=False).encode("utf-8")


def _feature_catalog(dataset: Dataset) -> list[dict[str, Any]]:
    catalog = []
    for feature in dataset.features:
        summary = summarize_feature(dataset, feature.name)
        entry: dict[str, Any] = {
            "name": feature.name,
            "kind": feature.kind,
            "count": summary.count,
        }
        if feature.kind == CATEGORICAL:
            entry["categories"] = summary.categories
        else:
            entry.update(
                min=summary.minimum, max=summary.maximum,
                mean=summary.mean, std=summary.std,
            )
        catalog.append(entry)
    return catalog


def _session_payload(session: Session) -> dict[str, Any]:
    return {
        "sessionId": session.id,
        "createdAt": session.created_at,
        "rowCount": session.dataset.row_count,
        "droppedRowCount": session.dataset.dropped_row_count,
        "features": _feature_catalog(session.dataset),
    }


def _error_response(status: int, code: str, message: str,
                    position: Optional[int] = None) -> JSONResponse:
    detail: dict[str, Any] = {"code": code, "message": message}
    if position is not None:
        detail["position"] = position
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(session_cap: Optional[int] = None) -> FastAPI:
    if session_cap is None:
        session_cap = int(os.environ.get(ENV_SESSION_CAP, DEFAULT_SESSION_CAP))
    app = FastAPI(title="cofact", version="0.1.0")
    store = SessionStore(cap=session_cap)
    app.state.store = store

    @app.exception_handler(CofactError)
    async def _cofact_error(_request: Request, exc: CofactError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        position = getattr(exc, "position", None)
        return _error_response(status, exc.code, str(exc), position)

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            try:
                doc = await request.json()
            except json.JSONDecodeError:
                return _error_response(400, "BAD_REQUEST", "request body is not valid JSON")
            name = doc.get("fixture") if isinstance(doc, Mapping) else None
            if not isinstance(name, str):
                return _error_response(
                    400, "BAD_REQUEST",
                    'JSON session creation needs {"fixture": "<name>"}',
                )
            dataset = get_fixture(name)
        elif content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is None or isinstance(upload, str):
                return _error_response(400, "BAD_REQUEST", 'multipart field "file" is required')
            raw = await upload.read()
            hints = None
            if form.get("typeHints"):
                try:
                    hints = json.loads(form["typeHints"])
                except json.JSONDecodeError:
                    return _error_response(400, "BAD_REQUEST", "typeHints is not valid JSON")
            policy = form.get("missingPolicy") or "reject"
            dataset = load_csv(raw, type_hints=hints, missing_policy=policy)
        else:
            return _error_response(
                400, "BAD_REQUEST",
                'send multipart/form-data with a CSV file or JSON {"fixture": name}',
            )
        return _session_payload(store.create(dataset))

    @app.get("/fixtures")
    async def fixtures():
        return {"fixtures": [
            {"name": name, "description": text}
            for name, text in sorted(list_fixtures().items())
        ]}

    @app.get("/sessions/{session_id}/features")
    async def features(session_id: str):
        session = store.get(session_id)
        return {
            "sessionId": session.id,
            "rowCount": session.dataset.row_count,
            "features": _feature_catalog(session.dataset),
        }

    @app.post("/sessions/{session_id}/analysis")
    async def analysis(session_id: str, body: AnalysisRequestBody):
        session = store.get(session_id)
        with session.lock:
            doc, parts, cf_rows = run_analysis(session.dataset, body)
            session.last_partition = parts
            session.last_cf_rows = cf_rows
        return Response(
            content=analysis_response_bytes(doc), media_type="application/json"
        )

    @app.get("/sessions/{session_id}/rows")
    async def rows(
        session_id: str,
        subset: str,
        page: int = 0,
        pageSize: int = _PAGE_SIZE_DEFAULT,
    ):
        session = store.get(session_id)
        if subset not in ("included", "excluded", "counterfactual"):
            return _error_response(
                400, "BAD_REQUEST",
                "subset must be included, excluded or counterfactual",
            )
        if page < 0 or not 1 <= pageSize <= _PAGE_SIZE_MAX:
            return _error_response(
                400, "BAD_REQUEST",
                f"page must be >= 0 and pageSize in 1..{_PAGE_SIZE_MAX}",
            )
        with session.lock:
            parts = session.last_partition
            cf_rows = session.last_cf_rows
        if parts is None:
            return _error_response(
                409, "NO_ANALYSIS", "run an analysis before requesting rows"
            )
        if subset == "included":
            indices = parts.included
        elif subset == "excluded":
            indices = parts.excluded
        else:
            indices = cf_rows or ()
        start = page * pageSize
        chunk = indices[start : start + pageSize]
        return {
            "sessionId": session.id,
            "subset": subset,
            "page": page,
            "pageSize": pageSize,
            "totalRows": len(indices),
            "rows": [
                {"index": int(i), "values": session.dataset.row(int(i))}
                for i in chunk
            ],
        }

    @app.delete("/sessions/{session_id}", status_code=204)
    async def delete_session(session_id: str):
        store.delete(session_id)
        return Response(status_code=204)

    return app
