"""Command-line entry points.

`analyze` is a thin client: it builds the same request the explorer UI
would send and drives the HTTP app (in-process by default, or a remote
server via --server), then writes the response bytes verbatim -- so CLI
and API output are identical by construction.

Exit codes: 0 success, 1 validation error (bad filter, unknown feature,
bad config, server 4xx), 2 I/O error (unreadable/unwritable paths,
unreachable server).
"""

from __future__ import annotations

import dataclasses
import json
import pathlib
import sys
from typing import Any, Optional

import click
import httpx

from . import __version__
from .causal.scm import ScmSpec, generate
from .errors import CofactError
from .filtering import parse_filter
from .fixtures import SCM_FIXTURES, fixture_spec, get_fixture, list_fixtures
from .matching import METHODS, POLICIES
from .service.app import DEFAULT_PORT, ENV_PORT, create_app
from .tabular import dataset_to_csv_bytes, load_csv

EXIT_VALIDATION = 1
EXIT_IO = 2


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_bytes(path: str) -> bytes:
    try:
        return pathlib.Path(path).read_bytes()
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}", EXIT_IO)


def _read_json(path: str) -> Any:
    raw = _read_bytes(path)
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        _fail(f"{path} is not valid JSON: {exc}", EXIT_VALIDATION)


def _write_bytes(path: str, payload: bytes):
    try:
        if path == "-":
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        else:
            pathlib.Path(path).write_bytes(payload)
    except OSError as exc:
        _fail(f"cannot write {path}: {exc}", EXIT_IO)


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=300.0)
    import warnings

    with warnings.catch_warnings():
        # this starlette warns that TestClient-over-httpx is deprecated;
        # it is still the supported sync ASGI driver here
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    return TestClient(create_app(), raise_server_exceptions=False)


def _detail_message(response: httpx.Response) -> str:
    try:
        detail = response.json().get("detail")
    except ValueError:
        return response.text
    if isinstance(detail, dict):
        code = detail.get("code", "")
        message = detail.get("message", "")
        return f"{code}: {message}" if code else str(message)
    return str(detail)


@click.group()
@click.version_option(version=__version__, prog_name="cofact")
def main():
    """Counterfactual subset comparison for tabular data."""


@main.command()
@click.option("--data", "data_path", type=str, help="CSV file to analyze.")
@click.option("--fixture", "fixture_name", type=str,
              help="Analyze a named built-in dataset instead of a CSV file.")
@click.option("--filter", "filter_expr", type=str,
              help="Inclusion filter, e.g. 'sqft >= 1500 AND city IN {A, B}'.")
@click.option("--outcome", type=str, help="Numeric outcome feature to compare.")
@click.option("--match", "match_path", type=str,
              help="Match config JSON file (method/covariates/cfSize/indexPolicy).")
@click.option("--covariates", type=str,
              help="Comma-separated covariates (default: all but filter features and outcome).")
@click.option("--method", type=click.Choice(METHODS), default=None,
              help="Similarity method (default euclidean_nn).")
@click.option("--cf-size", type=int, default=None,
              help="Counterfactual size k (default: min(|included|, |excluded|/4)).")
@click.option("--index-policy", type=click.Choice(POLICIES), default=None,
              help="Nearest-neighbor backend (default auto).")
@click.option("--bins", type=int, default=None, help="Histogram bin count (default 20).")
@click.option("--raw-distance", is_flag=True, help="Match on raw feature values (skip z-scoring).")
@click.option("--allow-outcome-covariate", is_flag=True,
              help="Permit the outcome itself as a matching covariate.")
@click.option("--type-hints", "hints_path", type=str,
              help="JSON sidecar {feature: 'numeric'|'categorical'} for CSV loading.")
@click.option("--missing-policy", type=click.Choice(["reject", "drop"]), default="reject",
              help="Reject the load or drop rows when cells are missing.")
@click.option("--out", type=str, default="-", help="Report path ('-' for stdout).")
@click.option("--server", type=str, default=None,
              help="Base URL of a running server (default: run in-process).")
def analyze(data_path, fixture_name, filter_expr, outcome, match_path, covariates,
            method, cf_size, index_policy, bins, raw_distance,
            allow_outcome_covariate, hints_path, missing_policy, out, server):
    """Partition, match, and write the analysis report JSON."""
    if bool(data_path) == bool(fixture_name):
        _fail("exactly one of --data or --fixture is required", EXIT_VALIDATION)
    if not filter_expr:
        _fail("--filter is required", EXIT_VALIDATION)
    if not outcome:
        _fail("--outcome is required", EXIT_VALIDATION)

    hints = _read_json(hints_path) if hints_path else None
    raw_csv = _read_bytes(data_path) if data_path else None

    # Parse the filter locally against the same dataset the server will see,
    # so syntax errors surface with positions before any upload.
    try:
        if data_path:
            dataset = load_csv(raw_csv, type_hints=hints, missing_policy=missing_policy)
        else:
            dataset = get_fixture(fixture_name)
        filter_spec = parse_filter(filter_expr, dataset)
    except CofactError as exc:
        _fail(str(exc), EXIT_VALIDATION)

    if match_path:
        match_doc = _read_json(match_path)
        if not isinstance(match_doc, dict):
            _fail(f"{match_path} must contain a JSON object", EXIT_VALIDATION)
    else:
        match_doc = {}
    if covariates:
        match_doc["covariates"] = [c.strip() for c in covariates.split(",") if c.strip()]
    if method:
        match_doc["method"] = method
    if cf_size is not None:
        match_doc["cfSize"] = cf_size
    if index_policy:
        match_doc["indexPolicy"] = index_policy
    if raw_distance:
        match_doc["standardize"] = False
    if allow_outcome_covariate:
        match_doc["allowOutcomeCovariate"] = True

    body: dict[str, Any] = {"filter": filter_spec.to_json(), "outcome": outcome}
    if match_doc:
        body["match"] = match_doc
    if bins is not None:
        body["bins"] = bins

    try:
        with _client(server) as client:
            if data_path:
                files = {"file": (pathlib.Path(data_path).name, raw_csv, "text/csv")}
                form = {"missingPolicy": missing_policy}
                if hints is not None:
                    form["typeHints"] = json.dumps(hints)
                created = client.post("/sessions", files=files, data=form)
            else:
                created = client.post("/sessions", json={"fixture": fixture_name})
            if created.status_code != 201:
                _fail(f"session creation failed: {_detail_message(created)}",
                      EXIT_VALIDATION)
            session_id = created.json()["sessionId"]
            try:
                response = client.post(f"/sessions/{session_id}/analysis", json=body)
                if response.status_code != 200:
                    _fail(_detail_message(response), EXIT_VALIDATION)
                # verbatim response bytes: CLI output == API output exactly
                _write_bytes(out, response.content)
            finally:
                client.delete(f"/sessions/{session_id}")
    except httpx.HTTPError as exc:
        _fail(f"cannot reach server: {exc}", EXIT_IO)


@main.command("generate-fixture")
@click.option("--name", type=click.Choice(sorted(SCM_FIXTURES)), default=None,
              help="A committed generator spec.")
@click.option("--spec", "spec_path", type=str, default=None,
              help="Custom generator spec JSON (graph + treatment/outcome/n/noiseSd/seed).")
@click.option("--n", type=int, default=None, help="Override sample count.")
@click.option("--seed", type=int, default=None, help="Override RNG seed.")
@click.option("--noise-sd", type=float, default=None, help="Override noise scale.")
@click.option("--out", type=str, default="-", help="CSV path ('-' for stdout).")
def generate_fixture(name, spec_path, n, seed, noise_sd, out):
    """Sample a synthetic dataset from a causal model spec."""
    if bool(name) == bool(spec_path):
        _fail("exactly one of --name or --spec is required", EXIT_VALIDATION)
    try:
        spec = fixture_spec(name) if name else ScmSpec.from_json(_read_json(spec_path))
        overrides = {}
        if n is not None:
            overrides["n"] = n
        if seed is not None:
            overrides["seed"] = seed
        if noise_sd is not None:
            overrides["noise_sd"] = noise_sd
        if overrides:
            spec = dataclasses.replace(spec, **overrides)
        dataset, _ = generate(spec)
    except CofactError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    _write_bytes(out, dataset_to_csv_bytes(dataset))
    if out != "-":
        click.echo(f"wrote {dataset.row_count} rows x {len(dataset.features)} features to {out}",
                   err=True)


@main.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None,
              help=f"Port (default: ${ENV_PORT} or {DEFAULT_PORT}).")
@click.option("--session-cap", type=int, default=None,
              help="Max concurrent sessions before LRU eviction.")
def serve(host, port, session_cap):
    """Run the HTTP API server."""
    import os

    import uvicorn

    if port is None:
        port = int(os.environ.get(ENV_PORT, DEFAULT_PORT))
    uvicorn.run(create_app(session_cap=session_cap), host=host, port=port)


@main.command()
def fixtures():
    """List built-in datasets."""
    for name, description in sorted(list_fixtures().items()):
        click.echo(f"{name}: {description}")


if __name__ == "__main__":
    main()
