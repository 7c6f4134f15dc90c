"""Named datasets committed with the package.

Three synthetic causal scenarios over nodes {C, T, H} (generated
deterministically from their committed specs) plus a housing table for
realistic filter/outcome demos. The scenario datasets expose T as a binary
categorical treatment, H as the numeric outcome, and C as the third
variable whose causal role differs per scenario.
"""

from __future__ import annotations

import json
from importlib import resources

from .causal.scm import ScmSpec, generate
from .errors import ConfigError
from .tabular import Dataset, load_csv

SCM_FIXTURES = ("fig1a_direct", "fig1b_confounded", "fig1c_collider")

FIXTURES = {
    "fig1a_direct": "binary treatment T directly drives outcome H; C is noise",
    "fig1b_confounded": "C drives both T and H; T has no real effect on H",
    "fig1c_collider": "T and H independently drive C",
    "housing": "506 synthetic house sales, 14 numeric columns (sqft, price, ...)",
}


def list_fixtures() -> dict[str, str]:
    return dict(FIXTURES)


def _data_text(filename: str) -> str:
    return resources.files("cofact.data").joinpath(filename).read_text("utf-8")


def fixture_spec(name: str) -> ScmSpec:
    """The generator spec behind a synthetic scenario fixture."""
    if name not in SCM_FIXTURES:
        raise ConfigError(f"no generator spec for fixture {name!r}")
    return ScmSpec.from_json(json.loads(_data_text(f"{name}.json")))


def get_fixture(name: str) -> Dataset:
    if name in SCM_FIXTURES:
        dataset, _ = generate(fixture_spec(name))
        return dataset
    if name == "housing":
        return load_csv(_data_text("housing.csv"))
    raise ConfigError(
        f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}"
    )
