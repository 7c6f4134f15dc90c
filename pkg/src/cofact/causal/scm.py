"""Linear-Gaussian structural model sampling with a binarized treatment.

Each node is a weighted sum of its parents plus Gaussian noise, sampled in
topological order. The treatment node's latent value is squashed through a
logistic and thresholded against a uniform draw, yielding a binary {0, 1}
categorical column; every other node becomes a numeric column. Noise and
threshold draws come from per-node counter streams keyed by node name, so
adding or removing nodes never perturbs the draws of the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from ..errors import GraphError
from ..tabular import CATEGORICAL, Dataset, NUMERIC
from .graph import CausalGraph, topological_order
from .rng import CounterStream


@dataclass(frozen=True)
class ScmSpec:
    """A causal graph plus everything needed to sample from it."""

    graph: CausalGraph
    treatment: str
    outcome: str
    n: int
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for role, node in (("treatment", self.treatment), ("outcome", self.outcome)):
            if node not in self.graph.nodes:
                raise GraphError(f"{role} node {node!r} is not in the graph")
        if self.treatment == self.outcome:
            raise GraphError("treatment and outcome must be distinct nodes")
        if self.n < 1:
            raise GraphError("sample count must be positive")
        if not (self.noise_sd > 0.0 and np.isfinite(self.noise_sd)):
            raise GraphError("noise sd must be a positive finite number")

    def to_json(self) -> dict[str, Any]:
        doc = self.graph.to_json()
        doc.update(
            treatment=self.treatment,
            outcome=self.outcome,
            n=self.n,
            noiseSd=self.noise_sd,
            seed=self.seed,
        )
        return doc

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "ScmSpec":
        graph = CausalGraph.from_json(doc)
        return cls(
            graph=graph,
            treatment=doc["treatment"],
            outcome=doc["outcome"],
            n=int(doc["n"]),
            noise_sd=float(doc.get("noiseSd", 1.0)),
            seed=int(doc.get("seed", 0)),
        )


@dataclass(frozen=True)
class GroundTruth:
    """What the generator knows that the dataset hides."""

    spec: ScmSpec
    treatment_latent: np.ndarray
    treatment_probability: np.ndarray
    direct_effect: float  # weight on the treatment -> outcome edge (0 if absent)
    node_values: dict[str, np.ndarray]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    ex = np.exp(x[~positive])
    out[~positive] = ex / (1.0 + ex)
    return out


def generate(spec: ScmSpec) -> tuple[Dataset, GroundTruth]:
    """Sample ``spec.n`` rows. Requires an acyclic graph.

    The returned dataset has one numeric column per non-treatment node and
    a categorical {"0", "1"} column for the treatment. The treatment's
    continuous latent never appears as a column; it is only available in
    the ground-truth record.
    """
    graph = spec.graph
    order = topological_order(graph)  # raises GraphError on cycles

    parents: dict[str, list[tuple[str, float]]] = {node: [] for node in graph.nodes}
    for edge in graph.edges:
        parents[edge.target].append((edge.source, edge.weight))

    values: dict[str, np.ndarray] = {}
    for node in order:
        noise = CounterStream(spec.seed, f"noise:{node}").normals(spec.n)
        value = noise * spec.noise_sd
        for parent, weight in parents[node]:
            value = value + weight * values[parent]
        values[node] = value

    latent = values[spec.treatment]
    probability = _sigmoid(latent)
    threshold = CounterStream(spec.seed, f"binarize:{spec.treatment}").uniforms(spec.n)
    treated = threshold < probability

    # The binary treatment replaces the latent for all descendants, so
    # re-sample every node downstream of the treatment using the same
    # per-node noise. Ancestors and non-descendants are untouched.
    final: dict[str, np.ndarray] = dict(values)
    final[spec.treatment] = treated.astype(np.float64)
    position = {node: i for i, node in enumerate(order)}
    for node in order[position[spec.treatment] + 1 :]:
        noise = CounterStream(spec.seed, f"noise:{node}").normals(spec.n)
        value = noise * spec.noise_sd
        for parent, weight in parents[node]:
            value = value + weight * final[parent]
        final[node] = value

    columns: dict[str, np.ndarray] = {}
    kinds: dict[str, str] = {}
    for node in graph.nodes:
        if node == spec.treatment:
            columns[node] = np.where(treated, "1", "0").astype(object)
            kinds[node] = CATEGORICAL
        else:
            columns[node] = final[node]
            kinds[node] = NUMERIC

    direct = 0.0
    for edge in graph.edges:
        if edge.source == spec.treatment and edge.target == spec.outcome:
            direct = edge.weight
    truth = GroundTruth(
        spec=spec,
        treatment_latent=latent,
        treatment_probability=probability,
        direct_effect=direct,
        node_values=final,
    )
    return Dataset.from_columns(columns, kinds), truth
