"""Directed causal graphs: validation, cycle detection, node roles.

Two graph kinds are supported: ``dag`` (acyclic, required for data
generation) and ``dcg`` (cycles allowed, representable and analyzable but
never sampled).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import GraphError

DAG = "dag"
DCG = "dcg"

ROLE_CONFOUNDER = "confounder"
ROLE_COLLIDER = "collider"
ROLE_MEDIATOR = "mediator"
ROLE_OTHER = "other"


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class CausalGraph:
    """Directed graph over named variables with real edge weights."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    kind: str = DAG

    def __post_init__(self):
        if self.kind not in (DAG, DCG):
            raise GraphError(f"unknown graph kind {self.kind!r}")
        seen = set()
        for name in self.nodes:
            if not name:
                raise GraphError("node names must be non-empty")
            if name in seen:
                raise GraphError(f"duplicate node {name!r}")
            seen.add(name)
        pairs = set()
        for e in self.edges:
            if e.source not in seen:
                raise GraphError(f"edge references unknown node {e.source!r}")
            if e.target not in seen:
                raise GraphError(f"edge references unknown node {e.target!r}")
            if e.source == e.target:
                raise GraphError(f"self-loop on {e.source!r} is not allowed")
            if (e.source, e.target) in pairs:
                raise GraphError(f"duplicate edge {e.source!r} -> {e.target!r}")
            pairs.add((e.source, e.target))
            if not math.isfinite(e.weight):
                raise GraphError(
                    f"edge {e.source!r} -> {e.target!r} has non-finite weight"
                )
        if self.kind == DAG:
            acyclic, cycle = check_acyclic_edges(self.nodes, self.edges)
            if not acyclic:
                raise GraphError(
                    "kind 'dag' requires an acyclic edge set; found cycle "
                    + " -> ".join(cycle)
                )

    def successors(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.edges:
            adj[e.source].append(e.target)
        return adj

    def predecessors(self) -> dict[str, list[tuple[str, float]]]:
        pred: dict[str, list[tuple[str, float]]] = {n: [] for n in self.nodes}
        for e in self.edges:
            pred[e.target].append((e.source, e.weight))
        return pred

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [
                {"from": e.source, "to": e.target, "weight": e.weight}
                for e in self.edges
            ],
            "kind": self.kind,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CausalGraph":
        try:
            nodes = tuple(str(n) for n in obj["nodes"])
            edges = tuple(
                Edge(str(e["from"]), str(e["to"]), float(e["weight"]))
                for e in obj.get("edges", [])
            )
            kind = str(obj.get("kind", DAG))
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        return cls(nodes=nodes, edges=edges, kind=kind)


def check_acyclic_edges(
    nodes: tuple[str, ...], edges: tuple[Edge, ...]
) -> tuple[bool, list[str] | None]:
    """Cycle check on a raw edge set, usable before a graph is constructed.

    Returns (True, None) when a topological order exists, otherwise
    (False, witness) where the witness is a node sequence whose first element
    is repeated at the end, e.g. ['a', 'b', 'a'] for a -> b -> a.
    """
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for e in edges:
        adj[e.source].append(e.target)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}

    for root in nodes:
        if color[root] != WHITE:
            continue
        # Iterative DFS; path holds the gray chain for witness extraction.
        path: list[str] = []
        stack: list[tuple[str, int]] = [(root, 0)]
        color[root] = GRAY
        path.append(root)
        while stack:
            node, child_pos = stack[-1]
            children = adj[node]
            if child_pos < len(children):
                stack[-1] = (node, child_pos + 1)
                child = children[child_pos]
                if color[child] == GRAY:
                    start = path.index(child)
                    return False, path[start:] + [child]
                if color[child] == WHITE:
                    color[child] = GRAY
                    path.append(child)
                    stack.append((child, 0))
            else:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return True, None


def check_acyclic(graph: CausalGraph) -> tuple[bool, list[str] | None]:
    """True iff the graph admits a topological order; else a witness cycle."""
    return check_acyclic_edges(graph.nodes, graph.edges)


def topological_order(graph: CausalGraph) -> list[str]:
    """Kahn's algorithm; raises GraphError on cyclic input.

    Deterministic: among ready nodes, original node order wins.
    """
    indegree = {n: 0 for n in graph.nodes}
    for e in graph.edges:
        indegree[e.target] += 1
    adj = graph.successors()
    order: list[str] = []
    ready = [n for n in graph.nodes if indegree[n] == 0]
    while ready:
        node = ready.pop(0)
        order.append(node)
        newly_ready = []
        for child in adj[node]:
            indegree[child] -= 1
            if indegree[child] == 0:
                newly_ready.append(child)
        # Keep global node order among ready nodes for determinism.
        ready = sorted(ready + newly_ready, key=graph.nodes.index)
    if len(order) != len(graph.nodes):
        raise GraphError("graph has a directed cycle; no topological order")
    return order


def _reachable_from(adj: dict[str, list[str]], start: str, banned: str | None = None) -> set[str]:
    """Nodes reachable from start by directed paths avoiding ``banned``."""
    seen: set[str] = set()
    if start == banned:
        return seen
    stack = [start]
    seen.add(start)
    while stack:
        node = stack.pop()
        for child in adj[node]:
            if child == banned or child in seen:
                continue
            seen.add(child)
            stack.append(child)
    seen.discard(start)
    return seen


@dataclass(frozen=True)
class NodeRoleReport:
    """Role of every node relative to a (treatment, outcome) pair."""

    treatment: str
    outcome: str
    roles: dict[str, str] = field(default_factory=dict)


def classify_roles(graph: CausalGraph, treatment: str, outcome: str) -> NodeRoleReport:
    """Classify each node as confounder, collider, mediator, or other.

    Definitions, all via directed reachability:
      * confounder: directed paths into both treatment and outcome, where the
        path into one does not pass through the other;
      * collider: both treatment and outcome have directed paths into it;
      * mediator: lies on a directed treatment -> node -> outcome path.

    The three can overlap only in cyclic graphs; precedence there is
    confounder > collider > mediator. Treatment and outcome themselves are
    'other'.
    """
    for name in (treatment, outcome):
        if name not in graph.nodes:
            raise GraphError(f"unknown node {name!r}")
    if treatment == outcome:
        raise GraphError("treatment and outcome must be distinct nodes")

    adj = graph.successors()
    from_treatment = _reachable_from(adj, treatment)
    from_outcome = _reachable_from(adj, outcome)

    roles: dict[str, str] = {}
    for node in graph.nodes:
        if node in (treatment, outcome):
            roles[node] = ROLE_OTHER
            continue
        reach_avoid_outcome = _reachable_from(adj, node, banned=outcome)
        reach_avoid_treatment = _reachable_from(adj, node, banned=treatment)
        if treatment in reach_avoid_outcome and outcome in reach_avoid_treatment:
            roles[node] = ROLE_CONFOUNDER
        elif node in from_treatment and node in from_outcome:
            roles[node] = ROLE_COLLIDER
        elif node in from_treatment and outcome in _reachable_from(adj, node):
            roles[node] = ROLE_MEDIATOR
        else:
            roles[node] = ROLE_OTHER
    return NodeRoleReport(treatment=treatment, outcome=outcome, roles=roles)
