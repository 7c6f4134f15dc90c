from .graph import (
    CausalGraph,
    DAG,
    DCG,
    Edge,
    NodeRoleReport,
    ROLE_COLLIDER,
    ROLE_CONFOUNDER,
    ROLE_MEDIATOR,
    ROLE_OTHER,
    check_acyclic,
    classify_roles,
    topological_order,
)
from .rng import CounterStream, fnv1a64
from .scm import GroundTruth, ScmSpec, generate

__all__ = [
    "CausalGraph",
    "CounterStream",
    "DAG",
    "DCG",
    "Edge",
    "GroundTruth",
    "NodeRoleReport",
    "ROLE_COLLIDER",
    "ROLE_CONFOUNDER",
    "ROLE_MEDIATOR",
    "ROLE_OTHER",
    "ScmSpec",
    "check_acyclic",
    "classify_roles",
    "fnv1a64",
    "generate",
    "topological_order",
]
