from .app import (
    AnalysisRequestBody,
    DEFAULT_PORT,
    ENV_PORT,
    ENV_SESSION_CAP,
    analysis_response_bytes,
    create_app,
    default_covariates,
    run_analysis,
)
from .store import DEFAULT_SESSION_CAP, Session, SessionNotFound, SessionStore

__all__ = [
    "AnalysisRequestBody",
    "DEFAULT_PORT",
    "DEFAULT_SESSION_CAP",
    "ENV_PORT",
    "ENV_SESSION_CAP",
    "Session",
    "SessionNotFound",
    "SessionStore",
    "analysis_response_bytes",
    "create_app",
    "default_covariates",
    "run_analysis",
]
