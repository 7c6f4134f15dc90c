"""In-memory session registry with LRU eviction.

Sessions hold an immutable dataset plus the artifacts of the most recent
analysis (partition and counterfactual row list) so the rows endpoint can
page through subsets. A per-session lock serializes analyses on the same
session; different sessions never contend.
"""

from __future__ import annotations

import datetime as dt
import threading
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

from ..errors import CofactError
from ..filtering import SubsetPartition
from ..tabular import Dataset

DEFAULT_SESSION_CAP = 32


class SessionNotFound(CofactError):
    code = "SESSION_NOT_FOUND"

    def __init__(self, session_id: str):
        super().__init__(f"unknown session {session_id!r}")


@dataclass
class Session:
    id: str
    dataset: Dataset
    created_at: str
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    last_partition: Optional[SubsetPartition] = None
    last_cf_rows: Optional[tuple[int, ...]] = None


class SessionStore:
    def __init__(self, cap: int = DEFAULT_SESSION_CAP):
        if cap < 1:
            raise ValueError("session cap must be at least 1")
        self.cap = cap
        self._lock = threading.Lock()
        self._sessions: OrderedDict[str, Session] = OrderedDict()

    def create(self, dataset: Dataset) -> Session:
        session = Session(
            id=uuid.uuid4().hex,
            dataset=dataset,
            created_at=dt.datetime.now(dt.timezone.utc).isoformat(),
        )
        with self._lock:
            self._sessions[session.id] = session
            while len(self._sessions) > self.cap:
                self._sessions.popitem(last=False)  # evict least recently used
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise SessionNotFound(session_id)
            self._sessions.move_to_end(session_id)
            return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                raise SessionNotFound(session_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
