"""In-memory sessions with optional timed JSON snapshots.

One table per session. Writes on a session are serialized through its
lock; reads see the last committed model (models are immutable values,
so a reference grab is a consistent snapshot).
"""

from __future__ import annotations

import json
import secrets
import threading
from pathlib import Path
from typing import Optional

from .. import importer, transform
from ..model import TableModel, TableUnit


class Session:
    def __init__(self, session_id: str, base: TableModel):
        self.id = session_id
        self.history = transform.History(base)
        self.selections: dict[str, TableUnit] = {}
        self.configs: dict[str, dict] = {}
        self.lock = threading.Lock()

    @property
    def current(self) -> TableModel:
        return self.history.current

    def snapshot_dict(self) -> dict:
        return {
            "session_id": self.id,
            "base": importer.serialize_htj(self.history.base),
            "ops": [transform.op_to_dict(op) for op in self.history.ops()],
        }

    @classmethod
    def from_snapshot(cls, doc: dict) -> "Session":
        sess = cls(doc["session_id"], importer.parse_htj(doc["base"]))
        for op in doc.get("ops", []):
            sess.history.apply(transform.op_from_dict(op))
        return sess


class SessionStore:
    def __init__(self, snapshot_dir: Optional[str] = None, snapshot_interval: float = 30.0):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        self.snapshot_interval = snapshot_interval
        self._timer: Optional[threading.Timer] = None
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)
            self._restore()

    def create(self, base: TableModel) -> Session:
        sess = Session(secrets.token_hex(8), base)
        with self._lock:
            self._sessions[sess.id] = sess
        return sess

    def get(self, session_id: str) -> Optional[Session]:
        with self._lock:
            return self._sessions.get(session_id)

    def all(self) -> list[Session]:
        with self._lock:
            return list(self._sessions.values())

    # -- snapshots ----------------------------------------------------------

    def save_snapshots(self) -> None:
        if not self.snapshot_dir:
            return
        for sess in self.all():
            with sess.lock:
                doc = sess.snapshot_dict()
            path = self.snapshot_dir / f"{sess.id}.json"
            path.write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")

    def _restore(self) -> None:
        for path in sorted(self.snapshot_dir.glob("*.json")):
            try:
                sess = Session.from_snapshot(json.loads(path.read_text(encoding="utf-8")))
            except Exception:
                continue  # a broken snapshot must not block startup
            self._sessions[sess.id] = sess

    def start_snapshot_timer(self) -> None:
        if not self.snapshot_dir:
            return

        def tick():
            self.save_snapshots()
            self._timer = threading.Timer(self.snapshot_interval, tick)
            self._timer.daemon = True
            self._timer.start()

        self._timer = threading.Timer(self.snapshot_interval, tick)
        self._timer.daemon = True
        self._timer.start()

    def stop_snapshot_timer(self) -> None:
        if self._timer:
            self._timer.cancel()
            self._timer = None
