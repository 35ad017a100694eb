"""Session persistence: one JSON file per session under a data dir.

Files are rewritten whole after each exchange; desk-scale sessions make
that cheap, and the files stay inspectable with any JSON tool.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .session import Session


class StorageError(Exception):
    pass


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create data dir {self.data_dir}: {exc}") from exc

    def _path(self, session_id: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in session_id)
        return self.data_dir / f"{safe}.json"

    def save(self, session: Session) -> None:
        path = self._path(session.session_id)
        try:
            fd, tmp_name = tempfile.mkstemp(dir=self.data_dir, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(session.to_dict(), handle, ensure_ascii=False)
            os.replace(tmp_name, path)
        except OSError as exc:
            raise StorageError(f"cannot persist session {session.session_id}: {exc}") from exc

    def load(self, session_id: str) -> Session | None:
        path = self._path(session_id)
        if not path.exists():
            return None
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"cannot read session {session_id}: {exc}") from exc
        return Session.from_dict(obj)

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.json"))
