"""Engine wrapper: connection-string stores, migrations, transactions.

Any SQLAlchemy-reachable SQL engine works; the embedded SQLite path is the one
exercised at desk scale. Writers on SQLite take the write lock up front
(BEGIN IMMEDIATE) so unique constraints arbitrate races instead of deadlocks.
"""

from __future__ import annotations

import hashlib
import re
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterator

from sqlalchemy import Connection, create_engine, event, text
from sqlalchemy.exc import OperationalError

from zenith.clock import format_ts
from zenith.errors import MigrationConflict, StoreUnavailable

_MIGRATION_FILE_RE = re.compile(r"^(\d{4})_[a-z0-9_]+\.sql$")


@dataclass(frozen=True)
class SchemaVersion:
    version: int
    applied_at: datetime


@dataclass(frozen=True)
class Migration:
    version: int
    name: str
    sql: str

    @property
    def checksum(self) -> str:
        return hashlib.sha256(self.sql.encode("utf-8")).hexdigest()


def load_migrations(directory: Path | None = None) -> list[Migration]:
    """Numbered SQL files, ascending; packaged files by default."""
    if directory is None:
        directory = Path(str(resources.files("zenith") / "migrations"))
    out = []
    for path in sorted(directory.iterdir()):
        m = _MIGRATION_FILE_RE.match(path.name)
        if not m:
            continue
        out.append(Migration(int(m.group(1)), path.name, path.read_text(encoding="utf-8")))
    if not out:
        raise StoreUnavailable(f"no migration files in {directory}")
    for i, mig in enumerate(out, start=1):
        if mig.version != i:
            raise MigrationConflict(f"migration versions must be 1..N without gaps, got {mig.name}")
    return out


class Store:
    def __init__(self, url: str, migrations_dir: Path | None = None):
        self.url = url
        self._migrations = load_migrations(migrations_dir)
        try:
            if url.startswith("sqlite"):
                self.engine = create_engine(url, connect_args={"timeout": 30, "check_same_thread": False})
                self._tune_sqlite()
            else:
                self.engine = create_engine(url)
        except Exception as exc:  # bad URL / unreachable driver
            raise StoreUnavailable(str(exc)) from exc

    def _tune_sqlite(self) -> None:
        @event.listens_for(self.engine, "connect")
        def _on_connect(dbapi_conn, _record):
            dbapi_conn.isolation_level = None  # transactions managed explicitly below
            cur = dbapi_conn.cursor()
            cur.execute("PRAGMA foreign_keys=ON")
            cur.execute("PRAGMA journal_mode=WAL")
            cur.execute("PRAGMA busy_timeout=30000")
            cur.close()

        @event.listens_for(self.engine, "begin")
        def _on_begin(conn):
            conn.exec_driver_sql("BEGIN IMMEDIATE")

    @contextmanager
    def tx(self) -> Iterator[Connection]:
        """One transaction: commits on exit, rolls back on exception."""
        try:
            with self.engine.begin() as conn:
                yield conn
        except OperationalError as exc:
            raise StoreUnavailable(str(exc)) from exc

    def apply_migrations(self, now: datetime | None = None) -> SchemaVersion:
        """Bring the schema to the latest version; safe to re-run."""
        now = now or datetime.now(timezone.utc)
        with self.tx() as conn:
            conn.exec_driver_sql(
                "CREATE TABLE IF NOT EXISTS schema_migrations ("
                "version INTEGER PRIMARY KEY, name TEXT NOT NULL, "
                "checksum TEXT NOT NULL, applied_at TEXT NOT NULL)"
            )
            applied = {
                row[0]: row[1]
                for row in conn.execute(text("SELECT version, checksum FROM schema_migrations"))
            }
            latest_applied_at = now
            for mig in self._migrations:
                if mig.version in applied:
                    if applied[mig.version] != mig.checksum:
                        raise MigrationConflict(
                            f"checksum mismatch for applied migration {mig.name}"
                        )
                    continue
                for statement in _split_statements(mig.sql):
                    conn.exec_driver_sql(statement)
                conn.execute(
                    text(
                        "INSERT INTO schema_migrations (version, name, checksum, applied_at) "
                        "VALUES (:v, :n, :c, :a)"
                    ),
                    {"v": mig.version, "n": mig.name, "c": mig.checksum, "a": format_ts(now)},
                )
            version = conn.execute(text("SELECT max(version) FROM schema_migrations")).scalar()
        return SchemaVersion(version=int(version), applied_at=latest_applied_at)

    def current_version(self) -> int:
        with self.tx() as conn:
            try:
                v = conn.execute(text("SELECT max(version) FROM schema_migrations")).scalar()
            except OperationalError:
                return 0
        return int(v or 0)

    @property
    def latest_version(self) -> int:
        return self._migrations[-1].version


def _split_statements(sql: str) -> list[str]:
    # Migration files keep one statement per semicolon; no procedural bodies.
    return [s.strip() for s in sql.split(";") if s.strip()]
