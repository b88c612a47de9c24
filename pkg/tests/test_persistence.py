"""Migrations, deterministic export/import, and store integrity scans."""

from __future__ import annotations

import shutil
import threading
from pathlib import Path

import pytest
from sqlalchemy import text

from zenith.errors import Conflict, MigrationConflict, StoreUnavailable
from zenith.persistence.export import export_csv, export_json, import_json
from zenith.persistence.integrity import (
    misplaced_semantic_columns,
    orphan_scan,
    primary_key_scan,
)
from zenith.persistence.schema import TABLE_NAMES
from zenith.persistence.store import Store, load_migrations
from zenith.seeding import SeedProfile, run_seed

from conftest import build_runtime


def _packaged_migrations_dir() -> Path:
    import zenith

    return Path(zenith.__file__).parent / "migrations"


# --- migrations ----------------------------------------------------------------


def test_fresh_store_migrates_to_latest(rt):
    assert rt.store.current_version() == rt.store.latest_version
    with rt.store.tx() as conn:
        names = {
            row[0]
            for row in conn.execute(
                text("SELECT name FROM sqlite_master WHERE type = 'table'")
            )
        }
    assert set(TABLE_NAMES) <= names


def test_migrations_are_idempotent(rt):
    before = rt.store.current_version()
    again = rt.store.apply_migrations()
    assert again.version == before == rt.store.current_version()


def test_tampered_applied_migration_is_refused(tmp_path):
    work = tmp_path / "migrations"
    shutil.copytree(_packaged_migrations_dir(), work)
    store = Store(f"sqlite:///{tmp_path}/db.sqlite", migrations_dir=work)
    store.apply_migrations()

    first = sorted(work.glob("0001_*.sql"))[0]
    first.write_text(first.read_text() + "\n-- tampered\n")
    tampered = Store(f"sqlite:///{tmp_path}/db.sqlite", migrations_dir=work)
    with pytest.raises(MigrationConflict, match="checksum mismatch"):
        tampered.apply_migrations()


def test_migration_version_gaps_are_refused(tmp_path):
    work = tmp_path / "migrations"
    shutil.copytree(_packaged_migrations_dir(), work)
    second = sorted(work.glob("0002_*.sql"))[0]
    second.rename(work / second.name.replace("0002", "0007"))
    with pytest.raises(MigrationConflict, match="without gaps"):
        load_migrations(work)


def test_empty_migrations_dir_is_an_error(tmp_path):
    empty = tmp_path / "none"
    empty.mkdir()
    with pytest.raises(StoreUnavailable):
        load_migrations(empty)


# --- export / import ------------------------------------------------------------


def _seeded_runtime(tmp_path, name="seeded.db"):
    rt = build_runtime(tmp_path, name=name)
    run_seed(rt, SeedProfile(users=6, groups=2, weeks=4, rng_seed=7))
    return rt


def test_export_import_export_round_trips_byte_identical(tmp_path):
    rt = _seeded_runtime(tmp_path)
    first = export_json(rt.store)

    rt2 = build_runtime(tmp_path, name="restore.db")
    counts = import_json(rt2.store, first)
    assert counts["users"] == 6
    second = export_json(rt2.store)
    assert first == second


def test_import_refuses_non_empty_store(tmp_path):
    rt = _seeded_runtime(tmp_path)
    payload = export_json(rt.store)
    with pytest.raises(Conflict, match="empty store"):
        import_json(rt.store, payload)


def test_import_refuses_unknown_tables(tmp_path):
    rt = build_runtime(tmp_path)
    with pytest.raises(ValueError, match="unknown tables"):
        import_json(rt.store, b'{"not_a_table": []}')


def test_export_json_is_stable_across_calls(tmp_path):
    rt = _seeded_runtime(tmp_path)
    assert export_json(rt.store) == export_json(rt.store)


def test_export_covers_every_table(tmp_path):
    import json

    rt = _seeded_runtime(tmp_path)
    data = json.loads(export_json(rt.store))
    assert set(data) == set(TABLE_NAMES)
    assert all(isinstance(rows, list) for rows in data.values())


def test_csv_export_writes_one_file_per_table(tmp_path):
    rt = _seeded_runtime(tmp_path)
    paths = export_csv(rt.store, tmp_path / "csv")
    assert sorted(p.stem for p in paths) == sorted(TABLE_NAMES)
    users_csv = (tmp_path / "csv" / "users.csv").read_bytes()
    assert users_csv.startswith(b"id,email,display_name,role,active,")
    assert b"\r\n" in users_csv  # RFC 4180 line endings
    assert users_csv.count(b"\r\n") == 1 + 6  # header + one row per user


# --- integrity scans -------------------------------------------------------------


def test_seeded_store_passes_all_scans(tmp_path):
    rt = _seeded_runtime(tmp_path)
    assert orphan_scan(rt.store) == []
    total, dupes = primary_key_scan(rt.store)
    assert total > 0 and dupes == []
    assert misplaced_semantic_columns(rt.store) == []


def test_orphan_scan_flags_planted_orphan(tmp_path):
    rt = build_runtime(tmp_path)
    # FK pragmas are per-connection; a raw connection with them off can plant
    # the bad row the scan must find.
    raw = rt.store.engine.raw_connection()
    try:
        cur = raw.cursor()
        cur.execute("PRAGMA foreign_keys=OFF")
        cur.execute(
            "INSERT INTO sessions (id, token, user_id, issued_at, expires_at) "
            "VALUES ('11111111111111111111111111111111', 't', 'missing-user', 'a', 'b')"
        )
        raw.commit()
    finally:
        raw.close()
    assert orphan_scan(rt.store) == [("sessions", "user_id", 1)]


# --- write concurrency ------------------------------------------------------------


def test_parallel_writers_all_commit(tmp_path):
    rt = build_runtime(tmp_path)
    errors: list[Exception] = []

    def write(i: int) -> None:
        try:
            with rt.store.tx() as conn:
                conn.execute(
                    text(
                        "INSERT INTO groups (id, name, archived) "
                        "VALUES (:id, :name, 0)"
                    ),
                    {"id": f"{i:032x}", "name": f"team-{i}"},
                )
        except Exception as exc:  # surface in the main thread
            errors.append(exc)

    threads = [threading.Thread(target=write, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
    with rt.store.tx() as conn:
        count = conn.execute(text("SELECT count(*) FROM groups")).scalar()
    assert count == 8
