"""Deterministic full-store export and import.

JSON: one top-level object keyed by table name, rows sorted by primary key.
CSV: one RFC-4180 file per table with a header row. JSON is the round-trip
format; importing an export reproduces the exact row set.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from sqlalchemy import text

from zenith.errors import Conflict
from zenith.persistence.schema import FK_SAFE_ORDER, TABLES, TABLES_BY_NAME, TableSpec
from zenith.persistence.store import Store


def _row_to_json(spec: TableSpec, row) -> dict:
    out = {}
    for col, value in zip(spec.columns, row):
        if col in spec.bool_columns and value is not None:
            value = bool(value)
        out[col] = value
    return out


def dump_tables(store: Store) -> dict[str, list[dict]]:
    """Every table as sorted JSON-ready rows, inside one consistent read."""
    data: dict[str, list[dict]] = {}
    with store.tx() as conn:
        for spec in TABLES:
            cols = ", ".join(spec.columns)
            rows = conn.execute(text(f"SELECT {cols} FROM {spec.name} ORDER BY id"))
            data[spec.name] = [_row_to_json(spec, row) for row in rows]
    return data


def export_json(store: Store) -> bytes:
    data = dump_tables(store)
    return (json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")


def export_csv(store: Store, out_dir: Path) -> list[Path]:
    """One <table>.csv per table under out_dir; returns written paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    data = dump_tables(store)
    written = []
    for spec in TABLES:
        path = out_dir / f"{spec.name}.csv"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(spec.columns)
        for row in data[spec.name]:
            writer.writerow(_csv_cell(spec, col, row[col]) for col in spec.columns)
        path.write_bytes(buf.getvalue().encode("utf-8"))
        written.append(path)
    return written


def _csv_cell(spec: TableSpec, col: str, value) -> str:
    if value is None:
        return ""
    if col in spec.bool_columns:
        return "true" if value else "false"
    return str(value)


def import_json(store: Store, payload: bytes) -> dict[str, int]:
    """Load an export into a freshly migrated, empty store."""
    data = json.loads(payload.decode("utf-8"))
    unknown = set(data) - set(TABLES_BY_NAME)
    if unknown:
        raise ValueError(f"unknown tables in import: {sorted(unknown)}")
    counts: dict[str, int] = {}
    with store.tx() as conn:
        for name in FK_SAFE_ORDER:
            existing = conn.execute(text(f"SELECT count(*) FROM {name}")).scalar()
            if existing:
                raise Conflict(f"import requires an empty store; {name} has {existing} rows")
        for name in FK_SAFE_ORDER:
            spec = TABLES_BY_NAME[name]
            rows = data.get(name, [])
            if not rows:
                counts[name] = 0
                continue
            cols = ", ".join(spec.columns)
            params = ", ".join(f":{c}" for c in spec.columns)
            stmt = text(f"INSERT INTO {name} ({cols}) VALUES ({params})")
            for row in rows:
                values = {c: row.get(c) for c in spec.columns}
                for c in spec.bool_columns:
                    if values[c] is not None:
                        values[c] = 1 if values[c] else 0
                conn.execute(stmt, values)
            counts[name] = len(rows)
    return counts
