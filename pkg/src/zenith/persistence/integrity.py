"""Store-wide health scans: referential orphans, UUID uniqueness, normalization."""

from __future__ import annotations

from sqlalchemy import inspect, text

from zenith.persistence.schema import FOREIGN_KEYS, OWNED_COLUMNS, TABLES
from zenith.persistence.store import Store


def orphan_scan(store: Store) -> list[tuple[str, str, int]]:
    """(child, column, count) for every FK value with no parent row."""
    problems = []
    with store.tx() as conn:
        for child, column, parent in FOREIGN_KEYS:
            count = conn.execute(
                text(
                    f"SELECT count(*) FROM {child} c "
                    f"WHERE c.{column} IS NOT NULL "
                    f"AND NOT EXISTS (SELECT 1 FROM {parent} p WHERE p.id = c.{column})"
                )
            ).scalar()
            if count:
                problems.append((child, column, int(count)))
    return problems


def primary_key_scan(store: Store) -> tuple[int, list[str]]:
    """(total pk count, duplicated pk values) across every domain table."""
    seen: set[str] = set()
    dupes: list[str] = []
    total = 0
    with store.tx() as conn:
        for spec in TABLES:
            for (pk,) in conn.execute(text(f"SELECT id FROM {spec.name}")):
                total += 1
                if pk in seen:
                    dupes.append(pk)
                seen.add(pk)
    return total, dupes


def misplaced_semantic_columns(store: Store) -> list[tuple[str, str]]:
    """(table, column) pairs where an owned column leaked into another table."""
    inspector = inspect(store.engine)
    out = []
    for table in inspector.get_table_names():
        if table == "schema_migrations":
            continue
        for col in inspector.get_columns(table):
            owner = OWNED_COLUMNS.get(col["name"])
            if owner is not None and owner != table:
                out.append((table, col["name"]))
    return out
