"""Single registry of the relational layout: table names, columns, key shapes.

Export, import, and the integrity scans all read from here so the schema is
described exactly once outside the DDL.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TableSpec:
    name: str
    columns: tuple[str, ...]  # DDL order; first column is the UUID primary key
    bool_columns: frozenset[str] = frozenset()
    int_columns: frozenset[str] = frozenset()
    nullable_columns: frozenset[str] = frozenset()


TABLES: tuple[TableSpec, ...] = (
    TableSpec(
        "users",
        ("id", "email", "display_name", "role", "active", "password_hash", "must_change_password", "created_at"),
        bool_columns=frozenset({"active", "must_change_password"}),
    ),
    TableSpec("groups", ("id", "name", "archived"), bool_columns=frozenset({"archived"})),
    TableSpec("group_members", ("id", "group_id", "user_id", "role_in_group")),
    TableSpec("sessions", ("id", "token", "user_id", "issued_at", "expires_at")),
    TableSpec("templates", ("id", "title", "status", "created_by", "created_at")),
    TableSpec(
        "questions",
        ("id", "template_id", "position", "prompt", "kind", "required"),
        bool_columns=frozenset({"required"}),
        int_columns=frozenset({"position"}),
    ),
    TableSpec("template_assignments", ("id", "template_id", "group_id", "active_from")),
    TableSpec(
        "submissions",
        ("id", "user_id", "template_id", "period", "revision", "submitted_at"),
        int_columns=frozenset({"revision"}),
    ),
    TableSpec(
        "answers",
        ("id", "submission_id", "question_id", "value_int", "value_text"),
        int_columns=frozenset({"value_int"}),
        nullable_columns=frozenset({"value_int", "value_text"}),
    ),
    TableSpec(
        "comments",
        ("id", "submission_id", "question_id", "author_id", "body", "created_at"),
        nullable_columns=frozenset({"question_id"}),
    ),
    TableSpec("kudos", ("id", "from_user_id", "to_user_id", "message", "created_at")),
    TableSpec(
        "red_flags",
        ("id", "subject_kind", "subject_id", "rule", "period_end", "severity", "details"),
    ),
    TableSpec(
        "schedules",
        ("id", "group_id", "template_id", "weekday", "time_of_day", "timezone", "enabled", "last_tick"),
        bool_columns=frozenset({"enabled"}),
        int_columns=frozenset({"weekday"}),
    ),
    TableSpec(
        "outbox",
        ("id", "user_id", "template_id", "period", "scheduled_for", "status", "attempts"),
        int_columns=frozenset({"attempts"}),
    ),
)

TABLE_NAMES: tuple[str, ...] = tuple(t.name for t in TABLES)
TABLES_BY_NAME: dict[str, TableSpec] = {t.name: t for t in TABLES}

# Insert order that satisfies every foreign key.
FK_SAFE_ORDER: tuple[str, ...] = (
    "users",
    "groups",
    "group_members",
    "sessions",
    "templates",
    "questions",
    "template_assignments",
    "submissions",
    "answers",
    "comments",
    "kudos",
    "red_flags",
    "schedules",
    "outbox",
)

# (child table, fk column, parent table) for the orphan scan.
FOREIGN_KEYS: tuple[tuple[str, str, str], ...] = (
    ("group_members", "group_id", "groups"),
    ("group_members", "user_id", "users"),
    ("sessions", "user_id", "users"),
    ("templates", "created_by", "users"),
    ("questions", "template_id", "templates"),
    ("template_assignments", "template_id", "templates"),
    ("template_assignments", "group_id", "groups"),
    ("submissions", "user_id", "users"),
    ("submissions", "template_id", "templates"),
    ("answers", "submission_id", "submissions"),
    ("answers", "question_id", "questions"),
    ("comments", "submission_id", "submissions"),
    ("comments", "question_id", "questions"),
    ("comments", "author_id", "users"),
    ("kudos", "from_user_id", "users"),
    ("kudos", "to_user_id", "users"),
    ("schedules", "group_id", "groups"),
    ("schedules", "template_id", "templates"),
    ("outbox", "user_id", "users"),
    ("outbox", "template_id", "templates"),
)

# Semantic columns that must exist in exactly one table (normalization guard).
OWNED_COLUMNS: dict[str, str] = {
    "email": "users",
    "display_name": "users",
    "password_hash": "users",
    "prompt": "questions",
    "message": "kudos",
    "body": "comments",
    "title": "templates",
    "name": "groups",
}
