"""Peer recognition: short public thank-you notes between active accounts."""

from __future__ import annotations

from uuid import UUID

from sqlalchemy import text

from zenith.access import ActionKind, Relation, require
from zenith.clock import format_ts, parse_ts
from zenith.core.models import MAX_KUDOS_LEN, Kudos, UserAccount
from zenith.errors import (
    NotFound,
    RecipientInactive,
    SelfKudos,
    ValidationFailed,
    ValidationIssue,
)
from zenith.runtime import Runtime


def send_kudos(rt: Runtime, actor: UserAccount, to_user_id: UUID, message: str) -> Kudos:
    require(actor.role, ActionKind.SEND_KUDOS, Relation.OUTSIDE)
    if to_user_id == actor.id:
        raise SelfKudos()
    issues = []
    if not message.strip():
        issues.append(ValidationIssue("EMPTY_MESSAGE", "message"))
    elif len(message) > MAX_KUDOS_LEN:
        issues.append(ValidationIssue("MESSAGE_TOO_LONG", "message"))
    if issues:
        raise ValidationFailed(issues)
    now = rt.clock.now()
    with rt.store.tx() as conn:
        recipient = conn.execute(
            text("SELECT active FROM users WHERE id = :id"), {"id": str(to_user_id)}
        ).first()
        if recipient is None:
            raise NotFound(f"user {to_user_id} not found")
        if not recipient.active:
            raise RecipientInactive()
        kudos = Kudos(
            id=rt.ids.uuid(),
            from_user_id=actor.id,
            to_user_id=to_user_id,
            message=message,
            created_at=now,
        )
        conn.execute(
            text(
                "INSERT INTO kudos (id, from_user_id, to_user_id, message, created_at) "
                "VALUES (:id, :f, :t, :m, :c)"
            ),
            {
                "id": str(kudos.id),
                "f": str(actor.id),
                "t": str(to_user_id),
                "m": message,
                "c": format_ts(now),
            },
        )
    return kudos


def _row_to_kudos(r) -> Kudos:
    return Kudos(
        id=UUID(r.id),
        from_user_id=UUID(r.from_user_id),
        to_user_id=UUID(r.to_user_id),
        message=r.message,
        created_at=parse_ts(r.created_at),
    )


def kudos_feed(
    rt: Runtime,
    actor: UserAccount,
    *,
    user_id: UUID | None = None,
    created_from=None,
    created_to=None,
    limit: int = 100,
) -> list[Kudos]:
    """Org-public feed, newest first, ties broken by id for a stable order."""
    require(actor.role, ActionKind.READ_KUDOS_FEED, Relation.OUTSIDE)
    clauses = []
    params: dict = {"limit": min(max(1, limit), 500)}
    if user_id is not None:
        clauses.append("(from_user_id = :u OR to_user_id = :u)")
        params["u"] = str(user_id)
    if created_from is not None:
        clauses.append("created_at >= :cf")
        params["cf"] = format_ts(created_from)
    if created_to is not None:
        clauses.append("created_at <= :ct")
        params["ct"] = format_ts(created_to)
    where = f"WHERE {' AND '.join(clauses)}" if clauses else ""
    with rt.store.tx() as conn:
        rows = conn.execute(
            text(
                "SELECT id, from_user_id, to_user_id, message, created_at FROM kudos "
                f"{where} ORDER BY created_at DESC, id DESC LIMIT :limit"
            ),
            params,
        )
        return [_row_to_kudos(r) for r in rows]


def kudos_tally(rt: Runtime, actor: UserAccount, user_id: UUID) -> dict[str, int]:
    require(actor.role, ActionKind.READ_KUDOS_FEED, Relation.OUTSIDE)
    with rt.store.tx() as conn:
        sent = conn.execute(
            text("SELECT count(*) FROM kudos WHERE from_user_id = :u"), {"u": str(user_id)}
        ).scalar()
        received = conn.execute(
            text("SELECT count(*) FROM kudos WHERE to_user_id = :u"), {"u": str(user_id)}
        ).scalar()
    return {"sent": int(sent), "received": int(received)}
