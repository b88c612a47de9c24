"""Authentication (sessions, password hashing) and the role-based access matrix.

The matrix is the sole authority for who may do what; ``authorize`` is a pure
lookup over (role, action, resource relation).
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from uuid import UUID

from sqlalchemy import Connection, text

from zenith.clock import format_ts, parse_ts
from zenith.core.models import GroupRole, Role, UserAccount
from zenith.errors import (
    AccountInactive,
    Forbidden,
    InvalidCredentials,
    Unauthenticated,
    ValidationFailed,
)
from zenith.runtime import Runtime


class ActionKind(str, Enum):
    SUBMIT_CHECKIN = "submit_checkin"
    READ_SUBMISSION = "read_submission"
    COMMENT_ON_SUBMISSION = "comment_on_submission"
    SEND_KUDOS = "send_kudos"
    READ_KUDOS_FEED = "read_kudos_feed"
    READ_DASHBOARD = "read_dashboard"
    READ_FLAGS = "read_flags"
    MANAGE_GROUPS = "manage_groups"
    MANAGE_TEMPLATES = "manage_templates"
    MANAGE_SCHEDULES = "manage_schedules"


class Relation(str, Enum):
    """How the actor stands to the resource.

    For user-owned resources: OWN is the actor's, IN_MANAGED_GROUP means the
    owner belongs to a group the actor manages. For group resources: OWN means
    plain membership, IN_MANAGED_GROUP means the actor manages the group.
    """

    OWN = "own"
    IN_MANAGED_GROUP = "in_managed_group"
    OUTSIDE = "outside"


class ReasonCode(str, Enum):
    OK = "OK"
    NOT_AUTHENTICATED = "NOT_AUTHENTICATED"
    ROLE_FORBIDDEN = "ROLE_FORBIDDEN"
    NOT_IN_SCOPE = "NOT_IN_SCOPE"


@dataclass(frozen=True)
class AccessDecision:
    allow: bool
    reason_code: ReasonCode

    def __post_init__(self):
        assert self.allow == (self.reason_code is ReasonCode.OK)


_ALL = frozenset({Relation.OWN, Relation.IN_MANAGED_GROUP, Relation.OUTSIDE})
_OWN_ONLY = frozenset({Relation.OWN})
_OWN_AND_MANAGED = frozenset({Relation.OWN, Relation.IN_MANAGED_GROUP})
_MANAGED_ONLY = frozenset({Relation.IN_MANAGED_GROUP})
_NONE: frozenset[Relation] = frozenset()

# Allowed relations per (role, action). Everything not listed here is denied.
ACCESS_MATRIX: dict[tuple[Role, ActionKind], frozenset[Relation]] = {
    # Employees act on their own data and take part in org-wide kudos.
    (Role.EMPLOYEE, ActionKind.SUBMIT_CHECKIN): _OWN_ONLY,
    (Role.EMPLOYEE, ActionKind.READ_SUBMISSION): _OWN_ONLY,
    (Role.EMPLOYEE, ActionKind.COMMENT_ON_SUBMISSION): _OWN_ONLY,
    (Role.EMPLOYEE, ActionKind.SEND_KUDOS): _ALL,
    (Role.EMPLOYEE, ActionKind.READ_KUDOS_FEED): _ALL,
    (Role.EMPLOYEE, ActionKind.READ_DASHBOARD): _NONE,
    (Role.EMPLOYEE, ActionKind.READ_FLAGS): _NONE,
    (Role.EMPLOYEE, ActionKind.MANAGE_GROUPS): _NONE,
    (Role.EMPLOYEE, ActionKind.MANAGE_TEMPLATES): _NONE,
    (Role.EMPLOYEE, ActionKind.MANAGE_SCHEDULES): _NONE,
    # Managers add read/comment reach over members of groups they manage.
    (Role.MANAGER, ActionKind.SUBMIT_CHECKIN): _OWN_ONLY,
    (Role.MANAGER, ActionKind.READ_SUBMISSION): _OWN_AND_MANAGED,
    (Role.MANAGER, ActionKind.COMMENT_ON_SUBMISSION): _OWN_AND_MANAGED,
    (Role.MANAGER, ActionKind.SEND_KUDOS): _ALL,
    (Role.MANAGER, ActionKind.READ_KUDOS_FEED): _ALL,
    (Role.MANAGER, ActionKind.READ_DASHBOARD): _MANAGED_ONLY,
    (Role.MANAGER, ActionKind.READ_FLAGS): _MANAGED_ONLY,
    (Role.MANAGER, ActionKind.MANAGE_GROUPS): _NONE,
    (Role.MANAGER, ActionKind.MANAGE_TEMPLATES): _NONE,
    (Role.MANAGER, ActionKind.MANAGE_SCHEDULES): _NONE,
    # Admins (HR) read everything and own configuration.
    (Role.ADMIN, ActionKind.SUBMIT_CHECKIN): _OWN_ONLY,
    (Role.ADMIN, ActionKind.READ_SUBMISSION): _ALL,
    (Role.ADMIN, ActionKind.COMMENT_ON_SUBMISSION): _ALL,
    (Role.ADMIN, ActionKind.SEND_KUDOS): _ALL,
    (Role.ADMIN, ActionKind.READ_KUDOS_FEED): _ALL,
    (Role.ADMIN, ActionKind.READ_DASHBOARD): _ALL,
    (Role.ADMIN, ActionKind.READ_FLAGS): _ALL,
    (Role.ADMIN, ActionKind.MANAGE_GROUPS): _ALL,
    (Role.ADMIN, ActionKind.MANAGE_TEMPLATES): _ALL,
    (Role.ADMIN, ActionKind.MANAGE_SCHEDULES): _ALL,
}


def authorize(role: Role, action: ActionKind, relation: Relation) -> AccessDecision:
    allowed = ACCESS_MATRIX[(role, action)]
    if relation in allowed:
        return AccessDecision(True, ReasonCode.OK)
    if not allowed:
        return AccessDecision(False, ReasonCode.ROLE_FORBIDDEN)
    return AccessDecision(False, ReasonCode.NOT_IN_SCOPE)


def require(role: Role, action: ActionKind, relation: Relation) -> None:
    decision = authorize(role, action, relation)
    if not decision.allow:
        raise Forbidden(decision.reason_code.value)


# --- scope helpers -----------------------------------------------------------


class ScopeKind(str, Enum):
    OWN = "own"
    MANAGED = "managed"
    ALL = "all"


@dataclass(frozen=True)
class SubmissionScope:
    """Which submissions an actor may see; MANAGED carries the visible users."""

    kind: ScopeKind
    user_ids: frozenset[UUID] = frozenset()


def managed_group_ids(conn: Connection, actor_id: UUID) -> set[UUID]:
    rows = conn.execute(
        text("SELECT group_id FROM group_members WHERE user_id = :u AND role_in_group = :r"),
        {"u": str(actor_id), "r": GroupRole.MANAGER_OF.value},
    )
    return {UUID(r[0]) for r in rows}


def member_group_ids(conn: Connection, actor_id: UUID) -> set[UUID]:
    rows = conn.execute(
        text("SELECT group_id FROM group_members WHERE user_id = :u"), {"u": str(actor_id)}
    )
    return {UUID(r[0]) for r in rows}


def users_in_groups(conn: Connection, group_ids: set[UUID]) -> set[UUID]:
    if not group_ids:
        return set()
    ids = [str(g) for g in group_ids]
    placeholders = ", ".join(f":g{i}" for i in range(len(ids)))
    rows = conn.execute(
        text(f"SELECT user_id FROM group_members WHERE group_id IN ({placeholders})"),
        {f"g{i}": g for i, g in enumerate(ids)},
    )
    return {UUID(r[0]) for r in rows}


def visible_submissions_scope(conn: Connection, actor: UserAccount) -> SubmissionScope:
    if actor.role is Role.ADMIN:
        return SubmissionScope(ScopeKind.ALL)
    if actor.role is Role.MANAGER:
        visible = users_in_groups(conn, managed_group_ids(conn, actor.id)) | {actor.id}
        return SubmissionScope(ScopeKind.MANAGED, frozenset(visible))
    return SubmissionScope(ScopeKind.OWN, frozenset({actor.id}))


def relation_to_user(conn: Connection, actor: UserAccount, owner_id: UUID) -> Relation:
    if actor.id == owner_id:
        return Relation.OWN
    managed = managed_group_ids(conn, actor.id)
    if managed and owner_id in users_in_groups(conn, managed):
        return Relation.IN_MANAGED_GROUP
    return Relation.OUTSIDE


def relation_to_group(conn: Connection, actor: UserAccount, group_id: UUID) -> Relation:
    row = conn.execute(
        text("SELECT role_in_group FROM group_members WHERE group_id = :g AND user_id = :u"),
        {"g": str(group_id), "u": str(actor.id)},
    ).first()
    if row is None:
        return Relation.OUTSIDE
    return Relation.IN_MANAGED_GROUP if row[0] == GroupRole.MANAGER_OF.value else Relation.OWN


# --- passwords ---------------------------------------------------------------

_HASH_SCHEME = "pbkdf2_sha256"


def hash_password(password: str, cost: int, salt: bytes) -> str:
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, cost)
    return f"{_HASH_SCHEME}${cost}${salt.hex()}${digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, cost, salt_hex, digest_hex = stored.split("$")
        if scheme != _HASH_SCHEME:
            return False
        candidate = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(cost)
        )
        return hmac.compare_digest(candidate.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


# --- sessions ----------------------------------------------------------------


@dataclass(frozen=True)
class Session:
    token: str
    user_id: UUID
    issued_at: datetime
    expires_at: datetime


def _row_to_user(row) -> UserAccount:
    return UserAccount(
        id=UUID(row.id),
        email=row.email,
        display_name=row.display_name,
        role=Role(row.role),
        active=bool(row.active),
        created_at=parse_ts(row.created_at),
    )


def load_user(conn: Connection, user_id: UUID) -> UserAccount | None:
    row = conn.execute(
        text(
            "SELECT id, email, display_name, role, active, created_at "
            "FROM users WHERE id = :id"
        ),
        {"id": str(user_id)},
    ).first()
    return None if row is None else _row_to_user(row)


def find_user_by_email(conn: Connection, email: str):
    return conn.execute(
        text(
            "SELECT id, email, display_name, role, active, created_at, "
            "password_hash, must_change_password FROM users WHERE lower(email) = lower(:e)"
        ),
        {"e": email},
    ).first()


def login(rt: Runtime, email: str, password: str, new_password: str | None = None) -> tuple[Session, UserAccount]:
    """Password login. Accounts flagged for rotation must supply new_password."""
    now = rt.clock.now()
    with rt.store.tx() as conn:
        row = find_user_by_email(conn, email)
        if row is None or not verify_password(password, row.password_hash):
            raise InvalidCredentials()
        if not row.active:
            raise AccountInactive(f"account {email} is inactive")
        if row.must_change_password:
            if not new_password:
                raise ValidationFailed.single(
                    "PASSWORD_CHANGE_REQUIRED",
                    "new_password",
                    "a new password must be set on first login",
                )
            conn.execute(
                text("UPDATE users SET password_hash = :h, must_change_password = 0 WHERE id = :id"),
                {
                    "h": hash_password(new_password, rt.config.auth.hash_cost, rt.ids.salt()),
                    "id": row.id,
                },
            )
        session = Session(
            token=rt.ids.token(),
            user_id=UUID(row.id),
            issued_at=now,
            expires_at=now + rt.config.auth.session_ttl,
        )
        conn.execute(
            text(
                "INSERT INTO sessions (id, token, user_id, issued_at, expires_at) "
                "VALUES (:id, :t, :u, :i, :e)"
            ),
            {
                "id": str(rt.ids.uuid()),
                "t": session.token,
                "u": row.id,
                "i": format_ts(session.issued_at),
                "e": format_ts(session.expires_at),
            },
        )
        user = _row_to_user(row)
    return session, user


def logout(rt: Runtime, token: str) -> None:
    with rt.store.tx() as conn:
        conn.execute(text("DELETE FROM sessions WHERE token = :t"), {"t": token})


def authenticate(rt: Runtime, token: str) -> UserAccount:
    """Resolve a bearer token to its account or raise Unauthenticated."""
    now = rt.clock.now()
    with rt.store.tx() as conn:
        row = conn.execute(
            text(
                "SELECT u.id, u.email, u.display_name, u.role, u.active, u.created_at, "
                "s.expires_at FROM sessions s JOIN users u ON u.id = s.user_id "
                "WHERE s.token = :t"
            ),
            {"t": token},
        ).first()
    if row is None:
        raise Unauthenticated("unknown session token")
    if parse_ts(row.expires_at) <= now:
        raise Unauthenticated("session expired")
    if not row.active:
        raise Unauthenticated("account inactive")
    return _row_to_user(row)
