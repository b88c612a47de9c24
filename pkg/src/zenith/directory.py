"""User and group administration: bootstrap, account creation, group editing.

Deletion is deliberately absent; accounts and groups are archived so the
historical score series stays intact.
"""

from __future__ import annotations

from uuid import UUID

from sqlalchemy import Connection, text
from sqlalchemy.exc import IntegrityError

from zenith.access import ActionKind, Relation, hash_password, load_user, require
from zenith.clock import format_ts
from zenith.core.models import Group, GroupRole, Role, UserAccount
from zenith.core.validation import validate_display_name, validate_email, validate_group_name
from zenith.errors import (
    AlreadyBootstrapped,
    Conflict,
    NotFound,
    ValidationFailed,
    ValidationIssue,
)
from zenith.runtime import Runtime


def create_user(
    rt: Runtime,
    email: str,
    display_name: str,
    role: Role,
    password: str,
    *,
    active: bool = True,
    must_change_password: bool = False,
) -> UserAccount:
    issues = validate_display_name(display_name)
    if not validate_email(email):
        issues.append(ValidationIssue("BAD_EMAIL", "email"))
    if not password:
        issues.append(ValidationIssue("EMPTY_PASSWORD", "password"))
    if issues:
        raise ValidationFailed(issues)
    now = rt.clock.now()
    user = UserAccount(
        id=rt.ids.uuid(),
        email=email,
        display_name=display_name,
        role=role,
        active=active,
        created_at=now,
    )
    with rt.store.tx() as conn:
        try:
            conn.execute(
                text(
                    "INSERT INTO users (id, email, display_name, role, active, password_hash, "
                    "must_change_password, created_at) "
                    "VALUES (:id, :e, :n, :r, :a, :h, :m, :c)"
                ),
                {
                    "id": str(user.id),
                    "e": email,
                    "n": display_name,
                    "r": role.value,
                    "a": 1 if active else 0,
                    "h": hash_password(password, rt.config.auth.hash_cost, rt.ids.salt()),
                    "m": 1 if must_change_password else 0,
                    "c": format_ts(now),
                },
            )
        except IntegrityError:
            raise Conflict(f"email already registered: {email}") from None
    return user


def bootstrap(rt: Runtime, email: str, display_name: str) -> tuple[UserAccount, str]:
    """First-run admin account plus its one-time password."""
    with rt.store.tx() as conn:
        existing = conn.execute(
            text("SELECT count(*) FROM users WHERE role = :r"), {"r": Role.ADMIN.value}
        ).scalar()
    if existing:
        raise AlreadyBootstrapped()
    one_time = rt.ids.token()[:16]
    user = create_user(
        rt, email, display_name, Role.ADMIN, one_time, must_change_password=True
    )
    return user, one_time


def find_user_id_by_email(rt: Runtime, email: str) -> UUID:
    with rt.store.tx() as conn:
        row = conn.execute(
            text("SELECT id FROM users WHERE lower(email) = lower(:e)"), {"e": email}
        ).first()
    if row is None:
        raise NotFound(f"no user with email {email}")
    return UUID(row[0])


def _check_membership_roles(conn: Connection, manager_ids: set[UUID]) -> None:
    for uid in sorted(manager_ids, key=str):
        user = load_user(conn, uid)
        if user is None:
            raise NotFound(f"user {uid} not found")
        if user.role not in (Role.MANAGER, Role.ADMIN):
            raise ValidationFailed.single(
                "MANAGER_ROLE_REQUIRED",
                "managers",
                f"{user.email} has role {user.role.value}; group managers need a "
                "manager or admin account",
            )


def _replace_memberships(
    conn: Connection, group_id: UUID, member_ids: set[UUID], manager_ids: set[UUID], ids
) -> None:
    _check_membership_roles(conn, manager_ids)
    for uid in sorted(member_ids | manager_ids, key=str):
        if load_user(conn, uid) is None:
            raise NotFound(f"user {uid} not found")
    conn.execute(text("DELETE FROM group_members WHERE group_id = :g"), {"g": str(group_id)})
    rows = [(uid, GroupRole.MANAGER_OF) for uid in sorted(manager_ids, key=str)]
    rows += [(uid, GroupRole.MEMBER) for uid in sorted(member_ids - manager_ids, key=str)]
    for uid, role in rows:
        conn.execute(
            text(
                "INSERT INTO group_members (id, group_id, user_id, role_in_group) "
                "VALUES (:id, :g, :u, :r)"
            ),
            {"id": str(ids.uuid()), "g": str(group_id), "u": str(uid), "r": role.value},
        )


def create_group(
    rt: Runtime,
    actor: UserAccount,
    name: str,
    member_ids: set[UUID] | None = None,
    manager_ids: set[UUID] | None = None,
) -> Group:
    require(actor.role, ActionKind.MANAGE_GROUPS, Relation.OUTSIDE)
    issues = validate_group_name(name)
    if issues:
        raise ValidationFailed(issues)
    group = Group(id=rt.ids.uuid(), name=name, archived=False)
    with rt.store.tx() as conn:
        try:
            conn.execute(
                text("INSERT INTO groups (id, name, archived) VALUES (:id, :n, 0)"),
                {"id": str(group.id), "n": name},
            )
        except IntegrityError:
            raise Conflict(f"a group named {name!r} already exists") from None
        _replace_memberships(conn, group.id, member_ids or set(), manager_ids or set(), rt.ids)
    return group


def edit_group(
    rt: Runtime,
    actor: UserAccount,
    group_id: UUID,
    *,
    name: str | None = None,
    archived: bool | None = None,
    member_ids: set[UUID] | None = None,
    manager_ids: set[UUID] | None = None,
) -> Group:
    require(actor.role, ActionKind.MANAGE_GROUPS, Relation.OUTSIDE)
    with rt.store.tx() as conn:
        row = conn.execute(
            text("SELECT id, name, archived FROM groups WHERE id = :id"), {"id": str(group_id)}
        ).first()
        if row is None:
            raise NotFound(f"group {group_id} not found")
        new_name = row.name if name is None else name
        new_archived = bool(row.archived) if archived is None else archived
        if name is not None:
            issues = validate_group_name(name)
            if issues:
                raise ValidationFailed(issues)
        try:
            conn.execute(
                text("UPDATE groups SET name = :n, archived = :a WHERE id = :id"),
                {"n": new_name, "a": 1 if new_archived else 0, "id": str(group_id)},
            )
        except IntegrityError:
            raise Conflict(f"a group named {new_name!r} already exists") from None
        if member_ids is not None or manager_ids is not None:
            current_members, current_managers = _memberships(conn, group_id)
            _replace_memberships(
                conn,
                group_id,
                current_members if member_ids is None else member_ids,
                current_managers if manager_ids is None else manager_ids,
                rt.ids,
            )
    return Group(id=group_id, name=new_name, archived=new_archived)


def _memberships(conn: Connection, group_id: UUID) -> tuple[set[UUID], set[UUID]]:
    members, managers = set(), set()
    rows = conn.execute(
        text("SELECT user_id, role_in_group FROM group_members WHERE group_id = :g"),
        {"g": str(group_id)},
    )
    for user_id, role in rows:
        if role == GroupRole.MANAGER_OF.value:
            managers.add(UUID(user_id))
        else:
            members.add(UUID(user_id))
    return members, managers


def get_group(rt: Runtime, group_id: UUID) -> Group:
    with rt.store.tx() as conn:
        row = conn.execute(
            text("SELECT id, name, archived FROM groups WHERE id = :id"), {"id": str(group_id)}
        ).first()
    if row is None:
        raise NotFound(f"group {group_id} not found")
    return Group(id=UUID(row.id), name=row.name, archived=bool(row.archived))


def list_groups(rt: Runtime, actor: UserAccount) -> list[dict]:
    require(actor.role, ActionKind.MANAGE_GROUPS, Relation.OUTSIDE)
    out = []
    with rt.store.tx() as conn:
        rows = conn.execute(text("SELECT id, name, archived FROM groups ORDER BY name, id"))
        for row in rows:
            members, managers = _memberships(conn, UUID(row.id))
            out.append(
                {
                    "id": row.id,
                    "name": row.name,
                    "archived": bool(row.archived),
                    "members": sorted(str(u) for u in members),
                    "managers": sorted(str(u) for u in managers),
                }
            )
    return out
