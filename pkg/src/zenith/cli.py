"""Operator CLI. Talks to the store through the same domain layer as the API,
so anything done here is byte-for-byte what the API would have written.

Exit codes: 0 success, 1 domain-state error (conflict, not found, forbidden),
2 usage or validation error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from uuid import UUID

import click

from zenith import analytics, checkin, directory, notifier
from zenith.access import find_user_by_email, verify_password, _row_to_user
from zenith.core.models import QuestionKind, Role, WEEKDAY_NAMES
from zenith.core.periods import PeriodId, iso_week_of
from zenith.errors import DomainError, Forbidden, NotFound, ValidationFailed
from zenith.config import load_config
from zenith.persistence.export import export_csv, export_json, import_json
from zenith.runtime import Runtime, make_runtime
from zenith.seeding import SeedProfile, run_seed


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn, *args, **kwargs):
    """Run a domain call, translating errors into exit codes."""
    try:
        return fn(*args, **kwargs)
    except ValidationFailed as exc:
        _fail(str(exc), 2)
    except DomainError as exc:
        _fail(str(exc), 1)


def _parse_uuid(value: str, label: str) -> UUID:
    try:
        return UUID(value)
    except ValueError:
        _fail(f"{label} is not a UUID: {value}", 2)


def _parse_period(value: str, label: str) -> PeriodId:
    try:
        return PeriodId.parse(value)
    except ValueError:
        _fail(f"{label} must look like 2025-W07: {value}", 2)


def _resolve_actor(rt: Runtime):
    email = rt.config.admin.email or click.prompt("admin email")
    password = rt.config.admin.password or click.prompt("admin password", hide_input=True)
    with rt.store.tx() as conn:
        row = find_user_by_email(conn, email)
    if row is None or not verify_password(password, row.password_hash):
        _fail("admin credentials rejected", 1)
    return _row_to_user(row)


def _resolve_user_ids(rt: Runtime, emails: tuple[str, ...]) -> set[UUID]:
    return {_guard(directory.find_user_id_by_email, rt, e) for e in emails}


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="INI config file")
@click.pass_context
def main(ctx: click.Context, config_path: str | None):
    """zenith-admin: bootstrap, groups, templates, schedules, seed, export."""
    config = load_config(config_path)
    rt = make_runtime(config)
    rt.store.apply_migrations()
    ctx.obj = rt


@main.command()
@click.option("--email", required=True)
@click.option("--name", "display_name", required=True)
@click.pass_obj
def bootstrap(rt: Runtime, email: str, display_name: str):
    """Create the first admin account and print its one-time password."""
    user, one_time = _guard(directory.bootstrap, rt, email, display_name)
    click.echo(f"admin created: {user.id}")
    click.echo(f"one-time password (change at first login): {one_time}")


@main.group()
def user():
    """User accounts."""


@user.command("create")
@click.option("--email", required=True)
@click.option("--name", "display_name", required=True)
@click.option("--role", type=click.Choice([r.value for r in Role]), default=Role.EMPLOYEE.value)
@click.option("--password", required=True)
@click.pass_obj
def user_create(rt: Runtime, email: str, display_name: str, role: str, password: str):
    actor = _resolve_actor(rt)
    if actor.role is not Role.ADMIN:
        _fail(str(Forbidden("ROLE_FORBIDDEN", "only admins may create accounts")), 1)
    created = _guard(directory.create_user, rt, email, display_name, Role(role), password)
    click.echo(f"user created: {created.id}")


@main.group()
def group():
    """Team groups."""


@group.command("create")
@click.option("--name", required=True)
@click.option("--member", "members", multiple=True, help="member email (repeatable)")
@click.option("--manager", "managers", multiple=True, help="manager email (repeatable)")
@click.pass_obj
def group_create(rt: Runtime, name: str, members: tuple[str, ...], managers: tuple[str, ...]):
    actor = _resolve_actor(rt)
    created = _guard(
        directory.create_group,
        rt,
        actor,
        name,
        member_ids=_resolve_user_ids(rt, members) if members else None,
        manager_ids=_resolve_user_ids(rt, managers) if managers else None,
    )
    click.echo(f"group created: {created.id}")


@group.command("edit")
@click.argument("group_id")
@click.option("--name", default=None)
@click.option("--archive/--unarchive", "archived", default=None)
@click.option("--member", "members", multiple=True)
@click.option("--manager", "managers", multiple=True)
@click.pass_obj
def group_edit(rt, group_id, name, archived, members, managers):
    actor = _resolve_actor(rt)
    updated = _guard(
        directory.edit_group,
        rt,
        actor,
        _parse_uuid(group_id, "group_id"),
        name=name,
        archived=archived,
        member_ids=_resolve_user_ids(rt, members) if members else None,
        manager_ids=_resolve_user_ids(rt, managers) if managers else None,
    )
    click.echo(f"group updated: {updated.id}")


@group.command("list")
@click.pass_obj
def group_list(rt: Runtime):
    actor = _resolve_actor(rt)
    for g in _guard(directory.list_groups, rt, actor):
        state = "archived" if g["archived"] else "live"
        click.echo(f"{g['id']}  {g['name']}  [{state}]  members={len(g['members'])}")


@main.group()
def template():
    """Check-in templates."""


@template.command("import")
@click.argument("path", type=click.Path(exists=True))
@click.pass_obj
def template_import(rt: Runtime, path: str):
    """Create a template from a JSON file: {title, questions: [{prompt, kind, required}]}."""
    actor = _resolve_actor(rt)
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        title = payload["title"]
        drafts = [
            checkin.QuestionDraft(
                prompt=q["prompt"],
                kind=QuestionKind(q["kind"]),
                required=bool(q.get("required", True)),
            )
            for q in payload["questions"]
        ]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        _fail(f"bad template file: {exc}", 2)
    created = _guard(checkin.create_template, rt, actor, title, drafts)
    click.echo(f"template created: {created.id}")


@template.command("assign")
@click.argument("template_id")
@click.option("--group", "group_id", required=True)
@click.option("--from", "active_from", required=True, help="first active ISO week, e.g. 2025-W10")
@click.pass_obj
def template_assign(rt, template_id, group_id, active_from):
    actor = _resolve_actor(rt)
    assignment = _guard(
        checkin.assign_and_activate,
        rt,
        actor,
        _parse_uuid(template_id, "template_id"),
        _parse_uuid(group_id, "group"),
        _parse_period(active_from, "--from"),
    )
    click.echo(
        f"assigned template {assignment.template_id} to group "
        f"{assignment.group_id} from {assignment.active_from}"
    )


@template.command("list")
@click.pass_obj
def template_list(rt: Runtime):
    actor = _resolve_actor(rt)
    for t in _guard(checkin.list_templates, rt, actor):
        click.echo(f"{t.id}  {t.title}  [{t.status.value}]  questions={len(t.questions)}")


@main.group()
def schedule():
    """Reminder schedules."""


@schedule.command("create")
@click.option("--group", "group_id", required=True)
@click.option("--template", "template_id", required=True)
@click.option("--weekday", required=True, help="mon..sun or 0..6")
@click.option("--time", "time_of_day", required=True, help="HH:MM local")
@click.option("--timezone", "tz_name", required=True)
@click.option("--disabled", is_flag=True, default=False)
@click.pass_obj
def schedule_create(rt, group_id, template_id, weekday, time_of_day, tz_name, disabled):
    actor = _resolve_actor(rt)
    created = _guard(
        notifier.create_schedule,
        rt,
        actor,
        _parse_uuid(group_id, "group"),
        _parse_uuid(template_id, "template"),
        weekday,
        time_of_day,
        tz_name,
        enabled=not disabled,
    )
    click.echo(f"schedule created: {created.id}")


@schedule.command("list")
@click.pass_obj
def schedule_list(rt: Runtime):
    actor = _resolve_actor(rt)
    for s in _guard(notifier.list_schedules, rt, actor):
        state = "on" if s.enabled else "off"
        click.echo(
            f"{s.id}  group={s.group_id}  {WEEKDAY_NAMES[s.weekday]} "
            f"{s.time_of_day} {s.timezone}  [{state}]"
        )


@main.command()
@click.option("--users", default=20, show_default=True)
@click.option("--groups", default=3, show_default=True)
@click.option("--weeks", default=12, show_default=True)
@click.option("--seed", "rng_seed", default=42, show_default=True)
@click.pass_obj
def seed(rt: Runtime, users: int, groups: int, weeks: int, rng_seed: int):
    """Write deterministic synthetic users, submissions, and kudos."""
    profile = _guard(SeedProfile, users=users, groups=groups, weeks=weeks, rng_seed=rng_seed)
    summary = _guard(run_seed, rt, profile)
    click.echo(
        f"seeded users={summary['users']} submissions={summary['submissions']} "
        f"kudos={summary['kudos']}"
    )


@main.command()
@click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_obj
def export(rt: Runtime, fmt: str, out_path: str):
    """Dump every table; json writes one file, csv one file per table."""
    if fmt == "json":
        Path(out_path).write_bytes(_guard(export_json, rt.store))
        click.echo(f"wrote {out_path}")
    else:
        paths = _guard(export_csv, rt.store, Path(out_path))
        click.echo(f"wrote {len(paths)} csv files under {out_path}")


@main.command(name="import")
@click.argument("path", type=click.Path(exists=True))
@click.pass_obj
def import_(rt: Runtime, path: str):
    """Load a JSON export into an empty store."""
    counts = _guard(import_json, rt.store, Path(path).read_bytes())
    click.echo(f"imported {sum(counts.values())} rows across {len(counts)} tables")


@main.group()
def flags():
    """Red-flag detection and review."""


def _default_range(rt: Runtime) -> tuple[PeriodId, PeriodId]:
    end = iso_week_of(rt.clock.now(), rt.config.org.timezone)
    start = end
    for _ in range(11):
        start = start.prev()
    return start, end


@flags.command("detect")
@click.option("--from", "period_from", default=None, help="first ISO week (default: 12 weeks back)")
@click.option("--to", "period_to", default=None, help="last ISO week (default: current)")
@click.pass_obj
def flags_detect(rt: Runtime, period_from: str | None, period_to: str | None):
    """Evaluate the rules over the range and persist any new flags."""
    default_start, default_end = _default_range(rt)
    start = _parse_period(period_from, "--from") if period_from else default_start
    end = _parse_period(period_to, "--to") if period_to else default_end
    found, new = _guard(analytics.run_detection, rt, start, end)
    click.echo(f"detected {found} flag events, persisted {new} new")


@flags.command("list")
@click.option("--group", "group_id", default=None)
@click.option("--from", "period_from", default=None)
@click.option("--to", "period_to", default=None)
@click.pass_obj
def flags_list(rt: Runtime, group_id: str | None, period_from: str | None, period_to: str | None):
    actor = _resolve_actor(rt)
    items = _guard(
        analytics.list_flags,
        rt,
        actor,
        group_id=_parse_uuid(group_id, "group") if group_id else None,
        period_from=_parse_period(period_from, "--from") if period_from else None,
        period_to=_parse_period(period_to, "--to") if period_to else None,
    )
    for f in items:
        click.echo(
            f"{f['period_end']}  {f['rule']:<10}  {f['severity']:<6}  "
            f"{f['subject_kind']}:{f['subject_id']}  {f['details']}"
        )
    if not items:
        click.echo("no flags")


if __name__ == "__main__":
    main()
