"""Weekly reminder pipeline: schedules, an outbox, and pluggable delivery sinks.

Fire instants are wall-clock times in the schedule's timezone. DST gaps fire
at the first valid instant after the skipped wall time; repeated wall times
fire once, at the first occurrence. The outbox guarantees at most one
reminder per (user, template, period) under concurrent ticks.
"""

from __future__ import annotations

import json
import re
import smtplib
import sys
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from email.message import EmailMessage
from typing import Protocol
from uuid import UUID

from sqlalchemy import text

from zenith.access import ActionKind, Relation, require
from zenith.clock import format_ts, parse_ts
from zenith.config import AppConfig
from zenith.core.models import ReminderSchedule, UserAccount, WEEKDAY_NAMES
from zenith.core.periods import iso_week_of, zone
from zenith.errors import (
    NotFound,
    SinkSendError,
    SinkUnavailable,
    ValidationFailed,
    ValidationIssue,
)
from zenith.runtime import Runtime

_TIME_RE = re.compile(r"^([01]\d|2[0-3]):([0-5]\d)$")


# --- fire-time computation ------------------------------------------------------


def _resolve_wall(naive: datetime, tz) -> datetime:
    """UTC instant for a local wall time, applying the DST rules above."""
    u0 = naive.replace(tzinfo=tz, fold=0).astimezone(timezone.utc)
    u1 = naive.replace(tzinfo=tz, fold=1).astimezone(timezone.utc)
    if u0 == u1:
        return u0
    if u0.astimezone(tz).replace(tzinfo=None) != naive:
        # Skipped wall time: first instant whose local clock has passed it.
        lo, hi = min(u0, u1), max(u0, u1)
        while lo < hi:
            mid = lo + (hi - lo) / 2
            if mid.astimezone(tz).replace(tzinfo=None) >= naive:
                hi = mid
            else:
                lo = mid + timedelta(microseconds=1)
        return lo
    return min(u0, u1)  # repeated wall time: first occurrence


def next_fire_times(
    schedule: ReminderSchedule, start: datetime, horizon: timedelta
) -> list[datetime]:
    """All fire instants t with start <= t < start + horizon.

    Inclusive start makes adjacent horizons concatenate without gaps or
    double-fires.
    """
    tz = zone(schedule.timezone)
    end = start + horizon
    if horizon <= timedelta(0):
        return []
    hh, mm = (int(p) for p in schedule.time_of_day.split(":"))
    day = start.astimezone(tz).date() - timedelta(days=1)
    last_day = end.astimezone(tz).date() + timedelta(days=1)
    out = []
    while day <= last_day:
        if day.weekday() == schedule.weekday:
            t = _resolve_wall(datetime(day.year, day.month, day.day, hh, mm), tz)
            if start <= t < end:
                out.append(t)
        day += timedelta(days=1)
    out.sort()
    return out


# --- sinks -----------------------------------------------------------------------


class Sink(Protocol):
    def send(self, to: str, subject: str, body: str) -> None: ...


class ConsoleSink:
    def __init__(self, out=None):
        self.out = out or sys.stdout

    def send(self, to: str, subject: str, body: str) -> None:
        self.out.write(f"To: {to}\nSubject: {subject}\n\n{body}\n---\n")


class FileSink:
    """Appends one JSON object per message; the desk-scale test sink."""

    def __init__(self, path: str):
        if not path:
            raise SinkUnavailable("file sink requires notify.file_path")
        self.path = path

    def send(self, to: str, subject: str, body: str) -> None:
        line = json.dumps(
            {"to": to, "subject": subject, "body": body}, sort_keys=True, ensure_ascii=False
        )
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
        except OSError as exc:
            raise SinkUnavailable(f"cannot append to {self.path}: {exc}") from exc


class SmtpSink:
    def __init__(self, host: str, port: int, username: str, password: str, sender: str):
        self.host, self.port = host, port
        self.username, self.password = username, password
        self.sender = sender

    def send(self, to: str, subject: str, body: str) -> None:
        msg = EmailMessage()
        msg["From"] = self.sender
        msg["To"] = to
        msg["Subject"] = subject
        msg.set_content(body)
        try:
            with smtplib.SMTP(self.host, self.port, timeout=10) as client:
                if self.username:
                    client.login(self.username, self.password)
                client.send_message(msg)
        except (OSError, smtplib.SMTPConnectError) as exc:
            raise SinkUnavailable(str(exc)) from exc
        except smtplib.SMTPException as exc:
            raise SinkSendError(str(exc)) from exc


def make_sink(config: AppConfig) -> Sink:
    kind = config.notify.sink
    if kind == "console":
        return ConsoleSink()
    if kind == "file":
        return FileSink(config.notify.file_path)
    if kind == "smtp":
        s = config.smtp
        return SmtpSink(s.host, s.port, s.username, s.password, s.from_addr)
    raise SinkUnavailable(f"unknown sink kind: {kind}")


# --- schedule administration -------------------------------------------------------


def parse_weekday(value) -> int:
    if isinstance(value, int) and 0 <= value <= 6:
        return value
    if isinstance(value, str) and value.lower() in WEEKDAY_NAMES:
        return WEEKDAY_NAMES.index(value.lower())
    raise ValidationFailed.single("BAD_WEEKDAY", "weekday")


def _validate_schedule_fields(time_of_day: str, tz_name: str) -> None:
    issues = []
    if not _TIME_RE.match(time_of_day):
        issues.append(ValidationIssue("BAD_TIME", "time_of_day"))
    if issues:
        raise ValidationFailed(issues)
    zone(tz_name)  # raises UnknownTimezone (a ValidationFailed)


def _row_to_schedule(r) -> ReminderSchedule:
    return ReminderSchedule(
        id=UUID(r.id),
        group_id=UUID(r.group_id),
        template_id=UUID(r.template_id),
        weekday=r.weekday,
        time_of_day=r.time_of_day,
        timezone=r.timezone,
        enabled=bool(r.enabled),
    )


def create_schedule(
    rt: Runtime,
    actor: UserAccount,
    group_id: UUID,
    template_id: UUID,
    weekday,
    time_of_day: str,
    tz_name: str,
    enabled: bool = True,
) -> ReminderSchedule:
    require(actor.role, ActionKind.MANAGE_SCHEDULES, Relation.OUTSIDE)
    wd = parse_weekday(weekday)
    _validate_schedule_fields(time_of_day, tz_name)
    now = rt.clock.now()
    with rt.store.tx() as conn:
        assigned = conn.execute(
            text(
                "SELECT 1 FROM template_assignments WHERE group_id = :g AND template_id = :t"
            ),
            {"g": str(group_id), "t": str(template_id)},
        ).first()
        if assigned is None:
            raise ValidationFailed.single("NOT_ASSIGNED", "template_id")
        schedule = ReminderSchedule(
            id=rt.ids.uuid(),
            group_id=group_id,
            template_id=template_id,
            weekday=wd,
            time_of_day=time_of_day,
            timezone=tz_name,
            enabled=enabled,
        )
        conn.execute(
            text(
                "INSERT INTO schedules "
                "(id, group_id, template_id, weekday, time_of_day, timezone, enabled, last_tick) "
                "VALUES (:id, :g, :t, :w, :tod, :tz, :e, :lt)"
            ),
            {
                "id": str(schedule.id),
                "g": str(group_id),
                "t": str(template_id),
                "w": wd,
                "tod": time_of_day,
                "tz": tz_name,
                "e": 1 if enabled else 0,
                "lt": format_ts(now),
            },
        )
    return schedule


def edit_schedule(
    rt: Runtime,
    actor: UserAccount,
    schedule_id: UUID,
    *,
    weekday=None,
    time_of_day: str | None = None,
    tz_name: str | None = None,
    enabled: bool | None = None,
) -> ReminderSchedule:
    require(actor.role, ActionKind.MANAGE_SCHEDULES, Relation.OUTSIDE)
    with rt.store.tx() as conn:
        row = conn.execute(
            text("SELECT * FROM schedules WHERE id = :id"), {"id": str(schedule_id)}
        ).first()
        if row is None:
            raise NotFound(f"schedule {schedule_id} not found")
        current = _row_to_schedule(row)
        wd = parse_weekday(weekday) if weekday is not None else current.weekday
        tod = time_of_day if time_of_day is not None else current.time_of_day
        tz = tz_name if tz_name is not None else current.timezone
        _validate_schedule_fields(tod, tz)
        en = current.enabled if enabled is None else enabled
        conn.execute(
            text(
                "UPDATE schedules SET weekday = :w, time_of_day = :tod, "
                "timezone = :tz, enabled = :e WHERE id = :id"
            ),
            {"w": wd, "tod": tod, "tz": tz, "e": 1 if en else 0, "id": str(schedule_id)},
        )
        return ReminderSchedule(
            id=current.id,
            group_id=current.group_id,
            template_id=current.template_id,
            weekday=wd,
            time_of_day=tod,
            timezone=tz,
            enabled=en,
        )


def list_schedules(rt: Runtime, actor: UserAccount) -> list[ReminderSchedule]:
    require(actor.role, ActionKind.MANAGE_SCHEDULES, Relation.OUTSIDE)
    with rt.store.tx() as conn:
        rows = conn.execute(text("SELECT * FROM schedules ORDER BY id"))
        return [_row_to_schedule(r) for r in rows]


# --- tick and deliver ---------------------------------------------------------------


def tick(rt: Runtime, now: datetime | None = None) -> int:
    """Enqueue reminders for fire instants in (last_tick, now].

    Runs as one write transaction, so concurrent tickers serialize; the
    outbox uniqueness constraint is the backstop either way.
    """
    now = now if now is not None else rt.clock.now()
    org_tz = rt.config.org.timezone
    enqueued = 0
    with rt.store.tx() as conn:
        schedules = conn.execute(
            text("SELECT * FROM schedules WHERE enabled = 1 ORDER BY id")
        ).all()
        for row in schedules:
            last = parse_ts(row.last_tick)
            if now <= last:
                continue
            schedule = _row_to_schedule(row)
            fires = [
                t
                for t in next_fire_times(
                    schedule, last, now - last + timedelta(microseconds=1)
                )
                if t > last
            ]
            for fire in fires:
                period = iso_week_of(fire, org_tz)
                members = conn.execute(
                    text(
                        "SELECT u.id FROM group_members m JOIN users u ON u.id = m.user_id "
                        "WHERE m.group_id = :g AND u.active = 1 "
                        "AND NOT EXISTS (SELECT 1 FROM submissions s WHERE s.user_id = u.id "
                        "AND s.template_id = :t AND s.period = :p) "
                        "ORDER BY u.id"
                    ),
                    {"g": str(schedule.group_id), "t": str(schedule.template_id), "p": period.render()},
                ).all()
                for m in members:
                    result = conn.execute(
                        text(
                            "INSERT OR IGNORE INTO outbox "
                            "(id, user_id, template_id, period, scheduled_for, status, attempts) "
                            "VALUES (:id, :u, :t, :p, :at, 'pending', 0)"
                        ),
                        {
                            "id": str(rt.ids.uuid()),
                            "u": m.id,
                            "t": str(schedule.template_id),
                            "p": period.render(),
                            "at": format_ts(fire),
                        },
                    )
                    enqueued += result.rowcount
            conn.execute(
                text("UPDATE schedules SET last_tick = :now WHERE id = :id"),
                {"now": format_ts(now), "id": str(schedule.id)},
            )
    return enqueued


def render_reminder(display_name: str, title: str, period: str, base_url: str) -> tuple[str, str]:
    subject = f"Check-in reminder: {title} ({period})"
    body = (
        f"Hi {display_name},\n\n"
        f'Your weekly check-in "{title}" for {period} is still open.\n'
        f"Complete it here: {base_url}/checkin\n"
    )
    return subject, body


def deliver(rt: Runtime, batch_size: int | None = None, sink: Sink | None = None) -> dict:
    """Hand up to batch_size pending messages to the sink.

    Every attempt counts, including the successful one, so two failures then
    success leaves attempts=3. A SinkUnavailable aborts the rest of the batch
    with their statuses untouched; already-delivered messages stay Sent.
    """
    cfg = rt.config.notify
    limit = batch_size if batch_size is not None else cfg.batch_size
    sink = sink if sink is not None else make_sink(rt.config)
    with rt.store.tx() as conn:
        rows = conn.execute(
            text(
                "SELECT o.id, o.attempts, o.period, u.email, u.display_name, t.title "
                "FROM outbox o "
                "JOIN users u ON u.id = o.user_id "
                "JOIN templates t ON t.id = o.template_id "
                "WHERE o.status = 'pending' "
                "ORDER BY o.scheduled_for, o.id LIMIT :n"
            ),
            {"n": limit},
        ).all()
    sent = failed = 0
    base_url = rt.config.server.base_url
    for row in rows:
        subject, body = render_reminder(row.display_name, row.title, row.period, base_url)
        attempts = row.attempts + 1
        try:
            sink.send(row.email, subject, body)
        except SinkSendError:
            status = "failed" if attempts >= cfg.max_attempts else "pending"
            if status == "failed":
                failed += 1
        else:
            status = "sent"
            sent += 1
        with rt.store.tx() as conn:
            conn.execute(
                text("UPDATE outbox SET status = :s, attempts = :a WHERE id = :id"),
                {"s": status, "a": attempts, "id": row.id},
            )
    return {"sent": sent, "failed": failed}
