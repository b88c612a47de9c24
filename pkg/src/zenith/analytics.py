"""Sentiment scoring, weekly series, group aggregates, dashboards, and the
red-flag rule engine.

All numbers managers see are Decimals rounded half-up to 2 places at scoring
time; rules evaluate the same rounded values, so a flag is always explainable
from the visible dashboard.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from uuid import UUID

from sqlalchemy import Connection, text

from zenith.access import (
    ActionKind,
    Relation,
    managed_group_ids,
    relation_to_group,
    require,
)
from zenith.checkin import active_assignment_for_group, load_template
from zenith.clock import format_ts
from zenith.config import FlagsConfig
from zenith.core.models import CheckInSubmission, CheckInTemplate, QuestionKind, Role, UserAccount
from zenith.core.periods import PeriodId, period_range, week_bounds_utc
from zenith.errors import NotFound, RangeTooLarge
from zenith.runtime import Runtime

TWO_PLACES = Decimal("0.01")
MAX_RANGE_WEEKS = 104


def round2(value: Decimal) -> Decimal:
    return value.quantize(TWO_PLACES, rounding=ROUND_HALF_UP)


class FlagRule(str, Enum):
    LOW_WEEK = "LOW_WEEK"
    DECLINE_3W = "DECLINE_3W"
    MISSED_2W = "MISSED_2W"
    GROUP_LOW = "GROUP_LOW"


class Severity(str, Enum):
    MEDIUM = "Medium"
    HIGH = "High"


RULE_SEVERITY = {
    FlagRule.LOW_WEEK: Severity.HIGH,
    FlagRule.DECLINE_3W: Severity.MEDIUM,
    FlagRule.MISSED_2W: Severity.MEDIUM,
    FlagRule.GROUP_LOW: Severity.HIGH,
}


class SubjectKind(str, Enum):
    USER = "user"
    GROUP = "group"


@dataclass(frozen=True)
class SeriesPoint:
    period: PeriodId
    score: Decimal | None
    response_rate: Decimal | None = None  # group series only


@dataclass(frozen=True)
class ScoreSeries:
    subject_kind: SubjectKind
    subject_id: UUID
    points: tuple[SeriesPoint, ...]

    def __post_init__(self) -> None:
        periods = [p.period for p in self.points]
        assert periods == sorted(set(periods)), "series periods must strictly increase"


@dataclass(frozen=True)
class FlagContext:
    """Facts the rules need beyond the raw series.

    scheduled: periods where a check-in was actually expected (the subject's
    group had an active assignment); weeks off-template never count as missed.
    """

    scheduled: frozenset[PeriodId] = frozenset()


@dataclass(frozen=True)
class FlagEvent:
    rule: FlagRule
    subject_kind: SubjectKind
    subject_id: UUID
    period_end: PeriodId
    severity: Severity
    details: str


# --- pure scoring and rules ---------------------------------------------------


def submission_score(
    submission: CheckInSubmission, template: CheckInTemplate
) -> Decimal | None:
    """Mean of the Likert answers, half-up to 2 decimals; None if there are none."""
    values = []
    for a in submission.answers:
        q = template.question_by_id(a.question_id)
        if q is not None and q.kind is QuestionKind.LIKERT5 and isinstance(a.value, int):
            values.append(a.value)
    if not values:
        return None
    return round2(Decimal(sum(values)) / Decimal(len(values)))


def detect_red_flags(
    series: ScoreSeries, ctx: FlagContext, cfg: FlagsConfig
) -> list[FlagEvent]:
    """Slide every rule window over the series.

    Emits at most one flag per (rule, subject, period_end); a long slump
    produces one flag per window end, not one per slump. Output is ordered
    period_end asc, rule name asc.
    """
    events: dict[tuple[FlagRule, PeriodId], FlagEvent] = {}

    def emit(rule: FlagRule, period_end: PeriodId, details: str) -> None:
        key = (rule, period_end)
        if key not in events:
            events[key] = FlagEvent(
                rule=rule,
                subject_kind=series.subject_kind,
                subject_id=series.subject_id,
                period_end=period_end,
                severity=RULE_SEVERITY[rule],
                details=details,
            )

    points = series.points
    if series.subject_kind is SubjectKind.USER:
        for i, pt in enumerate(points):
            if pt.score is not None and pt.score <= cfg.low_week:
                emit(FlagRule.LOW_WEEK, pt.period, f"weekly score {pt.score} <= {cfg.low_week}")
            w = cfg.decline_window
            if i + 1 >= w:
                window = points[i + 1 - w : i + 1]
                scores = [p.score for p in window]
                if (
                    all(s is not None for s in scores)
                    and all(scores[j] > scores[j + 1] for j in range(w - 1))
                    and scores[0] - scores[-1] >= cfg.decline_drop
                ):
                    emit(
                        FlagRule.DECLINE_3W,
                        pt.period,
                        f"score fell {scores[0]} -> {scores[-1]} over {w} weeks",
                    )
            m = cfg.missed_weeks
            if i + 1 >= m:
                window = points[i + 1 - m : i + 1]
                if all(p.score is None and p.period in ctx.scheduled for p in window):
                    emit(
                        FlagRule.MISSED_2W,
                        pt.period,
                        f"no check-in for {m} consecutive scheduled weeks",
                    )
    else:
        for pt in points:
            if (
                pt.score is not None
                and pt.response_rate is not None
                and pt.score <= cfg.group_low
                and pt.response_rate >= cfg.group_low_min_rate
            ):
                emit(
                    FlagRule.GROUP_LOW,
                    pt.period,
                    f"group mean {pt.score} <= {cfg.group_low} "
                    f"at response rate {pt.response_rate}",
                )

    return sorted(events.values(), key=lambda e: (e.period_end, e.rule.value))


# --- series construction from the store ----------------------------------------


def _checked_range(start: PeriodId, end: PeriodId) -> list[PeriodId]:
    periods = period_range(start, end)
    if len(periods) > MAX_RANGE_WEEKS:
        raise RangeTooLarge(MAX_RANGE_WEEKS)
    return periods


def _score_by_key(
    conn: Connection, user_ids: list[UUID], template_id: UUID, periods: list[PeriodId]
) -> dict[tuple[UUID, PeriodId], Decimal | None]:
    """Scores for every (user, period) submission of one template in one query."""
    if not user_ids or not periods:
        return {}
    template = load_template(conn, template_id)
    uph = ", ".join(f":u{i}" for i in range(len(user_ids)))
    params: dict = {f"u{i}": str(u) for i, u in enumerate(user_ids)}
    params["t"] = str(template_id)
    params["pf"] = periods[0].render()
    params["pt"] = periods[-1].render()
    rows = conn.execute(
        text(
            "SELECT s.id, s.user_id, s.period, a.question_id, a.value_int "
            "FROM submissions s LEFT JOIN answers a ON a.submission_id = s.id "
            f"WHERE s.template_id = :t AND s.user_id IN ({uph}) "
            "AND s.period >= :pf AND s.period <= :pt"
        ),
        params,
    )
    likert_ids = {q.id for q in template.questions if q.kind is QuestionKind.LIKERT5}
    values: dict[tuple[UUID, PeriodId], list[int]] = {}
    present: set[tuple[UUID, PeriodId]] = set()
    for r in rows:
        key = (UUID(r.user_id), PeriodId.parse(r.period))
        present.add(key)
        if r.question_id is not None and UUID(r.question_id) in likert_ids and r.value_int is not None:
            values.setdefault(key, []).append(r.value_int)
    out: dict[tuple[UUID, PeriodId], Decimal | None] = {}
    for key in present:
        vals = values.get(key)
        out[key] = round2(Decimal(sum(vals)) / Decimal(len(vals))) if vals else None
    return out


def _active_members(conn: Connection, group_id: UUID) -> list[tuple[UUID, str]]:
    rows = conn.execute(
        text(
            "SELECT u.id, u.display_name FROM group_members m "
            "JOIN users u ON u.id = m.user_id "
            "WHERE m.group_id = :g AND u.active = 1 "
            "ORDER BY u.display_name, u.id"
        ),
        {"g": str(group_id)},
    )
    return [(UUID(r.id), r.display_name) for r in rows]


@dataclass(frozen=True)
class GroupWeek:
    period: PeriodId
    scheduled: bool
    member_scores: dict[UUID, Decimal | None]  # key present = submitted
    mean: Decimal | None
    response_rate: Decimal


def _group_weeks(
    conn: Connection, group_id: UUID, periods: list[PeriodId]
) -> tuple[list[tuple[UUID, str]], list[GroupWeek]]:
    members = _active_members(conn, group_id)
    member_ids = [m[0] for m in members]
    by_template: dict[UUID, list[PeriodId]] = {}
    assignment_of: dict[PeriodId, UUID] = {}
    for period in periods:
        assignment = active_assignment_for_group(conn, group_id, period)
        if assignment is not None:
            assignment_of[period] = assignment.template_id
            by_template.setdefault(assignment.template_id, []).append(period)
    scores: dict[tuple[UUID, PeriodId], Decimal | None] = {}
    for template_id, tperiods in by_template.items():
        scores.update(_score_by_key(conn, member_ids, template_id, tperiods))

    weeks = []
    denominator = Decimal(len(member_ids))
    for period in periods:
        scheduled = period in assignment_of
        member_scores = {
            uid: scores[(uid, period)] for uid in member_ids if (uid, period) in scores
        }
        scored = [s for s in member_scores.values() if s is not None]
        mean = round2(sum(scored) / Decimal(len(scored))) if scored else None
        rate = (
            round2(Decimal(len(scored)) / denominator) if member_ids else Decimal("0.00")
        )
        weeks.append(
            GroupWeek(
                period=period,
                scheduled=scheduled,
                member_scores=member_scores,
                mean=mean,
                response_rate=rate,
            )
        )
    return members, weeks


def group_series(conn: Connection, group_id: UUID, start: PeriodId, end: PeriodId) -> ScoreSeries:
    periods = _checked_range(start, end)
    _, weeks = _group_weeks(conn, group_id, periods)
    return ScoreSeries(
        subject_kind=SubjectKind.GROUP,
        subject_id=group_id,
        points=tuple(
            SeriesPoint(period=w.period, score=w.mean, response_rate=w.response_rate)
            for w in weeks
        ),
    )


def user_series(
    conn: Connection, user_id: UUID, template_id: UUID, start: PeriodId, end: PeriodId
) -> ScoreSeries:
    periods = _checked_range(start, end)
    scores = _score_by_key(conn, [user_id], template_id, periods)
    return ScoreSeries(
        subject_kind=SubjectKind.USER,
        subject_id=user_id,
        points=tuple(
            SeriesPoint(period=p, score=scores.get((user_id, p))) for p in periods
        ),
    )


def group_aggregate(
    rt: Runtime, group_id: UUID, period: PeriodId
) -> tuple[Decimal | None, Decimal]:
    with rt.store.tx() as conn:
        row = conn.execute(
            text("SELECT id FROM groups WHERE id = :id"), {"id": str(group_id)}
        ).first()
        if row is None:
            raise NotFound(f"group {group_id} not found")
        _, weeks = _group_weeks(conn, group_id, [period])
    return weeks[0].mean, weeks[0].response_rate


# --- flag detection over the store ---------------------------------------------


def detect_flags_for_group(
    conn: Connection, group_id: UUID, start: PeriodId, end: PeriodId, cfg: FlagsConfig
) -> list[FlagEvent]:
    """All user and group flags arising inside one group over a range."""
    periods = _checked_range(start, end)
    members, weeks = _group_weeks(conn, group_id, periods)
    scheduled = frozenset(w.period for w in weeks if w.scheduled)
    events: list[FlagEvent] = []
    for uid, _name in members:
        series = ScoreSeries(
            subject_kind=SubjectKind.USER,
            subject_id=uid,
            points=tuple(
                SeriesPoint(period=w.period, score=w.member_scores.get(uid)) for w in weeks
            ),
        )
        events.extend(detect_red_flags(series, FlagContext(scheduled=scheduled), cfg))
    gseries = ScoreSeries(
        subject_kind=SubjectKind.GROUP,
        subject_id=group_id,
        points=tuple(
            SeriesPoint(period=w.period, score=w.mean, response_rate=w.response_rate)
            for w in weeks
        ),
    )
    events.extend(detect_red_flags(gseries, FlagContext(), cfg))
    return sorted(
        events, key=lambda e: (e.period_end, e.rule.value, e.subject_kind.value, str(e.subject_id))
    )


def persist_flags(rt: Runtime, events: list[FlagEvent]) -> int:
    """Upsert by dedupe key; re-running detection never duplicates a flag."""
    inserted = 0
    with rt.store.tx() as conn:
        for e in events:
            result = conn.execute(
                text(
                    "INSERT OR IGNORE INTO red_flags "
                    "(id, subject_kind, subject_id, rule, period_end, severity, details) "
                    "VALUES (:id, :sk, :sid, :r, :pe, :sev, :d)"
                ),
                {
                    "id": str(rt.ids.uuid()),
                    "sk": e.subject_kind.value,
                    "sid": str(e.subject_id),
                    "r": e.rule.value,
                    "pe": e.period_end.render(),
                    "sev": e.severity.value,
                    "d": e.details,
                },
            )
            inserted += result.rowcount
    return inserted


def run_detection(rt: Runtime, start: PeriodId, end: PeriodId) -> tuple[int, int]:
    """Detect and persist flags for every live group; (events, newly persisted)."""
    cfg = rt.config.flags
    all_events: list[FlagEvent] = []
    with rt.store.tx() as conn:
        group_ids = [
            UUID(r[0])
            for r in conn.execute(text("SELECT id FROM groups WHERE archived = 0 ORDER BY name, id"))
        ]
        for gid in group_ids:
            all_events.extend(detect_flags_for_group(conn, gid, start, end, cfg))
    # A user in two groups can trip the same rule twice in one week; the
    # dedupe key collapses those on insert.
    return len(all_events), persist_flags(rt, all_events)


def list_flags(
    rt: Runtime,
    actor: UserAccount,
    *,
    group_id: UUID | None = None,
    period_from: PeriodId | None = None,
    period_to: PeriodId | None = None,
) -> list[dict]:
    """Persisted flags visible to the actor, oldest period first."""
    with rt.store.tx() as conn:
        if group_id is not None:
            require(actor.role, ActionKind.READ_FLAGS, relation_to_group(conn, actor, group_id))
            visible_groups: list[UUID] | None = [group_id]
        elif actor.role is Role.ADMIN:
            require(actor.role, ActionKind.READ_FLAGS, Relation.OUTSIDE)
            visible_groups = None  # unrestricted
        else:
            # Managers fall through to their managed scope; employees fail the
            # matrix check here with ROLE_FORBIDDEN.
            require(actor.role, ActionKind.READ_FLAGS, Relation.IN_MANAGED_GROUP)
            visible_groups = managed_group_ids(conn, actor.id)
        clauses = []
        params: dict = {}
        if visible_groups is not None:
            if not visible_groups:
                return []
            gph = ", ".join(f":g{i}" for i in range(len(visible_groups)))
            params.update({f"g{i}": str(g) for i, g in enumerate(visible_groups)})
            clauses.append(
                f"((subject_kind = 'group' AND subject_id IN ({gph})) "
                f"OR (subject_kind = 'user' AND subject_id IN "
                f"(SELECT user_id FROM group_members WHERE group_id IN ({gph}))))"
            )
        if period_from is not None:
            clauses.append("period_end >= :pf")
            params["pf"] = period_from.render()
        if period_to is not None:
            clauses.append("period_end <= :pt")
            params["pt"] = period_to.render()
        where = f"WHERE {' AND '.join(clauses)}" if clauses else ""
        rows = conn.execute(
            text(
                "SELECT id, subject_kind, subject_id, rule, period_end, severity, details "
                f"FROM red_flags {where} "
                "ORDER BY period_end ASC, rule ASC, subject_kind ASC, subject_id ASC"
            ),
            params,
        )
        return [
            {
                "id": r.id,
                "subject_kind": r.subject_kind,
                "subject_id": r.subject_id,
                "rule": r.rule,
                "period_end": r.period_end,
                "severity": r.severity,
                "details": r.details,
            }
            for r in rows
        ]


# --- dashboard -----------------------------------------------------------------


def dashboard(
    rt: Runtime, actor: UserAccount, group_id: UUID, start: PeriodId, end: PeriodId
) -> dict:
    """One consistent read: series, member rows, open flags, kudos tallies.

    Decimals are rendered as fixed 2-decimal strings so identical store state
    yields a byte-identical JSON payload.
    """
    with rt.store.tx() as conn:
        require(actor.role, ActionKind.READ_DASHBOARD, relation_to_group(conn, actor, group_id))
        group = conn.execute(
            text("SELECT id, name FROM groups WHERE id = :id"), {"id": str(group_id)}
        ).first()
        if group is None:
            raise NotFound(f"group {group_id} not found")
        periods = _checked_range(start, end)
        members, weeks = _group_weeks(conn, group_id, periods)
        flags = detect_flags_for_group(conn, group_id, start, end, rt.config.flags)

        range_start, _ = week_bounds_utc(start, rt.config.org.timezone)
        _, range_end = week_bounds_utc(end, rt.config.org.timezone)
        tallies = {uid: {"sent": 0, "received": 0} for uid, _ in members}
        rows = conn.execute(
            text(
                "SELECT from_user_id, to_user_id FROM kudos "
                "WHERE created_at >= :f AND created_at < :t"
            ),
            {"f": format_ts(range_start), "t": format_ts(range_end)},
        )
        for r in rows:
            f, t = UUID(r.from_user_id), UUID(r.to_user_id)
            if f in tallies:
                tallies[f]["sent"] += 1
            if t in tallies:
                tallies[t]["received"] += 1

    member_rows = []
    for uid, name in members:  # already sorted by display_name, id
        latest = None
        for w in reversed(weeks):
            score = w.member_scores.get(uid)
            if score is not None:
                latest = {"period": w.period.render(), "score": str(score)}
                break
        member_rows.append(
            {
                "user_id": str(uid),
                "display_name": name,
                "latest": latest,
                "kudos": tallies[uid],
            }
        )

    return {
        "group": {"id": group.id, "name": group.name},
        "range": {"from": start.render(), "to": end.render()},
        "series": [
            {
                "period": w.period.render(),
                "score": None if w.mean is None else str(w.mean),
                "response_rate": str(w.response_rate),
            }
            for w in weeks
        ],
        "members": member_rows,
        "flags": [
            {
                "rule": e.rule.value,
                "subject_kind": e.subject_kind.value,
                "subject_id": str(e.subject_id),
                "period_end": e.period_end.render(),
                "severity": e.severity.value,
                "details": e.details,
            }
            for e in flags
        ],
    }
