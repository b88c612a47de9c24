"""Check-in lifecycle: templates, per-group activation, weekly submissions,
revisions, and comments.

The submission window is the current ISO week only; a missed week stays
missed and becomes an analytics signal rather than a late entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from uuid import UUID

from sqlalchemy import Connection, text
from sqlalchemy.exc import IntegrityError

from zenith.access import (
    ActionKind,
    Relation,
    relation_to_user,
    require,
    visible_submissions_scope,
    ScopeKind,
)
from zenith.clock import format_ts, parse_ts
from zenith.core.models import (
    MAX_COMMENT_LEN,
    Answer,
    CheckInSubmission,
    CheckInTemplate,
    Comment,
    Question,
    QuestionKind,
    TemplateAssignment,
    TemplateStatus,
    UserAccount,
)
from zenith.core.periods import PeriodId, iso_week_of
from zenith.core.validation import validate_answer_value, validate_template
from zenith.errors import (
    Conflict,
    Forbidden,
    NoActiveCheckIn,
    NotFound,
    ValidationFailed,
    ValidationIssue,
    WindowClosed,
)
from zenith.runtime import Runtime

DEFAULT_PAGE_SIZE = 50
MAX_PAGE_SIZE = 200


@dataclass(frozen=True)
class QuestionDraft:
    prompt: str
    kind: QuestionKind
    required: bool = True


@dataclass(frozen=True)
class FormInstance:
    template: CheckInTemplate
    period: PeriodId
    submission: CheckInSubmission | None


@dataclass(frozen=True)
class Page:
    items: list
    page: int
    page_size: int
    total_count: int


# --- templates ---------------------------------------------------------------


def create_template(
    rt: Runtime, actor: UserAccount, title: str, questions: list[QuestionDraft]
) -> CheckInTemplate:
    require(actor.role, ActionKind.MANAGE_TEMPLATES, Relation.OUTSIDE)
    now = rt.clock.now()
    template = CheckInTemplate(
        id=rt.ids.uuid(),
        title=title,
        questions=tuple(
            Question(id=rt.ids.uuid(), prompt=q.prompt, kind=q.kind, required=q.required)
            for q in questions
        ),
        status=TemplateStatus.DRAFT,
        created_by=actor.id,
        created_at=now,
    )
    issues = validate_template(template)
    if issues:
        raise ValidationFailed(issues)
    with rt.store.tx() as conn:
        conn.execute(
            text(
                "INSERT INTO templates (id, title, status, created_by, created_at) "
                "VALUES (:id, :t, :s, :b, :c)"
            ),
            {
                "id": str(template.id),
                "t": title,
                "s": template.status.value,
                "b": str(actor.id),
                "c": format_ts(now),
            },
        )
        for pos, q in enumerate(template.questions):
            conn.execute(
                text(
                    "INSERT INTO questions (id, template_id, position, prompt, kind, required) "
                    "VALUES (:id, :tid, :p, :pr, :k, :r)"
                ),
                {
                    "id": str(q.id),
                    "tid": str(template.id),
                    "p": pos,
                    "pr": q.prompt,
                    "k": q.kind.value,
                    "r": 1 if q.required else 0,
                },
            )
    return template


def load_template(conn: Connection, template_id: UUID) -> CheckInTemplate | None:
    row = conn.execute(
        text("SELECT id, title, status, created_by, created_at FROM templates WHERE id = :id"),
        {"id": str(template_id)},
    ).first()
    if row is None:
        return None
    qrows = conn.execute(
        text(
            "SELECT id, prompt, kind, required FROM questions "
            "WHERE template_id = :id ORDER BY position"
        ),
        {"id": str(template_id)},
    )
    return CheckInTemplate(
        id=UUID(row.id),
        title=row.title,
        questions=tuple(
            Question(UUID(q.id), q.prompt, QuestionKind(q.kind), bool(q.required)) for q in qrows
        ),
        status=TemplateStatus(row.status),
        created_by=UUID(row.created_by),
        created_at=parse_ts(row.created_at),
    )


def list_templates(rt: Runtime, actor: UserAccount) -> list[CheckInTemplate]:
    require(actor.role, ActionKind.MANAGE_TEMPLATES, Relation.OUTSIDE)
    with rt.store.tx() as conn:
        ids = [UUID(r[0]) for r in conn.execute(text("SELECT id FROM templates ORDER BY created_at, id"))]
        return [load_template(conn, tid) for tid in ids]


def assign_and_activate(
    rt: Runtime, actor: UserAccount, template_id: UUID, group_id: UUID, active_from: PeriodId
) -> TemplateAssignment:
    """Bind a template to a group from a starting week onward.

    Assignments are open-ended; a later-starting assignment supersedes the
    previous one from its first week. Two assignments starting the same week
    conflict.
    """
    require(actor.role, ActionKind.MANAGE_TEMPLATES, Relation.OUTSIDE)
    with rt.store.tx() as conn:
        template = load_template(conn, template_id)
        if template is None:
            raise NotFound(f"template {template_id} not found")
        group = conn.execute(
            text("SELECT id FROM groups WHERE id = :id"), {"id": str(group_id)}
        ).first()
        if group is None:
            raise NotFound(f"group {group_id} not found")
        try:
            conn.execute(
                text(
                    "INSERT INTO template_assignments (id, template_id, group_id, active_from) "
                    "VALUES (:id, :t, :g, :f)"
                ),
                {
                    "id": str(rt.ids.uuid()),
                    "t": str(template_id),
                    "g": str(group_id),
                    "f": active_from.render(),
                },
            )
        except IntegrityError:
            raise Conflict(
                f"group {group_id} already has an assignment starting {active_from}"
            ) from None
        conn.execute(
            text("UPDATE templates SET status = :s WHERE id = :id"),
            {"s": TemplateStatus.ACTIVE.value, "id": str(template_id)},
        )
    return TemplateAssignment(template_id=template_id, group_id=group_id, active_from=active_from)


def active_assignment_for_group(
    conn: Connection, group_id: UUID, period: PeriodId
) -> TemplateAssignment | None:
    """The assignment governing ``period``: latest active_from at or before it."""
    row = conn.execute(
        text(
            "SELECT template_id, group_id, active_from FROM template_assignments "
            "WHERE group_id = :g AND active_from <= :p "
            "ORDER BY active_from DESC LIMIT 1"
        ),
        {"g": str(group_id), "p": period.render()},
    ).first()
    if row is None:
        return None
    return TemplateAssignment(
        template_id=UUID(row.template_id),
        group_id=UUID(row.group_id),
        active_from=PeriodId.parse(row.active_from),
    )


def _actor_group_ids(conn: Connection, actor_id: UUID) -> list[UUID]:
    rows = conn.execute(
        text(
            "SELECT g.id FROM group_members m JOIN groups g ON g.id = m.group_id "
            "WHERE m.user_id = :u AND g.archived = 0 ORDER BY g.name, g.id"
        ),
        {"u": str(actor_id)},
    )
    return [UUID(r[0]) for r in rows]


def current_form(rt: Runtime, actor: UserAccount) -> FormInstance:
    """The actor's open check-in for this week, with any existing submission."""
    now = rt.clock.now()
    period = iso_week_of(now, rt.config.org.timezone)
    with rt.store.tx() as conn:
        for group_id in _actor_group_ids(conn, actor.id):
            assignment = active_assignment_for_group(conn, group_id, period)
            if assignment is None:
                continue
            template = load_template(conn, assignment.template_id)
            if template is None or template.status is not TemplateStatus.ACTIVE:
                continue
            submission = _load_submission_by_key(conn, actor.id, template.id, period)
            return FormInstance(template=template, period=period, submission=submission)
    raise NoActiveCheckIn()


# --- submissions -------------------------------------------------------------


def _validate_answers(template: CheckInTemplate, answers: list[Answer]) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []
    by_question: dict[UUID, Answer] = {}
    for i, a in enumerate(answers):
        path = f"answers[{i}]"
        question = template.question_by_id(a.question_id)
        if question is None:
            issues.append(ValidationIssue("UNKNOWN_QUESTION", path))
            continue
        if a.question_id in by_question:
            issues.append(ValidationIssue("DUP_ANSWER", path))
            continue
        by_question[a.question_id] = a
        code = validate_answer_value(question.kind, a.value)
        if code:
            issues.append(ValidationIssue(code, path))
    for q in template.questions:
        if q.required and q.id not in by_question:
            issues.append(ValidationIssue("MISSING_REQUIRED", f"question:{q.id}"))
    return issues


def _load_submission_by_key(
    conn: Connection, user_id: UUID, template_id: UUID, period: PeriodId
) -> CheckInSubmission | None:
    row = conn.execute(
        text(
            "SELECT id FROM submissions WHERE user_id = :u AND template_id = :t AND period = :p"
        ),
        {"u": str(user_id), "t": str(template_id), "p": period.render()},
    ).first()
    return None if row is None else load_submission(conn, UUID(row.id))


def load_submission(conn: Connection, submission_id: UUID) -> CheckInSubmission | None:
    row = conn.execute(
        text(
            "SELECT id, user_id, template_id, period, revision, submitted_at "
            "FROM submissions WHERE id = :id"
        ),
        {"id": str(submission_id)},
    ).first()
    if row is None:
        return None
    arows = conn.execute(
        text(
            "SELECT a.question_id, a.value_int, a.value_text FROM answers a "
            "JOIN questions q ON q.id = a.question_id "
            "WHERE a.submission_id = :id ORDER BY q.position"
        ),
        {"id": str(submission_id)},
    )
    answers = tuple(
        Answer(question_id=UUID(r.question_id), value=r.value_int if r.value_int is not None else r.value_text)
        for r in arows
    )
    return CheckInSubmission(
        id=UUID(row.id),
        user_id=UUID(row.user_id),
        template_id=UUID(row.template_id),
        period=PeriodId.parse(row.period),
        answers=answers,
        revision=row.revision,
        submitted_at=parse_ts(row.submitted_at),
    )


def _write_answers(conn: Connection, submission_id: UUID, answers: list[Answer], ids) -> None:
    conn.execute(text("DELETE FROM answers WHERE submission_id = :id"), {"id": str(submission_id)})
    for a in answers:
        conn.execute(
            text(
                "INSERT INTO answers (id, submission_id, question_id, value_int, value_text) "
                "VALUES (:id, :s, :q, :vi, :vt)"
            ),
            {
                "id": str(ids.uuid()),
                "s": str(submission_id),
                "q": str(a.question_id),
                "vi": a.value if isinstance(a.value, int) else None,
                "vt": a.value if isinstance(a.value, str) else None,
            },
        )


def insert_submission_row(
    rt: Runtime,
    user_id: UUID,
    template_id: UUID,
    period: PeriodId,
    answers: list[Answer],
    submitted_at,
) -> CheckInSubmission:
    """Raw insert used by submit_checkin and the synthetic seeder.

    Uniqueness of (user, template, period) is arbitrated by the table
    constraint; a loser surfaces as Conflict.
    """
    sid = rt.ids.uuid()
    with rt.store.tx() as conn:
        try:
            conn.execute(
                text(
                    "INSERT INTO submissions (id, user_id, template_id, period, revision, submitted_at) "
                    "VALUES (:id, :u, :t, :p, 1, :at)"
                ),
                {
                    "id": str(sid),
                    "u": str(user_id),
                    "t": str(template_id),
                    "p": period.render(),
                    "at": format_ts(submitted_at),
                },
            )
        except IntegrityError:
            raise Conflict(
                f"submission already exists for ({user_id}, {template_id}, {period})"
            ) from None
        _write_answers(conn, sid, answers, rt.ids)
        return load_submission(conn, sid)


def submit_checkin(
    rt: Runtime,
    actor: UserAccount,
    template_id: UUID,
    period: PeriodId,
    answers: list[Answer],
) -> CheckInSubmission:
    """Create this week's submission or revise it in place."""
    require(actor.role, ActionKind.SUBMIT_CHECKIN, Relation.OWN)
    now = rt.clock.now()
    current = iso_week_of(now, rt.config.org.timezone)
    if period != current:
        raise WindowClosed(f"period {period} is not the current week ({current})")
    with rt.store.tx() as conn:
        template = load_template(conn, template_id)
        if template is None:
            raise NotFound(f"template {template_id} not found")
        assigned = any(
            (a := active_assignment_for_group(conn, gid, period)) is not None
            and a.template_id == template_id
            for gid in _actor_group_ids(conn, actor.id)
        )
    if not assigned:
        raise Forbidden("NOT_IN_SCOPE", "template is not active for any of your groups")
    issues = _validate_answers(template, answers)
    if issues:
        raise ValidationFailed(issues)

    # First writer creates revision 1; revisions bump via compare-and-set with
    # one retry so concurrent revisers never lose an increment.
    for _ in range(2):
        with rt.store.tx() as conn:
            existing = conn.execute(
                text(
                    "SELECT id, revision FROM submissions "
                    "WHERE user_id = :u AND template_id = :t AND period = :p"
                ),
                {"u": str(actor.id), "t": str(template_id), "p": period.render()},
            ).first()
        if existing is None:
            try:
                return insert_submission_row(rt, actor.id, template_id, period, answers, now)
            except Conflict:
                continue  # lost the creation race; revise instead
        with rt.store.tx() as conn:
            updated = conn.execute(
                text(
                    "UPDATE submissions SET revision = :next, submitted_at = :at "
                    "WHERE id = :id AND revision = :cur"
                ),
                {
                    "next": existing.revision + 1,
                    "at": format_ts(now),
                    "id": existing.id,
                    "cur": existing.revision,
                },
            )
            if updated.rowcount == 1:
                _write_answers(conn, UUID(existing.id), answers, rt.ids)
                return load_submission(conn, UUID(existing.id))
    raise Conflict("submission revision contended; retry")


def get_submission(rt: Runtime, actor: UserAccount, submission_id: UUID) -> CheckInSubmission:
    with rt.store.tx() as conn:
        submission = load_submission(conn, submission_id)
        if submission is None:
            raise NotFound(f"submission {submission_id} not found")
        relation = relation_to_user(conn, actor, submission.user_id)
    require(actor.role, ActionKind.READ_SUBMISSION, relation)
    return submission


def list_submissions(
    rt: Runtime,
    actor: UserAccount,
    *,
    user_id: UUID | None = None,
    group_id: UUID | None = None,
    period_from: PeriodId | None = None,
    period_to: PeriodId | None = None,
    page: int = 1,
    page_size: int = DEFAULT_PAGE_SIZE,
) -> Page:
    """Submissions visible to the actor; out-of-scope filters yield empty pages."""
    page = max(1, page)
    page_size = min(max(1, page_size), MAX_PAGE_SIZE)
    clauses = []
    params: dict = {}
    if user_id is not None:
        clauses.append("s.user_id = :fu")
        params["fu"] = str(user_id)
    if group_id is not None:
        clauses.append(
            "s.user_id IN (SELECT user_id FROM group_members WHERE group_id = :fg)"
        )
        params["fg"] = str(group_id)
    if period_from is not None:
        clauses.append("s.period >= :pf")
        params["pf"] = period_from.render()
    if period_to is not None:
        clauses.append("s.period <= :pt")
        params["pt"] = period_to.render()
    with rt.store.tx() as conn:
        scope = visible_submissions_scope(conn, actor)
        if scope.kind is not ScopeKind.ALL:
            visible = sorted(str(u) for u in scope.user_ids)
            placeholders = ", ".join(f":v{i}" for i in range(len(visible)))
            clauses.append(f"s.user_id IN ({placeholders})")
            params.update({f"v{i}": u for i, u in enumerate(visible)})
        where = f"WHERE {' AND '.join(clauses)}" if clauses else ""
        total = conn.execute(
            text(f"SELECT count(*) FROM submissions s {where}"), params
        ).scalar()
        rows = conn.execute(
            text(
                "SELECT s.id FROM submissions s JOIN users u ON u.id = s.user_id "
                f"{where} ORDER BY s.period DESC, u.display_name ASC, s.id ASC "
                "LIMIT :limit OFFSET :offset"
            ),
            {**params, "limit": page_size, "offset": (page - 1) * page_size},
        )
        items = [load_submission(conn, UUID(r[0])) for r in rows]
    return Page(items=items, page=page, page_size=page_size, total_count=int(total))


# --- comments ----------------------------------------------------------------


def add_comment(
    rt: Runtime,
    actor: UserAccount,
    submission_id: UUID,
    body: str,
    question_id: UUID | None = None,
) -> Comment:
    now = rt.clock.now()
    with rt.store.tx() as conn:
        submission = load_submission(conn, submission_id)
        if submission is None:
            raise NotFound(f"submission {submission_id} not found")
        relation = relation_to_user(conn, actor, submission.user_id)
        require(actor.role, ActionKind.COMMENT_ON_SUBMISSION, relation)
        issues = []
        if not body.strip():
            issues.append(ValidationIssue("EMPTY_BODY", "body"))
        elif len(body) > MAX_COMMENT_LEN:
            issues.append(ValidationIssue("BODY_TOO_LONG", "body"))
        if question_id is not None:
            template = load_template(conn, submission.template_id)
            if template.question_by_id(question_id) is None:
                issues.append(ValidationIssue("UNKNOWN_QUESTION", "question_id"))
        if issues:
            raise ValidationFailed(issues)
        comment = Comment(
            id=rt.ids.uuid(),
            submission_id=submission_id,
            question_id=question_id,
            author_id=actor.id,
            body=body,
            created_at=now,
        )
        conn.execute(
            text(
                "INSERT INTO comments (id, submission_id, question_id, author_id, body, created_at) "
                "VALUES (:id, :s, :q, :a, :b, :c)"
            ),
            {
                "id": str(comment.id),
                "s": str(submission_id),
                "q": str(question_id) if question_id else None,
                "a": str(actor.id),
                "b": body,
                "c": format_ts(now),
            },
        )
    return comment


def list_comments(rt: Runtime, actor: UserAccount, submission_id: UUID) -> list[Comment]:
    with rt.store.tx() as conn:
        submission = load_submission(conn, submission_id)
        if submission is None:
            raise NotFound(f"submission {submission_id} not found")
        relation = relation_to_user(conn, actor, submission.user_id)
        require(actor.role, ActionKind.READ_SUBMISSION, relation)
        rows = conn.execute(
            text(
                "SELECT id, submission_id, question_id, author_id, body, created_at "
                "FROM comments WHERE submission_id = :s ORDER BY created_at ASC, id ASC"
            ),
            {"s": str(submission_id)},
        )
        return [
            Comment(
                id=UUID(r.id),
                submission_id=UUID(r.submission_id),
                question_id=UUID(r.question_id) if r.question_id else None,
                author_id=UUID(r.author_id),
                body=r.body,
                created_at=parse_ts(r.created_at),
            )
            for r in rows
        ]
