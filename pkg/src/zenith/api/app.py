"""HTTP surface: routing, bearer auth, the uniform error envelope, and
optional static hosting for the built web client.

Every route lives under /api/v1. Handlers are thin: parse, call the domain
operation, serialize. No business rules here.
"""

from __future__ import annotations

import os
from uuid import UUID

from fastapi import Depends, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from zenith import access, analytics, checkin, directory, kudos, notifier
from zenith.api.schemas import (
    AssignRequest,
    CommentRequest,
    GroupCreateRequest,
    GroupPatchRequest,
    KudosRequest,
    LoginRequest,
    ScheduleCreateRequest,
    SchedulePatchRequest,
    SubmissionRequest,
    TemplateCreateRequest,
)
from zenith.clock import format_ts, parse_ts
from zenith.core.models import (
    Answer,
    CheckInSubmission,
    CheckInTemplate,
    Comment,
    Group,
    Kudos,
    QuestionKind,
    ReminderSchedule,
    UserAccount,
    WEEKDAY_NAMES,
)
from zenith.core.periods import PeriodId, iso_week_of
from zenith.errors import (
    AccountInactive,
    Conflict,
    DomainError,
    Forbidden,
    NotFound,
    StoreUnavailable,
    Unauthenticated,
    ValidationFailed,
    WindowClosed,
)
from zenith.runtime import Runtime

API_PREFIX = "/api/v1"


def parse_period(value: str, path: str = "period") -> PeriodId:
    try:
        return PeriodId.parse(value)
    except ValueError:
        raise ValidationFailed.single("BAD_PERIOD", path) from None


def parse_ts_param(value: str, path: str) -> "datetime":
    try:
        return parse_ts(value)
    except ValueError:
        raise ValidationFailed.single("BAD_TIMESTAMP", path) from None


def _envelope(code: str, message: str, details=None) -> dict:
    body = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return body


_STATUS_OF = {
    "UNAUTHENTICATED": 401,
    "FORBIDDEN": 403,
    "NOT_FOUND": 404,
    "VALIDATION": 422,
    "CONFLICT": 409,
    "WINDOW_CLOSED": 409,
    "INTERNAL": 500,
}


def _classify(exc: DomainError) -> tuple[str, object]:
    if isinstance(exc, ValidationFailed):
        return "VALIDATION", [i.as_dict() for i in exc.issues]
    if isinstance(exc, (Unauthenticated, AccountInactive)):
        return "UNAUTHENTICATED", None
    if isinstance(exc, Forbidden):
        return "FORBIDDEN", [{"reason": exc.reason_code}]
    if isinstance(exc, WindowClosed):
        return "WINDOW_CLOSED", None
    if isinstance(exc, (Conflict,)):
        return "CONFLICT", None
    if isinstance(exc, NotFound):
        return "NOT_FOUND", None
    if isinstance(exc, StoreUnavailable):
        return "INTERNAL", None
    return "INTERNAL", None


# --- serializers -------------------------------------------------------------


def user_json(u: UserAccount) -> dict:
    return {
        "id": str(u.id),
        "email": u.email,
        "display_name": u.display_name,
        "role": u.role.value,
        "active": u.active,
        "created_at": format_ts(u.created_at),
    }


def template_json(t: CheckInTemplate) -> dict:
    return {
        "id": str(t.id),
        "title": t.title,
        "status": t.status.value,
        "created_by": str(t.created_by),
        "created_at": format_ts(t.created_at),
        "questions": [
            {
                "id": str(q.id),
                "prompt": q.prompt,
                "kind": q.kind.value,
                "required": q.required,
            }
            for q in t.questions
        ],
    }


def submission_json(s: CheckInSubmission) -> dict:
    return {
        "id": str(s.id),
        "user_id": str(s.user_id),
        "template_id": str(s.template_id),
        "period": s.period.render(),
        "revision": s.revision,
        "submitted_at": format_ts(s.submitted_at),
        "answers": [
            {"question_id": str(a.question_id), "value": a.value} for a in s.answers
        ],
    }


def comment_json(c: Comment) -> dict:
    return {
        "id": str(c.id),
        "submission_id": str(c.submission_id),
        "question_id": str(c.question_id) if c.question_id else None,
        "author_id": str(c.author_id),
        "body": c.body,
        "created_at": format_ts(c.created_at),
    }


def kudos_json(k: Kudos) -> dict:
    return {
        "id": str(k.id),
        "from_user_id": str(k.from_user_id),
        "to_user_id": str(k.to_user_id),
        "message": k.message,
        "created_at": format_ts(k.created_at),
    }


def group_json(g: Group) -> dict:
    return {"id": str(g.id), "name": g.name, "archived": g.archived}


def schedule_json(s: ReminderSchedule) -> dict:
    return {
        "id": str(s.id),
        "group_id": str(s.group_id),
        "template_id": str(s.template_id),
        "weekday": WEEKDAY_NAMES[s.weekday],
        "time_of_day": s.time_of_day,
        "timezone": s.timezone,
        "enabled": s.enabled,
    }


# --- app factory --------------------------------------------------------------


def create_app(rt: Runtime) -> FastAPI:
    app = FastAPI(title="zenith", docs_url=None, redoc_url=None, openapi_url=None)

    def current_user(request: Request) -> UserAccount:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise Unauthenticated("missing bearer token")
        return access.authenticate(rt, header[len("Bearer ") :])

    # -- error envelope --

    @app.exception_handler(DomainError)
    async def domain_error_handler(request: Request, exc: DomainError):
        code, details = _classify(exc)
        message = str(exc) if code != "INTERNAL" else "internal error"
        return JSONResponse(
            status_code=_STATUS_OF[code], content=_envelope(code, message, details)
        )

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(request: Request, exc: RequestValidationError):
        details = [
            {
                "code": str(e.get("type", "invalid")).upper(),
                "path": ".".join(str(part) for part in e.get("loc", ())),
            }
            for e in exc.errors()
        ]
        return JSONResponse(
            status_code=422, content=_envelope("VALIDATION", "invalid request", details)
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(request: Request, exc: StarletteHTTPException):
        # Unrouted method+path combinations are NOT_FOUND in envelope terms.
        if exc.status_code in (404, 405):
            return JSONResponse(status_code=404, content=_envelope("NOT_FOUND", "no such route"))
        code = {401: "UNAUTHENTICATED", 403: "FORBIDDEN", 409: "CONFLICT", 422: "VALIDATION"}.get(
            exc.status_code, "INTERNAL"
        )
        return JSONResponse(
            status_code=_STATUS_OF[code], content=_envelope(code, str(exc.detail))
        )

    @app.exception_handler(Exception)
    async def unhandled_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content=_envelope("INTERNAL", "internal error"))

    # -- auth --

    @app.post(f"{API_PREFIX}/auth/login")
    def auth_login(body: LoginRequest):
        session, user = access.login(rt, body.email, body.password, body.new_password)
        return {
            "token": session.token,
            "expires_at": format_ts(session.expires_at),
            "user": user_json(user),
        }

    @app.post(f"{API_PREFIX}/auth/logout")
    def auth_logout(request: Request, user: UserAccount = Depends(current_user)):
        access.logout(rt, request.headers["authorization"][len("Bearer ") :])
        return {"status": "ok"}

    @app.get(f"{API_PREFIX}/me")
    def me(user: UserAccount = Depends(current_user)):
        return user_json(user)

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {"status": "ok"}

    # -- check-ins --

    @app.get(f"{API_PREFIX}/checkins/current")
    def checkins_current(user: UserAccount = Depends(current_user)):
        form = checkin.current_form(rt, user)
        return {
            "template": template_json(form.template),
            "period": form.period.render(),
            "submission": submission_json(form.submission) if form.submission else None,
        }

    @app.post(f"{API_PREFIX}/checkins", status_code=201)
    def checkins_submit(body: SubmissionRequest, user: UserAccount = Depends(current_user)):
        answers = [Answer(question_id=a.question_id, value=a.value) for a in body.answers]
        submission = checkin.submit_checkin(
            rt, user, body.template_id, parse_period(body.period), answers
        )
        return submission_json(submission)

    @app.get(f"{API_PREFIX}/checkins/{{submission_id}}")
    def checkins_get(submission_id: UUID, user: UserAccount = Depends(current_user)):
        return submission_json(checkin.get_submission(rt, user, submission_id))

    @app.get(f"{API_PREFIX}/checkins")
    def checkins_list(
        user: UserAccount = Depends(current_user),
        user_id: UUID | None = Query(default=None, alias="user"),
        group_id: UUID | None = Query(default=None, alias="group"),
        period_from: str | None = Query(default=None, alias="from"),
        period_to: str | None = Query(default=None, alias="to"),
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=checkin.DEFAULT_PAGE_SIZE, ge=1, le=checkin.MAX_PAGE_SIZE),
    ):
        result = checkin.list_submissions(
            rt,
            user,
            user_id=user_id,
            group_id=group_id,
            period_from=parse_period(period_from, "from") if period_from else None,
            period_to=parse_period(period_to, "to") if period_to else None,
            page=page,
            page_size=page_size,
        )
        return {
            "items": [submission_json(s) for s in result.items],
            "page": result.page,
            "page_size": result.page_size,
            "total_count": result.total_count,
        }

    @app.post(f"{API_PREFIX}/checkins/{{submission_id}}/comments", status_code=201)
    def comments_add(
        submission_id: UUID, body: CommentRequest, user: UserAccount = Depends(current_user)
    ):
        return comment_json(
            checkin.add_comment(rt, user, submission_id, body.body, body.question_id)
        )

    @app.get(f"{API_PREFIX}/checkins/{{submission_id}}/comments")
    def comments_list(submission_id: UUID, user: UserAccount = Depends(current_user)):
        return {"items": [comment_json(c) for c in checkin.list_comments(rt, user, submission_id)]}

    # -- kudos --

    @app.post(f"{API_PREFIX}/kudos", status_code=201)
    def kudos_send(body: KudosRequest, user: UserAccount = Depends(current_user)):
        return kudos_json(kudos.send_kudos(rt, user, body.to_user_id, body.message))

    @app.get(f"{API_PREFIX}/kudos")
    def kudos_list(
        user: UserAccount = Depends(current_user),
        user_id: UUID | None = Query(default=None, alias="user"),
        created_from: str | None = Query(default=None, alias="from"),
        created_to: str | None = Query(default=None, alias="to"),
    ):
        items = kudos.kudos_feed(
            rt,
            user,
            user_id=user_id,
            created_from=parse_ts_param(created_from, "from") if created_from else None,
            created_to=parse_ts_param(created_to, "to") if created_to else None,
        )
        return {"items": [kudos_json(k) for k in items]}

    # -- analytics --

    @app.get(f"{API_PREFIX}/groups/{{group_id}}/dashboard")
    def group_dashboard(
        group_id: UUID,
        user: UserAccount = Depends(current_user),
        period_from: str | None = Query(default=None, alias="from"),
        period_to: str | None = Query(default=None, alias="to"),
    ):
        end = (
            parse_period(period_to, "to")
            if period_to
            else iso_week_of(rt.clock.now(), rt.config.org.timezone)
        )
        if period_from:
            start = parse_period(period_from, "from")
        else:
            start = end
            for _ in range(11):
                start = start.prev()
        return analytics.dashboard(rt, user, group_id, start, end)

    @app.get(f"{API_PREFIX}/flags")
    def flags_list(
        user: UserAccount = Depends(current_user),
        group_id: UUID | None = Query(default=None, alias="group"),
        period_from: str | None = Query(default=None, alias="from"),
        period_to: str | None = Query(default=None, alias="to"),
    ):
        items = analytics.list_flags(
            rt,
            user,
            group_id=group_id,
            period_from=parse_period(period_from, "from") if period_from else None,
            period_to=parse_period(period_to, "to") if period_to else None,
        )
        return {"items": items}

    # -- admin --

    @app.post(f"{API_PREFIX}/admin/groups", status_code=201)
    def admin_group_create(body: GroupCreateRequest, user: UserAccount = Depends(current_user)):
        group = directory.create_group(
            rt,
            user,
            body.name,
            member_ids=set(body.member_ids) if body.member_ids is not None else None,
            manager_ids=set(body.manager_ids) if body.manager_ids is not None else None,
        )
        return group_json(group)

    @app.patch(f"{API_PREFIX}/admin/groups/{{group_id}}")
    def admin_group_patch(
        group_id: UUID, body: GroupPatchRequest, user: UserAccount = Depends(current_user)
    ):
        group = directory.edit_group(
            rt,
            user,
            group_id,
            name=body.name,
            archived=body.archived,
            member_ids=set(body.member_ids) if body.member_ids is not None else None,
            manager_ids=set(body.manager_ids) if body.manager_ids is not None else None,
        )
        return group_json(group)

    @app.get(f"{API_PREFIX}/admin/groups")
    def admin_group_list(user: UserAccount = Depends(current_user)):
        return {"items": directory.list_groups(rt, user)}

    @app.post(f"{API_PREFIX}/admin/templates", status_code=201)
    def admin_template_create(
        body: TemplateCreateRequest, user: UserAccount = Depends(current_user)
    ):
        drafts = []
        for q in body.questions:
            try:
                kind = QuestionKind(q.kind)
            except ValueError:
                raise ValidationFailed.single("BAD_KIND", "questions") from None
            drafts.append(checkin.QuestionDraft(prompt=q.prompt, kind=kind, required=q.required))
        return template_json(checkin.create_template(rt, user, body.title, drafts))

    @app.post(f"{API_PREFIX}/admin/templates/{{template_id}}/assign", status_code=201)
    def admin_template_assign(
        template_id: UUID, body: AssignRequest, user: UserAccount = Depends(current_user)
    ):
        assignment = checkin.assign_and_activate(
            rt, user, template_id, body.group_id, parse_period(body.active_from, "active_from")
        )
        return {
            "template_id": str(assignment.template_id),
            "group_id": str(assignment.group_id),
            "active_from": assignment.active_from.render(),
        }

    @app.get(f"{API_PREFIX}/admin/templates")
    def admin_template_list(user: UserAccount = Depends(current_user)):
        return {"items": [template_json(t) for t in checkin.list_templates(rt, user)]}

    @app.post(f"{API_PREFIX}/admin/schedules", status_code=201)
    def admin_schedule_create(
        body: ScheduleCreateRequest, user: UserAccount = Depends(current_user)
    ):
        schedule = notifier.create_schedule(
            rt,
            user,
            body.group_id,
            body.template_id,
            body.weekday,
            body.time_of_day,
            body.timezone,
            enabled=body.enabled,
        )
        return schedule_json(schedule)

    @app.patch(f"{API_PREFIX}/admin/schedules/{{schedule_id}}")
    def admin_schedule_patch(
        schedule_id: UUID, body: SchedulePatchRequest, user: UserAccount = Depends(current_user)
    ):
        schedule = notifier.edit_schedule(
            rt,
            schedule_id=schedule_id,
            actor=user,
            weekday=body.weekday,
            time_of_day=body.time_of_day,
            tz_name=body.timezone,
            enabled=body.enabled,
        )
        return schedule_json(schedule)

    @app.get(f"{API_PREFIX}/admin/schedules")
    def admin_schedule_list(user: UserAccount = Depends(current_user)):
        return {"items": [schedule_json(s) for s in notifier.list_schedules(rt, user)]}

    # -- static hosting (optional) --

    static_dir = rt.config.server.static_dir
    if static_dir and os.path.isdir(static_dir):

        @app.get("/{asset_path:path}", include_in_schema=False)
        def serve_static(asset_path: str):
            if asset_path.startswith("api/"):
                return JSONResponse(
                    status_code=404, content=_envelope("NOT_FOUND", "no such route")
                )
            candidate = os.path.realpath(os.path.join(static_dir, asset_path))
            root = os.path.realpath(static_dir)
            if candidate.startswith(root + os.sep) and os.path.isfile(candidate):
                return FileResponse(candidate)
            # SPA fallback: unknown UI paths load the entry document.
            return FileResponse(os.path.join(root, "index.html"))

    return app
