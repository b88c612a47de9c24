"""Request bodies. Unknown fields are rejected; scalar types are strict so a
JSON boolean never sneaks in as a Likert value."""

from __future__ import annotations

from typing import Optional, Union
from uuid import UUID

from pydantic import BaseModel, ConfigDict, StrictBool, StrictInt, StrictStr


class StrictRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LoginRequest(StrictRequest):
    email: StrictStr
    password: StrictStr
    new_password: Optional[StrictStr] = None


class AnswerIn(StrictRequest):
    question_id: UUID
    value: Union[StrictInt, StrictStr]


class SubmissionRequest(StrictRequest):
    template_id: UUID
    period: StrictStr
    answers: list[AnswerIn]


class CommentRequest(StrictRequest):
    body: StrictStr
    question_id: Optional[UUID] = None


class KudosRequest(StrictRequest):
    to_user_id: UUID
    message: StrictStr


class GroupCreateRequest(StrictRequest):
    name: StrictStr
    member_ids: Optional[list[UUID]] = None
    manager_ids: Optional[list[UUID]] = None


class GroupPatchRequest(StrictRequest):
    name: Optional[StrictStr] = None
    archived: Optional[StrictBool] = None
    member_ids: Optional[list[UUID]] = None
    manager_ids: Optional[list[UUID]] = None


class QuestionIn(StrictRequest):
    prompt: StrictStr
    kind: StrictStr  # "likert5" | "free_text"; domain validation rejects others
    required: StrictBool = True


class TemplateCreateRequest(StrictRequest):
    title: StrictStr
    questions: list[QuestionIn]


class AssignRequest(StrictRequest):
    group_id: UUID
    active_from: StrictStr


class ScheduleCreateRequest(StrictRequest):
    group_id: UUID
    template_id: UUID
    weekday: Union[StrictInt, StrictStr]
    time_of_day: StrictStr
    timezone: StrictStr
    enabled: StrictBool = True


class SchedulePatchRequest(StrictRequest):
    weekday: Optional[Union[StrictInt, StrictStr]] = None
    time_of_day: Optional[StrictStr] = None
    timezone: Optional[StrictStr] = None
    enabled: Optional[StrictBool] = None
