"""Shared vocabulary types. Pure values; storage and transport live elsewhere."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from uuid import UUID

from zenith.core.periods import PeriodId


class Role(str, Enum):
    EMPLOYEE = "employee"
    MANAGER = "manager"
    ADMIN = "admin"


class GroupRole(str, Enum):
    MEMBER = "member"
    MANAGER_OF = "manager_of"


class QuestionKind(str, Enum):
    LIKERT5 = "likert5"
    FREE_TEXT = "free_text"


class TemplateStatus(str, Enum):
    DRAFT = "draft"
    ACTIVE = "active"
    RETIRED = "retired"


MAX_NAME_LEN = 120
MAX_PROMPT_LEN = 500
MAX_QUESTIONS = 20
MAX_TEXT_ANSWER_LEN = 4000
MAX_COMMENT_LEN = 2000
MAX_KUDOS_LEN = 1000


@dataclass(frozen=True)
class UserAccount:
    id: UUID
    email: str
    display_name: str
    role: Role
    active: bool
    created_at: datetime


@dataclass(frozen=True)
class Group:
    id: UUID
    name: str
    archived: bool


@dataclass(frozen=True)
class GroupMembership:
    group_id: UUID
    user_id: UUID
    role_in_group: GroupRole


@dataclass(frozen=True)
class Question:
    id: UUID
    prompt: str
    kind: QuestionKind
    required: bool


@dataclass(frozen=True)
class CheckInTemplate:
    id: UUID
    title: str
    questions: tuple[Question, ...]
    status: TemplateStatus
    created_by: UUID
    created_at: datetime

    def question_by_id(self, qid: UUID) -> Question | None:
        for q in self.questions:
            if q.id == qid:
                return q
        return None


@dataclass(frozen=True)
class TemplateAssignment:
    template_id: UUID
    group_id: UUID
    active_from: PeriodId


@dataclass(frozen=True)
class Answer:
    question_id: UUID
    value: int | str


@dataclass(frozen=True)
class CheckInSubmission:
    id: UUID
    user_id: UUID
    template_id: UUID
    period: PeriodId
    answers: tuple[Answer, ...]
    revision: int
    submitted_at: datetime


@dataclass(frozen=True)
class Comment:
    id: UUID
    submission_id: UUID
    question_id: UUID | None
    author_id: UUID
    body: str
    created_at: datetime


@dataclass(frozen=True)
class Kudos:
    id: UUID
    from_user_id: UUID
    to_user_id: UUID
    message: str
    created_at: datetime


@dataclass(frozen=True)
class ReminderSchedule:
    id: UUID
    group_id: UUID
    template_id: UUID
    weekday: int  # 0 = Monday .. 6 = Sunday
    time_of_day: str  # "HH:MM"
    timezone: str
    enabled: bool


WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")
