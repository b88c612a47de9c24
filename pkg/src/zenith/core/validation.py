"""Syntax and invariant checks for the vocabulary types.

Violations are data (lists of ValidationIssue), not exceptions; callers decide
whether to raise.
"""

from __future__ import annotations

import re
from uuid import UUID

from zenith.core.models import (
    MAX_NAME_LEN,
    MAX_PROMPT_LEN,
    MAX_QUESTIONS,
    MAX_TEXT_ANSWER_LEN,
    CheckInTemplate,
    QuestionKind,
)
from zenith.errors import ValidationIssue

# local@domain with a dotted domain; no whitespace anywhere. Deliverability is
# the notifier sink's problem, not ours.
_EMAIL_RE = re.compile(r"^[^@\s]+@([^@\s.]+\.)+[^@\s.]+$")


def validate_email(s: str) -> bool:
    return bool(_EMAIL_RE.match(s))


def validate_display_name(name: str) -> list[ValidationIssue]:
    issues = []
    if not name.strip():
        issues.append(ValidationIssue("EMPTY_DISPLAY_NAME", "display_name"))
    elif len(name) > MAX_NAME_LEN:
        issues.append(ValidationIssue("DISPLAY_NAME_TOO_LONG", "display_name"))
    return issues


def validate_group_name(name: str) -> list[ValidationIssue]:
    issues = []
    if not name.strip():
        issues.append(ValidationIssue("EMPTY_GROUP_NAME", "name"))
    elif len(name) > MAX_NAME_LEN:
        issues.append(ValidationIssue("GROUP_NAME_TOO_LONG", "name"))
    return issues


def validate_template(t: CheckInTemplate) -> list[ValidationIssue]:
    """Every invariant violation on the template, empty list when valid."""
    issues: list[ValidationIssue] = []
    if not t.title.strip():
        issues.append(ValidationIssue("EMPTY_TITLE", "title"))
    if len(t.questions) == 0:
        issues.append(ValidationIssue("NO_QUESTIONS", "questions"))
    if len(t.questions) > MAX_QUESTIONS:
        issues.append(ValidationIssue("TOO_MANY_QUESTIONS", "questions"))
    seen: set[UUID] = set()
    for i, q in enumerate(t.questions):
        path = f"questions[{i}]"
        if q.id in seen:
            issues.append(ValidationIssue("DUP_QUESTION_ID", path))
        seen.add(q.id)
        if not q.prompt.strip():
            issues.append(ValidationIssue("EMPTY_PROMPT", path))
        elif len(q.prompt) > MAX_PROMPT_LEN:
            issues.append(ValidationIssue("PROMPT_TOO_LONG", path))
    return issues


def validate_answer_value(kind: QuestionKind, value: int | str) -> str | None:
    """Issue code for a single answer value, or None when acceptable."""
    if kind is QuestionKind.LIKERT5:
        if isinstance(value, bool) or not isinstance(value, int):
            return "BAD_VALUE_KIND"
        if not (1 <= value <= 5):
            return "LIKERT_OUT_OF_RANGE"
    else:
        if not isinstance(value, str):
            return "BAD_VALUE_KIND"
        if not value.strip():
            return "EMPTY_TEXT"
        if len(value) > MAX_TEXT_ANSWER_LEN:
            return "TEXT_TOO_LONG"
    return None
