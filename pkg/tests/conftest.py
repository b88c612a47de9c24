"""Shared fixtures: a fresh file-backed store per test with pinned clock,
seeded id stream, and fast password hashing."""

from __future__ import annotations

import random
from datetime import datetime, timezone

import pytest

from zenith import checkin, directory
from zenith.clock import ManualClock
from zenith.config import AppConfig, AuthConfig, DbConfig
from zenith.core.models import Answer, QuestionKind, Role
from zenith.core.periods import iso_week_of
from zenith.persistence.store import Store
from zenith.runtime import IdFactory, Runtime

FROZEN_NOW = datetime(2026, 8, 12, 9, 0, 0, tzinfo=timezone.utc)  # Wednesday, 2026-W33


def build_runtime(tmp_path, *, name="main.db", rng_seed=1234, config: AppConfig | None = None):
    config = config or AppConfig(
        db=DbConfig(url=f"sqlite:///{tmp_path}/{name}"),
        auth=AuthConfig(hash_cost=600),
    )
    rt = Runtime(
        store=Store(config.db.url),
        config=config,
        clock=ManualClock(FROZEN_NOW),
        ids=IdFactory(random.Random(rng_seed)),
    )
    rt.store.apply_migrations()
    return rt


@pytest.fixture
def rt(tmp_path):
    return build_runtime(tmp_path)


@pytest.fixture
def admin(rt):
    user, _ = directory.bootstrap(rt, "admin@example.com", "Ada Admin")
    return user


def make_user(rt, email, name, role=Role.EMPLOYEE, password="correct-horse-battery"):
    return directory.create_user(rt, email, name, role, password)


@pytest.fixture
def team(rt, admin):
    """One group: manager Mia, employees Eve and Omar; Zoe outside the group."""
    eve = make_user(rt, "eve@example.com", "Eve Employee")
    omar = make_user(rt, "omar@example.com", "Omar Employee")
    mia = make_user(rt, "mia@example.com", "Mia Manager", role=Role.MANAGER)
    zoe = make_user(rt, "zoe@example.com", "Zoe Outsider")
    group = directory.create_group(
        rt, admin, "Platform", member_ids={eve.id, omar.id, mia.id}, manager_ids={mia.id}
    )
    return {"admin": admin, "eve": eve, "omar": omar, "mia": mia, "zoe": zoe, "group": group}


def make_pulse_template(rt, admin, *, likert=2, free_text=True, title="Pulse"):
    drafts = [
        checkin.QuestionDraft(f"Likert question {i + 1}?", QuestionKind.LIKERT5)
        for i in range(likert)
    ]
    if free_text:
        drafts.append(checkin.QuestionDraft("Anything else?", QuestionKind.FREE_TEXT, required=False))
    return checkin.create_template(rt, admin, title, drafts)


@pytest.fixture
def active_template(rt, team):
    template = make_pulse_template(rt, team["admin"])
    period = iso_week_of(rt.clock.now(), rt.config.org.timezone)
    checkin.assign_and_activate(rt, team["admin"], template.id, team["group"].id, period)
    return template


def likert_answers(template, values, note=None):
    answers = []
    i = 0
    for q in template.questions:
        if q.kind is QuestionKind.LIKERT5:
            answers.append(Answer(q.id, values[i]))
            i += 1
        elif note is not None:
            answers.append(Answer(q.id, note))
    return answers
