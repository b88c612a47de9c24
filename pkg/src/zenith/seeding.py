"""Deterministic synthetic data for demos and the end-to-end analytics suite.

Everything a seed run writes — ids, salts, timestamps, answer values — comes
from one random.Random(rng_seed) stream consumed in a fixed order, so the
same profile against a fresh store always produces the same rows.

Archetypes shape weekly Likert means:
  stable    draws near 4.0, clamped to [3.67, 4.33] so three-week drops can
            never reach the decline threshold
  declining walks down 0.4/week from 4.0 (floor 1.0), which guarantees at
            least one strictly-decreasing three-week window with a full
            1.00 drop by week four
  low       draws near 1.8, tripping LOW_WEEK regularly
  absentee  skips about half the weeks, stable-like when present
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import timedelta
from decimal import ROUND_HALF_UP, Decimal
from uuid import UUID

from sqlalchemy import text

from zenith.access import hash_password
from zenith.clock import format_ts
from zenith.core.models import QuestionKind, Role, TemplateStatus
from zenith.core.periods import PeriodId, iso_week_of, week_bounds_utc
from zenith.errors import ValidationFailed
from zenith.runtime import Runtime

ARCHETYPES = ("stable", "declining", "low", "absentee")

LIKERT_PROMPTS = (
    "How energized did you feel this week?",
    "How manageable was your workload?",
    "How connected did you feel to your team?",
)
TEXT_PROMPT = "Anything else you want to share?"

PHRASES = (
    "Steady week overall.",
    "Shipping felt good.",
    "A bit stretched thin.",
    "Looking forward to next sprint.",
    "Could use clearer priorities.",
    "Team support made the difference.",
)

KUDOS_MESSAGES = (
    "Thanks for the thoughtful review!",
    "Great pairing session this week.",
    "Appreciate you covering on-call.",
    "Your demo landed really well.",
    "Thanks for unblocking me so fast.",
)


@dataclass(frozen=True)
class SeedProfile:
    users: int = 20
    groups: int = 3
    weeks: int = 12
    rng_seed: int = 42
    mix: dict = field(
        default_factory=lambda: {
            "stable": 0.4,
            "declining": 0.2,
            "low": 0.2,
            "absentee": 0.2,
        }
    )

    def __post_init__(self) -> None:
        if min(self.users, self.groups, self.weeks) < 1:
            raise ValidationFailed.single("BAD_COUNT", "profile")
        if set(self.mix) - set(ARCHETYPES):
            raise ValidationFailed.single("BAD_ARCHETYPE", "mix")
        if abs(sum(self.mix.values()) - 1.0) > 1e-9:
            raise ValidationFailed.single("MIX_NOT_NORMALIZED", "mix")

    def archetype_counts(self) -> dict[str, int]:
        counts = {a: int(round(self.mix.get(a, 0.0) * self.users)) for a in ARCHETYPES}
        # Rounding drift lands on the largest bucket so totals always match.
        drift = self.users - sum(counts.values())
        largest = max(ARCHETYPES, key=lambda a: counts[a])
        counts[largest] += drift
        return counts


def _distribute(total: int, parts: int) -> list[int]:
    """parts integers in [1,5] summing to total, as flat as possible."""
    base, rem = divmod(total, parts)
    return [base + 1] * rem + [base] * (parts - rem)


def _weekly_k(archetype: str, week_index: int, rng: random.Random, q: int) -> int | None:
    """Likert-point total for the week, or None for a skipped week."""
    if archetype == "stable":
        mean = min(max(rng.gauss(4.0, 0.25), 3.67), 4.33)
    elif archetype == "declining":
        mean = max(1.0, 4.0 - 0.4 * week_index)
    elif archetype == "low":
        mean = min(max(rng.gauss(1.8, 0.3), 1.0), 2.8)
    else:  # absentee
        if rng.random() < 0.5:
            return None
        mean = min(max(rng.gauss(4.0, 0.25), 3.67), 4.33)
    k = int(Decimal(mean * q).quantize(Decimal("1"), rounding=ROUND_HALF_UP))
    return min(max(k, q), 5 * q)


def run_seed(rt: Runtime, profile: SeedProfile) -> dict[str, int]:
    rng = random.Random(profile.rng_seed)
    tz = rt.config.org.timezone
    cost = rt.config.auth.hash_cost

    current = iso_week_of(rt.clock.now(), tz)
    end = current.prev()  # seed only completed weeks
    periods = [end]
    for _ in range(profile.weeks - 1):
        periods.append(periods[-1].prev())
    periods.reverse()
    anchor, _ = week_bounds_utc(periods[0], tz)

    counts = profile.archetype_counts()
    archetype_of: list[str] = []
    for a in ARCHETYPES:
        archetype_of.extend([a] * counts[a])

    new_uuid = lambda: str(UUID(int=rng.getrandbits(128), version=4))

    summary = {"users": 0, "submissions": 0, "kudos": 0}
    with rt.store.tx() as conn:
        group_ids = []
        for g in range(profile.groups):
            gid = new_uuid()
            group_ids.append(gid)
            conn.execute(
                text("INSERT INTO groups (id, name, archived) VALUES (:id, :n, 0)"),
                {"id": gid, "n": f"Seed Team {g + 1:02d}"},
            )

        user_ids = []
        for i in range(profile.users):
            uid = new_uuid()
            user_ids.append(uid)
            group = group_ids[i % profile.groups]
            manager_of_group = i < profile.groups  # first user per group manages it
            role = Role.MANAGER if manager_of_group else Role.EMPLOYEE
            conn.execute(
                text(
                    "INSERT INTO users (id, email, display_name, role, active, "
                    "password_hash, must_change_password, created_at) "
                    "VALUES (:id, :e, :n, :r, 1, :ph, 0, :c)"
                ),
                {
                    "id": uid,
                    "e": f"user{i + 1:02d}@seed.example",
                    "n": f"Seed User {i + 1:02d}",
                    "r": role.value,
                    "ph": hash_password(
                        f"seed-password-{i + 1:02d}", cost, rng.getrandbits(128).to_bytes(16, "big")
                    ),
                    "c": format_ts(anchor + timedelta(hours=8, minutes=i)),
                },
            )
            conn.execute(
                text(
                    "INSERT INTO group_members (id, group_id, user_id, role_in_group) "
                    "VALUES (:id, :g, :u, :gr)"
                ),
                {
                    "id": new_uuid(),
                    "g": group,
                    "u": uid,
                    "gr": "manager_of" if manager_of_group else "member",
                },
            )
            summary["users"] += 1

        template_id = new_uuid()
        conn.execute(
            text(
                "INSERT INTO templates (id, title, status, created_by, created_at) "
                "VALUES (:id, :t, :s, :b, :c)"
            ),
            {
                "id": template_id,
                "t": "Weekly Pulse",
                "s": TemplateStatus.ACTIVE.value,
                "b": user_ids[0],
                "c": format_ts(anchor + timedelta(hours=9)),
            },
        )
        question_ids = []
        for pos, prompt in enumerate(LIKERT_PROMPTS):
            qid = new_uuid()
            question_ids.append(qid)
            conn.execute(
                text(
                    "INSERT INTO questions (id, template_id, position, prompt, kind, required) "
                    "VALUES (:id, :t, :p, :pr, :k, 1)"
                ),
                {"id": qid, "t": template_id, "p": pos, "pr": prompt,
                 "k": QuestionKind.LIKERT5.value},
            )
        text_qid = new_uuid()
        conn.execute(
            text(
                "INSERT INTO questions (id, template_id, position, prompt, kind, required) "
                "VALUES (:id, :t, :p, :pr, :k, 0)"
            ),
            {"id": text_qid, "t": template_id, "p": len(LIKERT_PROMPTS),
             "pr": TEXT_PROMPT, "k": QuestionKind.FREE_TEXT.value},
        )
        for gid in group_ids:
            conn.execute(
                text(
                    "INSERT INTO template_assignments (id, template_id, group_id, active_from) "
                    "VALUES (:id, :t, :g, :f)"
                ),
                {"id": new_uuid(), "t": template_id, "g": gid, "f": periods[0].render()},
            )

        q = len(LIKERT_PROMPTS)
        for i, uid in enumerate(user_ids):
            archetype = archetype_of[i]
            for w, period in enumerate(periods):
                k = _weekly_k(archetype, w, rng, q)
                if k is None:
                    continue
                week_start, _ = week_bounds_utc(period, tz)
                submitted = week_start + timedelta(
                    days=2, hours=10, seconds=rng.randint(0, 3600)
                )
                sid = new_uuid()
                conn.execute(
                    text(
                        "INSERT INTO submissions (id, user_id, template_id, period, "
                        "revision, submitted_at) VALUES (:id, :u, :t, :p, 1, :at)"
                    ),
                    {"id": sid, "u": uid, "t": template_id, "p": period.render(),
                     "at": format_ts(submitted)},
                )
                for qid, value in zip(question_ids, _distribute(k, q)):
                    conn.execute(
                        text(
                            "INSERT INTO answers (id, submission_id, question_id, "
                            "value_int, value_text) VALUES (:id, :s, :q, :v, NULL)"
                        ),
                        {"id": new_uuid(), "s": sid, "q": qid, "v": value},
                    )
                conn.execute(
                    text(
                        "INSERT INTO answers (id, submission_id, question_id, "
                        "value_int, value_text) VALUES (:id, :s, :q, NULL, :v)"
                    ),
                    {"id": new_uuid(), "s": sid, "q": text_qid,
                     "v": rng.choice(PHRASES)},
                )
                summary["submissions"] += 1

        for w, period in enumerate(periods):
            week_start, _ = week_bounds_utc(period, tz)
            for i, uid in enumerate(user_ids):
                if rng.random() >= 0.3:
                    continue
                to = rng.choice([u for u in user_ids if u != uid])
                created = week_start + timedelta(
                    days=3, hours=15, seconds=rng.randint(0, 3600)
                )
                conn.execute(
                    text(
                        "INSERT INTO kudos (id, from_user_id, to_user_id, message, created_at) "
                        "VALUES (:id, :f, :t, :m, :c)"
                    ),
                    {"id": new_uuid(), "f": uid, "t": to,
                     "m": rng.choice(KUDOS_MESSAGES), "c": format_ts(created)},
                )
                summary["kudos"] += 1

    return summary


def seeded_user_archetypes(profile: SeedProfile) -> list[str]:
    """Archetype per seeded user, in email order (user01, user02, ...)."""
    counts = profile.archetype_counts()
    out: list[str] = []
    for a in ARCHETYPES:
        out.extend([a] * counts[a])
    return out
