"""Synthetic-data generator: determinism, profile validation, and the
behavioural guarantees each archetype makes to the analytics suite."""

from __future__ import annotations

import pytest
from sqlalchemy import text

from zenith import analytics
from zenith.core.periods import iso_week_of
from zenith.errors import ValidationFailed
from zenith.persistence.export import export_json
from zenith.seeding import ARCHETYPES, SeedProfile, run_seed, seeded_user_archetypes

from conftest import build_runtime


def seeded_periods(rt, weeks: int):
    """The completed weeks a seed run writes, oldest first."""
    end = iso_week_of(rt.clock.now(), rt.config.org.timezone).prev()
    out = [end]
    for _ in range(weeks - 1):
        out.append(out[-1].prev())
    out.reverse()
    return out


def archetype_by_user_id(rt, profile: SeedProfile) -> dict[str, str]:
    """user_id -> archetype, matching the generator's email ordering."""
    kinds = seeded_user_archetypes(profile)
    with rt.store.tx() as conn:
        rows = conn.execute(text("SELECT id, email FROM users ORDER BY email")).fetchall()
    assert len(rows) == len(kinds)
    return {row.id: kind for row, kind in zip(rows, kinds)}


def decline_flags_by_user(rt) -> dict[str, int]:
    with rt.store.tx() as conn:
        rows = conn.execute(
            text(
                "SELECT subject_id, COUNT(*) AS n FROM red_flags "
                "WHERE rule = 'DECLINE_3W' AND subject_kind = 'user' GROUP BY subject_id"
            )
        ).fetchall()
    return {r.subject_id: r.n for r in rows}


# --- profile validation -----------------------------------------------------------


@pytest.mark.parametrize("field", ["users", "groups", "weeks"])
def test_profile_counts_must_be_positive(field):
    with pytest.raises(ValidationFailed) as err:
        SeedProfile(**{field: 0})
    assert err.value.issues[0].code == "BAD_COUNT"


def test_profile_rejects_unknown_archetype():
    with pytest.raises(ValidationFailed) as err:
        SeedProfile(mix={"stable": 0.5, "chaotic": 0.5})
    assert err.value.issues[0].code == "BAD_ARCHETYPE"


def test_profile_mix_must_sum_to_one():
    with pytest.raises(ValidationFailed) as err:
        SeedProfile(mix={"stable": 0.5, "low": 0.4})
    assert err.value.issues[0].code == "MIX_NOT_NORMALIZED"


@pytest.mark.parametrize("users", [1, 2, 3, 7, 19, 20, 33, 100])
def test_archetype_counts_sum_to_user_count(users):
    profile = SeedProfile(users=users)
    counts = profile.archetype_counts()
    assert sum(counts.values()) == users
    assert set(counts) == set(ARCHETYPES)
    assert all(n >= 0 for n in counts.values())
    assert seeded_user_archetypes(profile) == [
        a for a in ARCHETYPES for _ in range(counts[a])
    ]


# --- determinism ---------------------------------------------------------------------


def test_same_profile_seeds_identical_stores(tmp_path):
    profile = SeedProfile(users=8, groups=2, weeks=4, rng_seed=42)
    exports = []
    for name in ("one.db", "two.db"):
        rt = build_runtime(tmp_path, name=name)
        run_seed(rt, profile)
        exports.append(export_json(rt.store))
    assert exports[0] == exports[1]


def test_different_rng_seed_changes_content(tmp_path):
    a = build_runtime(tmp_path, name="a.db")
    b = build_runtime(tmp_path, name="b.db")
    run_seed(a, SeedProfile(users=8, groups=2, weeks=4, rng_seed=1))
    run_seed(b, SeedProfile(users=8, groups=2, weeks=4, rng_seed=2))
    assert export_json(a.store) != export_json(b.store)


def test_summary_matches_row_counts(tmp_path):
    rt = build_runtime(tmp_path)
    summary = run_seed(rt, SeedProfile(users=9, groups=3, weeks=5, rng_seed=3))
    with rt.store.tx() as conn:
        count = lambda t: conn.execute(text(f"SELECT COUNT(*) FROM {t}")).scalar_one()
        assert summary["users"] == count("users") == 9
        assert summary["submissions"] == count("submissions")
        assert summary["kudos"] == count("kudos")
        # one email value per user, stored exactly once
        assert count("users") == conn.execute(
            text("SELECT COUNT(DISTINCT email) FROM users")
        ).scalar_one()


def test_seed_covers_only_completed_weeks(tmp_path):
    rt = build_runtime(tmp_path)
    weeks = 4
    run_seed(rt, SeedProfile(users=4, groups=1, weeks=weeks, rng_seed=5))
    allowed = {p.render() for p in seeded_periods(rt, weeks)}
    current = iso_week_of(rt.clock.now(), rt.config.org.timezone).render()
    with rt.store.tx() as conn:
        stored = {r[0] for r in conn.execute(text("SELECT DISTINCT period FROM submissions"))}
    assert stored <= allowed
    assert current not in stored


def test_every_seeded_user_belongs_to_exactly_one_group(tmp_path):
    rt = build_runtime(tmp_path)
    run_seed(rt, SeedProfile(users=10, groups=3, weeks=2, rng_seed=6))
    with rt.store.tx() as conn:
        rows = conn.execute(
            text("SELECT user_id, COUNT(*) AS n FROM group_members GROUP BY user_id")
        ).fetchall()
        assert len(rows) == 10 and all(r.n == 1 for r in rows)
        managed = conn.execute(
            text(
                "SELECT COUNT(DISTINCT group_id) FROM group_members "
                "WHERE role_in_group = 'manager_of'"
            )
        ).scalar_one()
    assert managed == 3  # every group gets a manager


# --- archetype guarantees -------------------------------------------------------------


def run_detection_over_seed(rt, weeks: int):
    periods = seeded_periods(rt, weeks)
    return analytics.run_detection(rt, periods[0], periods[-1])


def test_declining_users_always_trip_the_decline_rule(tmp_path):
    rt = build_runtime(tmp_path)
    profile = SeedProfile(users=10, groups=2, weeks=6, rng_seed=42)
    run_seed(rt, profile)
    run_detection_over_seed(rt, profile.weeks)

    kinds = archetype_by_user_id(rt, profile)
    declines = decline_flags_by_user(rt)
    decliners = [uid for uid, k in kinds.items() if k == "declining"]
    assert decliners, "profile must include declining users for this test"
    for uid in decliners:
        assert declines.get(uid, 0) >= 1
    for uid, kind in kinds.items():
        if kind == "stable":
            assert uid not in declines


def test_single_stable_week_produces_no_decline_flags(tmp_path):
    rt = build_runtime(tmp_path)
    profile = SeedProfile(users=5, groups=1, weeks=1, rng_seed=9, mix={"stable": 1.0})
    run_seed(rt, profile)
    run_detection_over_seed(rt, profile.weeks)
    assert decline_flags_by_user(rt) == {}


def test_low_archetype_trips_low_week(tmp_path):
    rt = build_runtime(tmp_path)
    profile = SeedProfile(users=6, groups=1, weeks=6, rng_seed=42, mix={"low": 1.0})
    run_seed(rt, profile)
    run_detection_over_seed(rt, profile.weeks)
    with rt.store.tx() as conn:
        n = conn.execute(
            text("SELECT COUNT(*) FROM red_flags WHERE rule = 'LOW_WEEK'")
        ).scalar_one()
    assert n >= 1


def test_absentees_skip_roughly_half_their_weeks(tmp_path):
    rt = build_runtime(tmp_path)
    profile = SeedProfile(users=10, groups=1, weeks=10, rng_seed=42, mix={"absentee": 1.0})
    run_seed(rt, profile)
    with rt.store.tx() as conn:
        n = conn.execute(text("SELECT COUNT(*) FROM submissions")).scalar_one()
    # 100 scheduled user-weeks at ~50% attendance; generous determinism band
    assert 25 <= n <= 75
