"""ISO week identity against an independent oracle.

The oracle computes the ISO week from first principles (nearest-Thursday
rule via ordinal arithmetic) without touching datetime.isocalendar, so the
two implementations can only agree by both being right.
"""

from __future__ import annotations

from datetime import date, datetime, timedelta, timezone
from zoneinfo import ZoneInfo

import pytest
from hypothesis import given, strategies as st

from zenith.core.periods import (
    MAX_YEAR,
    MIN_YEAR,
    PeriodId,
    iso_week_of,
    period_range,
    week_bounds_utc,
    weeks_in_iso_year,
    zone,
)
from zenith.errors import UnknownTimezone


def oracle_iso_week(d: date) -> tuple[int, int]:
    """Nearest-Thursday rule: a date's ISO week is the week of its Thursday."""
    # Monday=0 .. Sunday=6 from ordinal; Jan 1 year 1 was a Monday.
    weekday = (d.toordinal() - 1) % 7
    thursday = d + timedelta(days=3 - weekday)
    year = thursday.year
    jan1 = date(year, 1, 1)
    week = (thursday.toordinal() - jan1.toordinal()) // 7 + 1
    return year, week


dates = st.dates(min_value=date(MIN_YEAR, 1, 1), max_value=date(MAX_YEAR, 12, 28))


@given(dates)
def test_from_date_matches_independent_oracle(d):
    assert (PeriodId.from_date(d).iso_year, PeriodId.from_date(d).iso_week) == oracle_iso_week(d)


@given(dates)
def test_render_parse_round_trip(d):
    p = PeriodId.from_date(d)
    assert PeriodId.parse(p.render()) == p


@given(dates)
def test_monday_is_in_week_and_is_monday(d):
    p = PeriodId.from_date(d)
    monday = p.monday()
    assert monday.isoweekday() == 1
    assert PeriodId.from_date(monday) == p
    assert monday <= d <= monday + timedelta(days=6)


@given(dates)
def test_next_prev_inverse(d):
    p = PeriodId.from_date(d)
    assert p.next().prev() == p
    assert p.prev() < p < p.next()


def test_year_boundary_examples():
    # Dec 30 2024 and Jan 1 2025 share 2025-W01; Dec 31 2020 is 2020-W53.
    assert PeriodId.from_date(date(2024, 12, 30)).render() == "2025-W01"
    assert PeriodId.from_date(date(2025, 1, 1)).render() == "2025-W01"
    assert PeriodId.from_date(date(2020, 12, 31)).render() == "2020-W53"


def test_timezone_determines_the_week():
    # 2020-12-31 23:30 UTC is already Friday 2021-01-01 in UTC+14.
    t = datetime(2020, 12, 31, 23, 30, tzinfo=timezone.utc)
    assert iso_week_of(t, "UTC").render() == "2020-W53"
    assert iso_week_of(t, "Pacific/Kiritimati").render() == "2020-W53"
    t2 = datetime(2021, 1, 3, 23, 30, tzinfo=timezone.utc)  # Sunday in UTC
    assert iso_week_of(t2, "UTC").render() == "2020-W53"
    assert iso_week_of(t2, "Pacific/Kiritimati").render() == "2021-W01"


def test_iso_week_of_rejects_naive_datetimes():
    with pytest.raises(ValueError):
        iso_week_of(datetime(2025, 1, 1), "UTC")


def test_parse_rejects_malformed_strings():
    for bad in ("2025W07", "2025-w07", "25-W07", "2025-W7", "garbage", ""):
        with pytest.raises(ValueError):
            PeriodId.parse(bad)


def test_week_number_validated_against_year_length():
    assert weeks_in_iso_year(2020) == 53
    assert weeks_in_iso_year(2021) == 52
    PeriodId(2020, 53)
    with pytest.raises(ValueError):
        PeriodId(2021, 53)
    with pytest.raises(ValueError):
        PeriodId(2025, 0)


def test_unknown_timezone_is_a_domain_error():
    with pytest.raises(UnknownTimezone):
        zone("Mars/Olympus_Mons")


def test_period_range_inclusive_and_ordered():
    start = PeriodId.parse("2024-W50")
    end = PeriodId.parse("2025-W02")
    r = period_range(start, end)
    assert [p.render() for p in r] == ["2024-W50", "2024-W51", "2024-W52", "2025-W01", "2025-W02"]
    assert period_range(end, start) == []
    assert period_range(start, start) == [start]


def test_week_bounds_cover_exactly_the_local_week():
    # 2025-W10 contains the US spring-forward (Sun 2025-03-09), so the local
    # Monday-to-Monday week is an hour short in UTC terms.
    start, end = week_bounds_utc(PeriodId.parse("2025-W10"), "America/New_York")
    assert start.astimezone(ZoneInfo("America/New_York")).isoweekday() == 1
    assert (end - start) == timedelta(days=7) - timedelta(hours=1)
    s2, e2 = week_bounds_utc(PeriodId.parse("2025-W20"), "UTC")
    assert (e2 - s2) == timedelta(days=7)
