"""ISO-8601 week identifiers: the atomic reporting period for check-ins.

All weekly logic is anchored to ISO weeks (Monday first day) observed in a
single organization timezone.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

from zenith.errors import UnknownTimezone

_PERIOD_RE = re.compile(r"^(\d{4})-W(\d{2})$")

MIN_YEAR = 1970
MAX_YEAR = 2100


@dataclass(frozen=True, order=True)
class PeriodId:
    """One ISO week, e.g. 2025-W07. Ordered chronologically."""

    iso_year: int
    iso_week: int

    def __post_init__(self):
        if not (MIN_YEAR <= self.iso_year <= MAX_YEAR):
            raise ValueError(f"iso_year {self.iso_year} outside {MIN_YEAR}..{MAX_YEAR}")
        if not (1 <= self.iso_week <= weeks_in_iso_year(self.iso_year)):
            raise ValueError(f"{self.iso_year} has no ISO week {self.iso_week}")

    def render(self) -> str:
        return f"{self.iso_year:04d}-W{self.iso_week:02d}"

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, s: str) -> "PeriodId":
        m = _PERIOD_RE.match(s)
        if not m:
            raise ValueError(f"bad period {s!r}, expected YYYY-Www")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_date(cls, d: date) -> "PeriodId":
        iso = d.isocalendar()
        return cls(iso[0], iso[1])

    def monday(self) -> date:
        return date.fromisocalendar(self.iso_year, self.iso_week, 1)

    def next(self) -> "PeriodId":
        return PeriodId.from_date(self.monday() + timedelta(days=7))

    def prev(self) -> "PeriodId":
        return PeriodId.from_date(self.monday() - timedelta(days=7))


def weeks_in_iso_year(iso_year: int) -> int:
    # Dec 28 always falls in the year's last ISO week.
    return date(iso_year, 12, 28).isocalendar()[1]


def iso_week_of(t: datetime, tz: str) -> PeriodId:
    """ISO week containing instant ``t`` as observed in timezone ``tz``."""
    if t.tzinfo is None:
        raise ValueError("iso_week_of requires an aware datetime")
    if not (MIN_YEAR <= t.year <= MAX_YEAR):
        raise ValueError(f"timestamp year {t.year} outside {MIN_YEAR}..{MAX_YEAR}")
    local = t.astimezone(zone(tz))
    return PeriodId.from_date(local.date())


def zone(tz: str) -> ZoneInfo:
    try:
        return ZoneInfo(tz)
    except (ZoneInfoNotFoundError, ValueError, KeyError):
        raise UnknownTimezone(tz) from None


def period_range(start: PeriodId, end: PeriodId) -> list[PeriodId]:
    """All periods from start to end inclusive; empty when start > end."""
    out = []
    p = start
    while p <= end:
        out.append(p)
        p = p.next()
    return out


def week_bounds_utc(period: PeriodId, tz: str) -> tuple[datetime, datetime]:
    """[start, end) UTC instants of the period's local Monday-to-Monday week."""
    z = zone(tz)
    start_local = datetime.combine(period.monday(), datetime.min.time(), tzinfo=z)
    end_local = datetime.combine(period.monday() + timedelta(days=7), datetime.min.time(), tzinfo=z)
    return start_local.astimezone(ZoneInfo("UTC")), end_local.astimezone(ZoneInfo("UTC"))
