"""Application configuration: dataclasses plus an INI-file loader.

Config files use one section per key prefix, so ``org.timezone`` lives under
``[org]`` as ``timezone = ...``. Environment variables ZENITH_DB_URL and
ZENITH_PORT override the file.
"""

from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field, replace
from datetime import timedelta
from decimal import Decimal
from pathlib import Path

_DURATION_RE = re.compile(r"^(\d+(?:\.\d+)?)(s|m|h|d)$")
_DURATION_UNITS = {"s": 1, "m": 60, "h": 3600, "d": 86400}


def parse_duration(s: str) -> timedelta:
    m = _DURATION_RE.match(s.strip())
    if not m:
        raise ValueError(f"bad duration {s!r} (expected e.g. 30m, 12h)")
    return timedelta(seconds=float(m.group(1)) * _DURATION_UNITS[m.group(2)])


@dataclass(frozen=True)
class OrgConfig:
    timezone: str = "UTC"


@dataclass(frozen=True)
class DbConfig:
    url: str = "sqlite:///zenith.db"


@dataclass(frozen=True)
class AuthConfig:
    session_ttl: timedelta = timedelta(hours=12)
    hash_cost: int = 50_000  # PBKDF2-SHA256 iterations


@dataclass(frozen=True)
class FlagsConfig:
    low_week: Decimal = Decimal("2.00")
    decline_drop: Decimal = Decimal("1.00")
    decline_window: int = 3
    missed_weeks: int = 2
    group_low: Decimal = Decimal("2.50")
    group_low_min_rate: Decimal = Decimal("0.50")


@dataclass(frozen=True)
class NotifyConfig:
    sink: str = "console"  # console | file | smtp
    max_attempts: int = 3
    batch_size: int = 100
    kudos: bool = False  # email on received kudos; off by default
    file_path: str = "reminders.jsonl"


@dataclass(frozen=True)
class SmtpConfig:
    host: str = "localhost"
    port: int = 25
    username: str = ""
    password: str = ""
    from_addr: str = "zenith@localhost"


@dataclass(frozen=True)
class ServerConfig:
    port: int = 8080
    base_url: str = "http://localhost:8080"
    static_dir: str = ""  # optional built web-ui bundle


@dataclass(frozen=True)
class AdminConfig:
    """Credentials the admin CLI uses to resolve its acting account."""

    email: str = ""
    password: str = ""


@dataclass(frozen=True)
class AppConfig:
    org: OrgConfig = field(default_factory=OrgConfig)
    db: DbConfig = field(default_factory=DbConfig)
    auth: AuthConfig = field(default_factory=AuthConfig)
    flags: FlagsConfig = field(default_factory=FlagsConfig)
    notify: NotifyConfig = field(default_factory=NotifyConfig)
    smtp: SmtpConfig = field(default_factory=SmtpConfig)
    server: ServerConfig = field(default_factory=ServerConfig)
    admin: AdminConfig = field(default_factory=AdminConfig)


def _get(parser: configparser.ConfigParser, section: str, option: str, conv=str, default=None):
    if parser.has_option(section, option):
        return conv(parser.get(section, option))
    return default


def load_config(path: str | Path | None = None, env: dict | None = None) -> AppConfig:
    """Build an AppConfig from an optional INI file plus env overrides."""
    env = os.environ if env is None else env
    cfg = AppConfig()
    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(str(path))
        if not read:
            raise FileNotFoundError(f"config file not found: {path}")
        cfg = AppConfig(
            org=OrgConfig(
                timezone=_get(parser, "org", "timezone", str, cfg.org.timezone),
            ),
            db=DbConfig(
                url=_get(parser, "db", "url", str, cfg.db.url),
            ),
            auth=AuthConfig(
                session_ttl=_get(parser, "auth", "session_ttl", parse_duration, cfg.auth.session_ttl),
                hash_cost=_get(parser, "auth", "hash_cost", int, cfg.auth.hash_cost),
            ),
            flags=FlagsConfig(
                low_week=_get(parser, "flags", "low_week", Decimal, cfg.flags.low_week),
                decline_drop=_get(parser, "flags", "decline_drop", Decimal, cfg.flags.decline_drop),
                decline_window=_get(parser, "flags", "decline_window", int, cfg.flags.decline_window),
                missed_weeks=_get(parser, "flags", "missed_weeks", int, cfg.flags.missed_weeks),
                group_low=_get(parser, "flags", "group_low", Decimal, cfg.flags.group_low),
                group_low_min_rate=_get(
                    parser, "flags", "group_low_min_rate", Decimal, cfg.flags.group_low_min_rate
                ),
            ),
            notify=NotifyConfig(
                sink=_get(parser, "notify", "sink", str, cfg.notify.sink),
                max_attempts=_get(parser, "notify", "max_attempts", int, cfg.notify.max_attempts),
                batch_size=_get(parser, "notify", "batch_size", int, cfg.notify.batch_size),
                kudos=_get(parser, "notify", "kudos", _parse_bool, cfg.notify.kudos),
                file_path=_get(parser, "notify", "file_path", str, cfg.notify.file_path),
            ),
            smtp=SmtpConfig(
                host=_get(parser, "smtp", "host", str, cfg.smtp.host),
                port=_get(parser, "smtp", "port", int, cfg.smtp.port),
                username=_get(parser, "smtp", "username", str, cfg.smtp.username),
                password=_get(parser, "smtp", "password", str, cfg.smtp.password),
                from_addr=_get(parser, "smtp", "from_addr", str, cfg.smtp.from_addr),
            ),
            server=ServerConfig(
                port=_get(parser, "server", "port", int, cfg.server.port),
                base_url=_get(parser, "server", "base_url", str, cfg.server.base_url),
                static_dir=_get(parser, "server", "static_dir", str, cfg.server.static_dir),
            ),
            admin=AdminConfig(
                email=_get(parser, "admin", "email", str, cfg.admin.email),
                password=_get(parser, "admin", "password", str, cfg.admin.password),
            ),
        )
    if env.get("ZENITH_DB_URL"):
        cfg = replace(cfg, db=DbConfig(url=env["ZENITH_DB_URL"]))
    if env.get("ZENITH_PORT"):
        cfg = replace(cfg, server=replace(cfg.server, port=int(env["ZENITH_PORT"])))
    return cfg


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"bad boolean {s!r}")
