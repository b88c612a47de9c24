"""Domain error hierarchy shared by the service layer, HTTP API, and CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ValidationIssue:
    """One machine-readable rule violation, optionally pointing at a field."""

    code: str
    path: str = ""

    def as_dict(self) -> dict:
        out = {"code": self.code}
        if self.path:
            out["path"] = self.path
        return out


class DomainError(Exception):
    """Base class for every error the domain layer raises on purpose."""

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class ValidationFailed(DomainError):
    def __init__(self, issues: list[ValidationIssue], message: str = "validation failed"):
        super().__init__(message)
        self.issues = issues

    @classmethod
    def single(cls, code: str, path: str = "", message: str = "") -> "ValidationFailed":
        return cls([ValidationIssue(code, path)], message or f"validation failed: {code}")


class Unauthenticated(DomainError):
    pass


class Forbidden(DomainError):
    def __init__(self, reason_code: str = "ROLE_FORBIDDEN", message: str = ""):
        super().__init__(message or f"forbidden: {reason_code}")
        self.reason_code = reason_code


class NotFound(DomainError):
    pass


class Conflict(DomainError):
    pass


class WindowClosed(DomainError):
    pass


class InvalidCredentials(Unauthenticated):
    """Uniform login failure: never reveals whether the email exists."""

    def __init__(self):
        super().__init__("invalid credentials")


class AccountInactive(DomainError):
    pass


class SelfKudos(ValidationFailed):
    def __init__(self):
        super().__init__([ValidationIssue("SELF_KUDOS", "to_user")], "kudos cannot be sent to yourself")


class RecipientInactive(ValidationFailed):
    def __init__(self):
        super().__init__([ValidationIssue("RECIPIENT_INACTIVE", "to_user")], "recipient account is inactive")


class UnknownTimezone(ValidationFailed):
    def __init__(self, tz: str):
        super().__init__([ValidationIssue("UNKNOWN_TIMEZONE", "timezone")], f"unknown timezone: {tz!r}")


class RangeTooLarge(ValidationFailed):
    def __init__(self, limit_weeks: int):
        super().__init__(
            [ValidationIssue("RANGE_TOO_LARGE", "range")],
            f"period range exceeds {limit_weeks} weeks",
        )


class NoActiveCheckIn(NotFound):
    def __init__(self):
        super().__init__("no active check-in covers the current period")


class AlreadyBootstrapped(Conflict):
    def __init__(self):
        super().__init__("an admin account already exists")


class StoreUnavailable(DomainError):
    pass


class MigrationConflict(DomainError):
    pass


class SinkUnavailable(DomainError):
    """Delivery sink cannot be reached at all; the whole batch is aborted."""


class SinkSendError(DomainError):
    """One message failed to send; counts as a delivery attempt."""
