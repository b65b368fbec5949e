"""
Error types for hydrogen_vpt.

Every failure carries an integer ``code``, a human-readable ``message`` and an
optional ``data`` dict with diagnostics. The CLI maps the error class to its
exit status.
"""

from __future__ import annotations

from typing import Any, Iterable

from pydantic import ValidationError


class VptError(Exception):
    """Base class of all errors raised by this package."""

    code: int = -32603
    exit_status: int = 1

    def __init__(self, message: str, data: dict[str, Any] | None = None, code: int | None = None):
        super().__init__(message)
        self.message = message
        self.data = data
        if code is not None:
            self.code = code

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.data:
            payload["data"] = self.data
        return payload

    def __str__(self) -> str:
        if self.data:
            return f"{self.message} ({self.data})"
        return self.message


class DomainError(VptError):
    """An argument lies outside the domain of the requested operation."""

    code = -32602
    exit_status = 3

    @classmethod
    def invalid_argument(cls, name: str, reason: str, value: Any = None) -> "DomainError":
        data: dict[str, Any] = {"argument": name, "reason": reason}
        if value is not None:
            data["value"] = value
        return cls(f"Invalid argument '{name}': {reason}", data)

    @classmethod
    def unknown_kind(cls, kind: str, allowed: Iterable[str]) -> "DomainError":
        allowed = sorted(allowed)
        return cls(
            f"Unknown kind '{kind}'; expected one of {', '.join(allowed)}",
            {"kind": kind, "allowed": allowed},
        )

    @classmethod
    def from_validation(cls, error: ValidationError) -> "DomainError":
        """Translate a pydantic ValidationError raised while building a record."""
        issues = [
            {"field": ".".join(str(p) for p in e["loc"]) or "<root>", "reason": e["msg"]}
            for e in error.errors()
        ]
        first = issues[0] if issues else {"field": "<root>", "reason": "invalid"}
        return cls(f"Invalid '{first['field']}': {first['reason']}", {"issues": issues})


class SingularConfigurationError(DomainError):
    """The trial frequencies make a requested quantity singular."""


class NumericalError(VptError):
    """A numerical procedure failed to reach its tolerance."""

    code = -32000
    exit_status = 4

    @classmethod
    def not_converged(cls, procedure: str, **diagnostics: Any) -> "NumericalError":
        return cls(f"{procedure} did not converge", {"procedure": procedure, **diagnostics})
