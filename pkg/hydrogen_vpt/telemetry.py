"""
Operation events for hydrogen_vpt.

Provides a single event model and a generic emit helper so that long running
operations (optimizations, scans, series solves) report what they did.
Events carry operational metadata only: operation name, outcome, and a flat
map of string details. They are written to the package logger and, when a
recorder is supplied, collected for embedding in output metadata.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Literal

from pydantic import BaseModel

logger = logging.getLogger(__name__)


class OperationEvent(BaseModel):
    operation: str
    outcome: Literal["success", "failure"]
    details: dict[str, str] = {}


@dataclass
class EventRecorder:
    """Collects emitted events in emission order."""

    events: list[OperationEvent] = field(default_factory=list)

    def record(self, event: OperationEvent) -> None:
        self.events.append(event)

    def as_dicts(self) -> list[dict[str, Any]]:
        return [e.model_dump() for e in self.events]


_default_recorder: EventRecorder | None = None


def set_default_recorder(recorder: EventRecorder | None) -> None:
    """Install the recorder used when an operation is not handed one."""
    global _default_recorder
    _default_recorder = recorder


def get_default_recorder() -> EventRecorder | None:
    return _default_recorder


def emit_event(
    recorder: EventRecorder | None,
    operation: str,
    outcome: str,
    details: dict[str, Any] | None = None,
) -> None:
    """Emit an operation event.

    Safe to call: logs errors but does not raise.
    """
    try:
        event = OperationEvent(
            operation=operation,
            outcome=outcome,
            details={k: str(v) for k, v in (details or {}).items()},
        )
        logger.debug("[event] operation=%s outcome=%s details=%s", operation, outcome, event.details)
        target = recorder if recorder is not None else _default_recorder
        if target is not None:
            target.record(event)
    except Exception:
        logger.warning("Failed to emit event: %s", operation, exc_info=True)


def auto_emit_event(operation: str, details_fn: Callable[..., dict[str, Any]] | None = None):
    """Decorate a function so that each call emits a success or failure event.

    ``details_fn`` receives the call's arguments and returns extra details.
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            details: dict[str, Any] = {"function": func.__name__}
            if details_fn:
                try:
                    details.update(details_fn(*args, **kwargs))
                except Exception:
                    logger.debug("details_fn failed for %s", operation, exc_info=True)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                emit_event(None, operation, "failure", {**details, "error_message": f"{type(e).__name__}: {e}"})
                raise
            status = getattr(result, "status", None)
            if status is not None:
                details["status"] = status
            emit_event(None, operation, "failure" if status == "failed" else "success", details)
            return result
        return wrapper
    return decorator
