from __future__ import annotations

from typing import Any


class ArgumentError(ValueError):
    """Raised when an operation's precondition does not hold."""


class NotFoundError(KeyError):
    """Raised when a named path, problem or method is unknown."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class CapabilityError(ValueError):
    """Raised for valid inputs the operation does not support."""


class NumericError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics: dict[str, Any] = dict(diagnostics or {})


class BlowUpError(NumericError):
    def __init__(self, message: str, substep: int, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message, diagnostics)
        self.substep = substep


class IntegrationError(NumericError):
    def __init__(self, message: str, step: int, time: float, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message, diagnostics)
        self.step = step
        self.time = time


class InternalError(RuntimeError):
    """Raised when an invariant of the series arithmetic is broken."""


class CheckFailure(RuntimeError):
    """Raised in check mode when a result misses its acceptance threshold."""
