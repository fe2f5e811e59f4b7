"""Exception hierarchy shared by every engine module.

All domain failures derive from :class:`DemovizError` so callers (CLI,
service) can map them onto exit codes / HTTP statuses in one place.
"""

from __future__ import annotations

from typing import Any


class DemovizError(Exception):
    """Base class for all engine errors."""

    code = "Error"

    def __init__(self, message: str, *, ref: str | None = None):
        super().__init__(message)
        self.message = message
        self.ref = ref

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "ref": self.ref}


class ParseError(DemovizError):
    """A document is structurally malformed."""

    code = "ParseError"


class ReferenceError(DemovizError):  # noqa: A001 - spec-mandated name
    """An id reference (dataset, scale, field, mark, view) does not resolve."""

    code = "ReferenceError"


class EmptyChart(DemovizError):
    """A chart document declares zero views."""

    code = "EmptyChart"


class EmptyColumn(DemovizError):
    """Measure-type inference was asked about an empty column."""

    code = "EmptyColumn"


class UnknownView(DemovizError):
    code = "UnknownView"


class UnknownField(DemovizError):
    code = "UnknownField"


class EmptyTrace(DemovizError):
    code = "EmptyTrace"


class UnbalancedTrace(DemovizError):
    """pointerdown without a matching pointerup (or vice versa)."""

    code = "UnbalancedTrace"


class ZeroDisplacement(DemovizError):
    code = "ZeroDisplacement"


class NoValidSelection(DemovizError):
    """The demonstration admits no semantically valid selection."""

    code = "NoValidSelection"


class TypeMismatch(DemovizError):
    code = "TypeMismatch"


class CompileError(DemovizError):
    code = "CompileError"


class NotExpressible(DemovizError):
    """The interaction model cannot be lowered to the requested target.

    Carries the expressibility report: one entry per blocking feature.
    """

    code = "NotExpressible"

    def __init__(self, message: str, report: list[dict[str, Any]]):
        super().__init__(message)
        self.report = report

    def to_dict(self) -> dict[str, Any]:
        d = super().to_dict()
        d["details"] = self.report
        return d
