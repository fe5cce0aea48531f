from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .flow import FeasibilityReport


class InfeasibleError(ValueError):
    """Some source has no path to some terminal; carries the report."""

    def __init__(self, report: "FeasibilityReport", message: str | None = None):
        self.report = report
        super().__init__(message or f"infeasible instance: zero max-flow for pairs {list(report.failures)}")


class UnsupportedShapeError(ValueError):
    pass


class MulticastError(RuntimeError):
    """No random code gave rank 2 at every merge node within the retry cap."""


class InternalError(AssertionError):
    """A construction invariant failed. Signals a bug, not bad input."""

    def __init__(self, message: str, edge: int | None = None, frame: str | None = None):
        self.edge = edge
        self.frame = frame
        super().__init__(message)
