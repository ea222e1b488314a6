"""Exception hierarchy shared by all modules."""

from __future__ import annotations

from typing import Any


class AnosovKitError(Exception):
    """Base class for every error raised by this package."""


class InvalidTypeError(AnosovKitError, ValueError):
    """A (family, rank) pair that does not name a simple root system."""


class ValidationError(AnosovKitError, ValueError):
    """Input data violates a documented precondition."""


class ResourceLimitError(AnosovKitError):
    """A computation would exceed a configured resource cap.

    ``partial`` carries whatever was computed before the cap was hit, and
    ``progress`` is a small dict describing how far the computation got.
    """

    def __init__(self, message: str, *, partial: Any = None, progress: dict | None = None):
        super().__init__(message)
        self.partial = partial
        self.progress = dict(progress or {})


class InvalidComplexError(AnosovKitError, ValueError):
    """A double complex failed structural validation."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class RepresentationError(AnosovKitError, ValueError):
    """Matrix data is not a representation of the given presentation."""
