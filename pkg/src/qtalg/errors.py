"""Exception types shared across the package."""

from __future__ import annotations


class QtalgError(Exception):
    """Base class for all library errors."""


class SpecializationError(QtalgError):
    """Evaluation at a point that is not allowed (pole, root of unity, ...)."""


class PoleError(QtalgError):
    """A rational function has a pole where it must not (or of too high order)."""


class WindowOverflowError(QtalgError):
    """A module action produced a shift that leaves the window."""

    def __init__(self, y, message: str = ""):
        self.y = tuple(y)
        super().__init__(message or f"shift leaves the window at y = {self.y}")


class EnumerationBoundError(QtalgError):
    """A group/orbit enumeration exceeded its configured bound."""


class DegenerateFormError(QtalgError):
    """The skew form is degenerate in a direction where separation is needed."""


class NormalFormError(QtalgError):
    """Input is outside the class handled by the q-normal-form algorithm."""


class ScalarEmbeddingError(QtalgError):
    """A coordinate value cannot be represented in the scalar field."""
