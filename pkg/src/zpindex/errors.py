"""Shared exception types."""
from __future__ import annotations


class ShapeError(ValueError):
    """Structurally invalid input: mismatched alphabets, bad cells, wrong arity."""


class NeededRangeError(ShapeError):
    """A windowed operation was given too little input.

    Carries the exact absolute indices that are required and the subset of
    them that is missing, so callers can widen the window precisely.
    """

    def __init__(self, message: str, needed: tuple[int, int], missing: tuple[int, ...]):
        super().__init__(message)
        self.needed = needed
        self.missing = missing


class NonFreeActionError(ShapeError):
    """An operation required a free action; `witness` is a fixed cell."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class ResourceCapError(RuntimeError):
    """A configurable resource cap was exceeded; no partial result is returned."""
