"""Error types shared across the engine, with stable machine codes.

Every error that can cross the HTTP boundary carries a ``code`` string so the
API layer can map it to exactly one wire-level error without string matching.
"""

from __future__ import annotations


class PalError(Exception):
    """Base class for engine errors."""

    code: str = "internal"
    retryable: bool = False

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ContractError(PalError):
    """A caller violated a precondition (bad argument, bad input shape)."""

    code = "invalid_request"


class NotFoundError(PalError):
    """A referenced entity does not exist."""

    code = "not_found"


class StateError(PalError):
    """The operation is not legal in the entity's current state."""

    code = "conflict"
