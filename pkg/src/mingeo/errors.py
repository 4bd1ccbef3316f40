"""Error types shared across the package.

Every raised condition carries a stable ``code`` string so the CLI can map
failures to exit codes (validation errors -> 2, precondition errors -> 3)
and tests can assert on the exact condition.
"""

from __future__ import annotations


class MinGeoError(Exception):
    """Base class; ``code`` identifies the condition."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class ValidationError(MinGeoError):
    """Input fails a type invariant (bad matrix kind, shape, or file)."""


class PreconditionError(MinGeoError):
    """Input is well formed but outside an operation's domain."""
