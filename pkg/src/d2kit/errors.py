"""Exception types shared across the toolkit."""

from __future__ import annotations

__all__ = ["InputError", "CheckError"]


class InputError(ValueError):
    """Malformed input: bad parameters, unparseable files, mismatched objects."""


class CheckError(RuntimeError):
    """A well-formed input failed a mathematical precondition or check."""
