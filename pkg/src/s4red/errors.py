"""Exception types and enumeration caps shared by every module."""

import os

DEFAULT_CAP = 10**8


class ReductionError(Exception):
    """Base class for all package errors."""


class CapExceeded(ReductionError):
    """An exhaustive enumeration would exceed the configured cap."""


class DecompositionImpossible(ReductionError, ValueError):
    """The 1x1 matrix (1) over F2 is not a sum of two invertible matrices."""


class SearchFailed(ReductionError):
    """A constructive search ran out of budget without reaching its target."""


class ParseError(ReductionError, ValueError):
    """Malformed instance text; carries a 1-based line and column."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class BoundViolation(ReductionError, AssertionError):
    """A length or size bound that must hold was exceeded."""


def default_cap():
    """Enumeration cap, overridable through the S4R_CAP environment variable."""
    raw = os.environ.get("S4R_CAP")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            raise ValueError(f"S4R_CAP must be a number, got {raw!r}")
    return DEFAULT_CAP


def check_cap(count, cap=None):
    cap = default_cap() if cap is None else cap
    if count > cap:
        raise CapExceeded(f"enumeration of {count} points exceeds cap {cap}")
