"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI lives in cli.py; solvers raise these
directly.
"""

from __future__ import annotations

import os


class CapdpError(Exception):
    """Base class for all package-specific errors."""


class ParseError(CapdpError):
    """An instance file could not be parsed. Carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(CapdpError):
    """Instance or argument data is structurally invalid."""


class OverflowGuardError(ValidationError):
    """Inputs are large enough that finite arithmetic could overflow."""


class ScaleLimitError(CapdpError):
    """An oracle or construction was asked to run beyond its size guard.

    Set CAPDP_GUARD_OVERRIDE=1 to lift the guard at your own risk.
    """


class InfeasibleError(CapdpError):
    """The requested budget admits no solution (e.g. no path short enough)."""


class NotConcaveError(CapdpError):
    """A sequence required to be concave (or k-step concave) is not."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotTransitiveError(ValidationError):
    """A check that needs a transitive DAG got a non-transitive one."""


class NonIntegralError(ValidationError):
    """A scaled construction failed to produce integer rewards."""


class ConcavityViolationError(CapdpError):
    """The penalized search detected that the underlying profile cannot be
    concave (diagnostic raised instead of returning a wrong value)."""


class OracleDisagreementError(CapdpError):
    """A cross-check run found the fast path and the oracle disagreeing."""


def guard_cells(cells: int, limit: int, what: str) -> None:
    """Reject work items over the cell guard unless the override is set."""
    if cells > limit and os.environ.get("CAPDP_GUARD_OVERRIDE") != "1":
        raise ScaleLimitError(
            f"{what}: {cells} cells exceeds the {limit} guard "
            f"(CAPDP_GUARD_OVERRIDE=1 lifts it)")
