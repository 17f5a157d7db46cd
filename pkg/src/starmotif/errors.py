"""Exception hierarchy shared across the package.

Every exception carries an ``exit_code`` used by the CLI:
1 for input problems, 2 for configuration problems, 3 for internal or
numerical failures.
"""

from __future__ import annotations


class StarmotifError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 3


class InputError(StarmotifError):
    """Bad input data: malformed files, invalid identifiers, out-of-range values."""

    exit_code = 1


class ConfigError(StarmotifError):
    """Invalid configuration parameter or parameter combination."""

    exit_code = 2


class UnknownAgentError(InputError):
    """Lookup of an agent id that is not present in the graph."""


class UndefinedStatisticError(InputError):
    """A statistic was requested on data for which it is undefined (e.g. empty)."""


class InsufficientSampleError(InputError):
    """A group has too few observations for the requested test."""

    def __init__(self, group: str, n: int, minimum: int = 2):
        self.group = group
        self.n = n
        super().__init__(
            f"group {group!r} has {n} record(s); at least {minimum} required"
        )


class DegenerateVarianceError(InputError):
    """Sample variance is zero where a positive variance is required."""


class ConvergenceError(StarmotifError):
    """Iterative numerical procedure failed to converge.

    ``last_iterate`` holds the final state (a node -> value map for power
    iteration) and ``residual`` the last measured residual, so callers can
    inspect how close the run got.
    """

    exit_code = 3

    def __init__(self, message: str, last_iterate=None, residual: float | None = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
