"""Exception hierarchy shared by every package.

Each family carries the process exit code that ``run_scenario.py`` returns
when the exception escapes a scenario.
"""


class FuncMechError(Exception):
    exit_code: int = 1


class ConfigError(FuncMechError):
    """Malformed, invalid or unknown configuration input."""

    exit_code = 2


class MissingColumnError(ConfigError):
    """A plot spec references a column the CSV series does not have."""


class InvariantError(FuncMechError, ValueError):
    """A value violates the invariant of the type or operation receiving it."""

    exit_code = 3


class NumericalError(FuncMechError):
    """A computation left its range of validity."""

    exit_code = 3


class DomainTooSmallError(NumericalError):
    pass


class MassLeakError(NumericalError):
    pass


class ClosureBreakdownError(NumericalError):
    pass


class WindowTooSmallError(NumericalError):
    pass


class UnsupportedOrderError(InvariantError):
    pass


class NonlinearPotentialError(InvariantError):
    pass


class DegreeTooHighError(InvariantError):
    pass


class InsufficientSamplesError(InvariantError):
    pass


class ZeroVarianceError(InvariantError):
    pass


class PreconditionError(InvariantError):
    pass


class OutputError(FuncMechError):
    exit_code = 4
