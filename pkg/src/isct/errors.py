"""Exception hierarchy. Each class maps to one CLI exit code."""


class IsctError(Exception):
    exit_code = 1


class TheoremViolation(IsctError):
    """A mathematical check that must hold failed (exit code 1)."""

    exit_code = 1


class InputError(IsctError, ValueError):
    """Malformed or out-of-range input (exit code 2)."""

    exit_code = 2


class ResourceGuardError(IsctError):
    """An enumeration would exceed the configured tuple guard (exit code 3)."""

    exit_code = 3
