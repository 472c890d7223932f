"""Exception types shared across the toolkit."""


class KreinShiftError(Exception):
    """Base class for all toolkit errors."""


class PreconditionError(KreinShiftError, ValueError):
    """An input violates a documented bound (shape, dissipativity, branch cut,
    exclusion zone, conditioning)."""


class ConvergenceError(KreinShiftError, RuntimeError):
    """An iteration or panel budget was exhausted before the requested
    tolerance was met."""
