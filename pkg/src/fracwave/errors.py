"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative evaluation exhausted its budget before converging."""


class ResourceLimitError(RuntimeError):
    """A requested allocation exceeds the configured size cap."""
