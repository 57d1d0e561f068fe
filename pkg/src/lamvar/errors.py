"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class InvalidInputError(ValueError):
    """Malformed or invariant-violating input.

    `field` names the offending field path (e.g. ``points[2][0]``) when known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class ResourceError(RuntimeError):
    """A solver cap was exceeded (candidate count, subdivision depth, node budget)."""


class PropertyViolationError(RuntimeError):
    """A checked mathematical property failed to hold."""
