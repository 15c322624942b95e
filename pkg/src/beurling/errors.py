"""Exception types shared by the package."""


class BeurlingError(Exception):
    """Base class for all package errors."""


class ValidationError(BeurlingError, ValueError):
    """A parameter violates an operation's precondition."""


class OutOfRangeError(ValidationError):
    """A query lies beyond the range that was materialized."""


class EmptySystemError(ValidationError):
    pass


class ResourceError(BeurlingError):
    """The requested enumeration would exceed the configured memory cap."""
