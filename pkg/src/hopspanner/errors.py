"""Exception hierarchy shared by every module."""


class HopSpannerError(Exception):
    """Base class for all library errors."""


class ValidationError(HopSpannerError, ValueError):
    """Input violates a structural precondition (malformed tree, bad map, ...)."""


class DomainError(HopSpannerError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(HopSpannerError):
    """A configured capacity (table size, tree cap) would be exceeded."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
