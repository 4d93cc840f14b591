"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ContextMismatch(ValueError):
    """Two elements or vectors were built against incompatible contexts."""
