"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an input violates a documented precondition."""


class ResourceError(RuntimeError):
    """Raised when a request exceeds a hard size or memory limit."""
