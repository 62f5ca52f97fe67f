"""Exception types raised across the package."""


class DomainError(ValueError):
    """Quantum numbers or angles outside their allowed domain."""


class ValidationError(ValueError):
    """An object fails the physical or structural checks required of it."""
