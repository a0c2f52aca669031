"""Exception types raised across the toolkit."""


class DimensionError(ValueError):
    """Subsystem dimensions are missing or do not match an operator."""


class StateError(ValueError):
    """A matrix fails the density-operator checks (hermiticity, trace, positivity)."""


class DomainError(ValueError):
    """A scalar argument lies outside the domain of a function."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (e.g. non-Hermitian eigh input)."""


class DegeneratePolarError(ArithmeticError):
    """The matrix handed to a polar decomposition is numerically rank deficient."""


class CapabilityError(ValueError):
    """The requested computation exceeds the dimension guard of an oracle."""


class ConfigError(ValueError):
    """An invalid sweep or optimizer configuration."""
